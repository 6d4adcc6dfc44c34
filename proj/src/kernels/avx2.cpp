// Compiled with -mavx2 -mfma. Only reached through the dispatcher after a
// runtime CPU check; nothing here may be inlined into portable code, so this
// file avoids standard-library templates.

#include <immintrin.h>

#include "kernel_registry.hpp"
#include "mosgnn/kernels/kernels.hpp"

namespace mosgnn::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// 4 rows x 8 columns of C, full depth k.
inline void micro_4x8(std::size_t k, const double* a, std::size_t lda, const double* b,
                      std::size_t ldb, double* c, std::size_t ldc) {
  __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
  __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
  __m256d c20 = _mm256_setzero_pd(), c21 = _mm256_setzero_pd();
  __m256d c30 = _mm256_setzero_pd(), c31 = _mm256_setzero_pd();
  const double* a0 = a;
  const double* a1 = a + lda;
  const double* a2 = a + 2 * lda;
  const double* a3 = a + 3 * lda;
  for (std::size_t p = 0; p < k; ++p) {
    const double* bp = b + p * ldb;
    const __m256d b0 = _mm256_loadu_pd(bp);
    const __m256d b1 = _mm256_loadu_pd(bp + 4);
    __m256d av = _mm256_broadcast_sd(a0 + p);
    c00 = _mm256_fmadd_pd(av, b0, c00);
    c01 = _mm256_fmadd_pd(av, b1, c01);
    av = _mm256_broadcast_sd(a1 + p);
    c10 = _mm256_fmadd_pd(av, b0, c10);
    c11 = _mm256_fmadd_pd(av, b1, c11);
    av = _mm256_broadcast_sd(a2 + p);
    c20 = _mm256_fmadd_pd(av, b0, c20);
    c21 = _mm256_fmadd_pd(av, b1, c21);
    av = _mm256_broadcast_sd(a3 + p);
    c30 = _mm256_fmadd_pd(av, b0, c30);
    c31 = _mm256_fmadd_pd(av, b1, c31);
  }
  double* r0 = c;
  double* r1 = c + ldc;
  double* r2 = c + 2 * ldc;
  double* r3 = c + 3 * ldc;
  _mm256_storeu_pd(r0, _mm256_add_pd(_mm256_loadu_pd(r0), c00));
  _mm256_storeu_pd(r0 + 4, _mm256_add_pd(_mm256_loadu_pd(r0 + 4), c01));
  _mm256_storeu_pd(r1, _mm256_add_pd(_mm256_loadu_pd(r1), c10));
  _mm256_storeu_pd(r1 + 4, _mm256_add_pd(_mm256_loadu_pd(r1 + 4), c11));
  _mm256_storeu_pd(r2, _mm256_add_pd(_mm256_loadu_pd(r2), c20));
  _mm256_storeu_pd(r2 + 4, _mm256_add_pd(_mm256_loadu_pd(r2 + 4), c21));
  _mm256_storeu_pd(r3, _mm256_add_pd(_mm256_loadu_pd(r3), c30));
  _mm256_storeu_pd(r3 + 4, _mm256_add_pd(_mm256_loadu_pd(r3 + 4), c31));
}

// 1 row x 8 columns.
inline void micro_1x8(std::size_t k, const double* a, const double* b, std::size_t ldb,
                      double* c) {
  __m256d c0 = _mm256_setzero_pd(), c1 = _mm256_setzero_pd();
  for (std::size_t p = 0; p < k; ++p) {
    const double* bp = b + p * ldb;
    const __m256d av = _mm256_broadcast_sd(a + p);
    c0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(bp), c0);
    c1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(bp + 4), c1);
  }
  _mm256_storeu_pd(c, _mm256_add_pd(_mm256_loadu_pd(c), c0));
  _mm256_storeu_pd(c + 4, _mm256_add_pd(_mm256_loadu_pd(c + 4), c1));
}

// 1 row x 4 columns.
inline void micro_1x4(std::size_t k, const double* a, const double* b, std::size_t ldb,
                      double* c) {
  __m256d c0 = _mm256_setzero_pd();
  for (std::size_t p = 0; p < k; ++p) {
    c0 = _mm256_fmadd_pd(_mm256_broadcast_sd(a + p), _mm256_loadu_pd(b + p * ldb), c0);
  }
  _mm256_storeu_pd(c, _mm256_add_pd(_mm256_loadu_pd(c), c0));
}

// 1 row x 1 column, for the ragged right edge.
inline void micro_1x1(std::size_t k, const double* a, const double* b, std::size_t ldb,
                      double* c) {
  double s = 0.0;
  for (std::size_t p = 0; p < k; ++p) s = __builtin_fma(a[p], b[p * ldb], s);
  *c += s;
}

// Packed copy of a B block, reused across calls on the same thread.
struct PackBuffer {
  double* data = nullptr;
  std::size_t capacity = 0;
  ~PackBuffer() { delete[] data; }
  double* reserve(std::size_t count) {
    if (count > capacity) {
      delete[] data;
      data = new double[count];
      capacity = count;
    }
    return data;
  }
};

void gemm_block(std::size_t m, std::size_t width, std::size_t k, const double* a,
                std::size_t lda, const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const double* ai = a + i * lda;
    double* ci = c + i * ldc;
    std::size_t j = 0;
    for (; j + 8 <= width; j += 8) micro_4x8(k, ai, lda, b + j, ldb, ci + j, ldc);
    for (std::size_t r = 0; r < 4; ++r) {
      std::size_t jj = j;
      for (; jj + 4 <= width; jj += 4) micro_1x4(k, ai + r * lda, b + jj, ldb, ci + r * ldc + jj);
      for (; jj < width; ++jj) micro_1x1(k, ai + r * lda, b + jj, ldb, ci + r * ldc + jj);
    }
  }
  for (; i < m; ++i) {
    const double* ai = a + i * lda;
    double* ci = c + i * ldc;
    std::size_t j = 0;
    for (; j + 8 <= width; j += 8) micro_1x8(k, ai, b + j, ldb, ci + j);
    for (; j + 4 <= width; j += 4) micro_1x4(k, ai, b + j, ldb, ci + j);
    for (; j < width; ++j) micro_1x1(k, ai, b + j, ldb, ci + j);
  }
}

void gemm_avx2(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
               const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  // B is copied in kDepth x kPanel blocks so the microkernels stream a
  // contiguous, L2-resident block whatever the caller's stride.
  constexpr std::size_t kPanel = 64;
  constexpr std::size_t kDepth = 256;
  thread_local PackBuffer pack;
  double* packed = pack.reserve(kPanel * kDepth);
  for (std::size_t j0 = 0; j0 < n; j0 += kPanel) {
    const std::size_t width = (j0 + kPanel < n) ? kPanel : n - j0;
    for (std::size_t p0 = 0; p0 < k; p0 += kDepth) {
      const std::size_t depth = (p0 + kDepth < k) ? kDepth : k - p0;
      for (std::size_t p = 0; p < depth; ++p) {
        const double* src = b + (p0 + p) * ldb + j0;
        double* dst = packed + p * width;
        for (std::size_t j = 0; j < width; ++j) dst[j] = src[j];
      }
      gemm_block(m, width, depth, a + p0, lda, packed, width, c + j0, ldc);
    }
  }
}

void axpy_avx2(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] = __builtin_fma(alpha, x[i], y[i]);
}

double dot_avx2(std::size_t n, const double* x, const double* y) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s = __builtin_fma(x[i], y[i], s);
  return s;
}

double squared_distance_avx2(std::size_t n, const double* x, const double* y) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4));
    s0 = _mm256_fmadd_pd(d0, d0, s0);
    s1 = _mm256_fmadd_pd(d1, d1, s1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    s0 = _mm256_fmadd_pd(d0, d0, s0);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s = __builtin_fma(d, d, s);
  }
  return s;
}

}  // namespace

namespace detail {
const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{Backend::Avx2, "avx2", gemm_avx2, axpy_avx2, dot_avx2,
                                 squared_distance_avx2};
  return table;
}
}  // namespace detail

}  // namespace mosgnn::kernels
