// AArch64 Advanced SIMD variant. NEON is mandatory on AArch64, so no runtime
// check is needed beyond the build-time guard.

#include <arm_neon.h>

#include "kernel_registry.hpp"
#include "mosgnn/kernels/kernels.hpp"

namespace mosgnn::kernels {
namespace {

// 4 rows x 4 columns of C, full depth k.
inline void micro_4x4(std::size_t k, const double* a, std::size_t lda, const double* b,
                      std::size_t ldb, double* c, std::size_t ldc) {
  float64x2_t acc[4][2];
  for (auto& row : acc) row[0] = row[1] = vdupq_n_f64(0.0);
  for (std::size_t p = 0; p < k; ++p) {
    const double* bp = b + p * ldb;
    const float64x2_t b0 = vld1q_f64(bp);
    const float64x2_t b1 = vld1q_f64(bp + 2);
    for (std::size_t r = 0; r < 4; ++r) {
      const float64x2_t av = vdupq_n_f64(a[r * lda + p]);
      acc[r][0] = vfmaq_f64(acc[r][0], av, b0);
      acc[r][1] = vfmaq_f64(acc[r][1], av, b1);
    }
  }
  for (std::size_t r = 0; r < 4; ++r) {
    double* cr = c + r * ldc;
    vst1q_f64(cr, vaddq_f64(vld1q_f64(cr), acc[r][0]));
    vst1q_f64(cr + 2, vaddq_f64(vld1q_f64(cr + 2), acc[r][1]));
  }
}

inline void micro_1x1(std::size_t k, const double* a, const double* b, std::size_t ldb,
                      double* c) {
  double s = 0.0;
  for (std::size_t p = 0; p < k; ++p) s = __builtin_fma(a[p], b[p * ldb], s);
  *c += s;
}

void gemm_neon(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
               const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  constexpr std::size_t kPanel = 64;
  for (std::size_t j0 = 0; j0 < n; j0 += kPanel) {
    const std::size_t j1 = (j0 + kPanel < n) ? j0 + kPanel : n;
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      std::size_t j = j0;
      for (; j + 4 <= j1; j += 4) micro_4x4(k, a + i * lda, lda, b + j, ldb, c + i * ldc + j, ldc);
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t jj = j; jj < j1; ++jj)
          micro_1x1(k, a + (i + r) * lda, b + jj, ldb, c + (i + r) * ldc + jj);
    }
    for (; i < m; ++i)
      for (std::size_t j = j0; j < j1; ++j) micro_1x1(k, a + i * lda, b + j, ldb, c + i * ldc + j);
  }
}

void axpy_neon(std::size_t n, double alpha, const double* x, double* y) {
  const float64x2_t av = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = __builtin_fma(alpha, x[i], y[i]);
}

double dot_neon(std::size_t n, const double* x, const double* y) {
  float64x2_t s0 = vdupq_n_f64(0.0), s1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 = vfmaq_f64(s0, vld1q_f64(x + i), vld1q_f64(y + i));
    s1 = vfmaq_f64(s1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(s0, s1));
  for (; i < n; ++i) s = __builtin_fma(x[i], y[i], s);
  return s;
}

double squared_distance_neon(std::size_t n, const double* x, const double* y) {
  float64x2_t s0 = vdupq_n_f64(0.0), s1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    s0 = vfmaq_f64(s0, d0, d0);
    s1 = vfmaq_f64(s1, d1, d1);
  }
  double s = vaddvq_f64(vaddq_f64(s0, s1));
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s = __builtin_fma(d, d, s);
  }
  return s;
}

}  // namespace

namespace detail {
const KernelTable& neon_table_unchecked() {
  static const KernelTable table{Backend::Neon, "neon", gemm_neon, axpy_neon, dot_neon,
                                 squared_distance_neon};
  return table;
}
}  // namespace detail

}  // namespace mosgnn::kernels
