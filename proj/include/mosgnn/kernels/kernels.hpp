#pragma once

#include <cstddef>
#include <string_view>

// Inner-loop arithmetic used by the dense/sparse primitives and the k-NN
// builder. Every backend implements the same table; the scalar table is the
// reference the vector variants are tested against.
//
// Results are deterministic for a given backend. Backends differ from each
// other only by floating-point rounding (FMA contraction and reduction order).

namespace mosgnn::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;
  std::string_view name;

  /// C[m x n] += A[m x k] * B[k x n]; all row-major with leading dimensions.
  void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
               const double* b, std::size_t ldb, double* c, std::size_t ldc);
  /// y += alpha * x
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
  double (*dot)(std::size_t n, const double* x, const double* y);
  /// sum_i (x_i - y_i)^2
  double (*squared_distance)(std::size_t n, const double* x, const double* y);
};

const KernelTable& scalar_table();
/// nullptr when the backend was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_table();
const KernelTable* neon_table();

bool available(Backend b);
const KernelTable& table_for(Backend b);

/// Table used by the library. Chosen once from CPU features (best available),
/// overridable by MOSGNN_KERNELS=scalar|avx2|neon or `select_backend`.
const KernelTable& active();
void select_backend(Backend b);
Backend parse_backend(std::string_view name);

/// Selects a backend for the lifetime of the guard; restores the previous one.
class ScopedBackend {
 public:
  explicit ScopedBackend(Backend b);
  ~ScopedBackend();
  ScopedBackend(const ScopedBackend&) = delete;
  ScopedBackend& operator=(const ScopedBackend&) = delete;

 private:
  Backend previous_;
};

}  // namespace mosgnn::kernels
