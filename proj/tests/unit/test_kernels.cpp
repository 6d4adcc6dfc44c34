#include <vector>

#include "helpers.hpp"
#include "mosgnn/error.hpp"
#include "mosgnn/kernels/kernels.hpp"
#include "mosgnn/ops.hpp"

using namespace mosgnn;
using testutil::random_matrix;

namespace {

std::vector<const kernels::KernelTable*> vector_tables() {
  std::vector<const kernels::KernelTable*> out;
  if (auto* t = kernels::avx2_table()) out.push_back(t);
  if (auto* t = kernels::neon_table()) out.push_back(t);
  return out;
}

// Odd shapes exercise every edge path of the blocked kernels.
const std::size_t kShapes[][3] = {{1, 1, 1},   {3, 5, 7},    {4, 8, 1},    {5, 9, 3},
                                  {7, 13, 17}, {17, 70, 33}, {64, 64, 64}, {33, 130, 300},
                                  {2, 3, 600}, {9, 1, 257}};

}  // namespace

TEST_CASE("scalar table is always available and is the reference") {
  CHECK(kernels::available(kernels::Backend::Scalar));
  CHECK(kernels::scalar_table().backend == kernels::Backend::Scalar);
  CHECK(&kernels::table_for(kernels::Backend::Scalar) == &kernels::scalar_table());
}

TEST_CASE("backend names parse and unknown names are rejected") {
  CHECK(kernels::parse_backend("scalar") == kernels::Backend::Scalar);
  CHECK(kernels::parse_backend("avx2") == kernels::Backend::Avx2);
  CHECK(kernels::parse_backend("neon") == kernels::Backend::Neon);
  CHECK_THROWS_AS(kernels::parse_backend("sse9"), ParameterError);
}

TEST_CASE("scoped backend selection restores the previous table") {
  const auto before = kernels::active().backend;
  {
    kernels::ScopedBackend guard(kernels::Backend::Scalar);
    CHECK(kernels::active().backend == kernels::Backend::Scalar);
  }
  CHECK(kernels::active().backend == before);
}

TEST_CASE("vector gemm matches scalar gemm on ragged shapes") {
  const auto& ref = kernels::scalar_table();
  for (const auto* t : vector_tables()) {
    CAPTURE(t->name);
    for (const auto& s : kShapes) {
      const std::size_t m = s[0], n = s[1], k = s[2];
      CAPTURE(m);
      CAPTURE(n);
      CAPTURE(k);
      const auto a = random_matrix(m, k, m * 31 + k);
      const auto b = random_matrix(k, n, n * 17 + k);
      const auto c0 = random_matrix(m, n, m + n);
      DenseMatrix c_ref = c0, c_vec = c0;
      ref.gemm(m, n, k, a.data(), k, b.data(), n, c_ref.data(), n);
      t->gemm(m, n, k, a.data(), k, b.data(), n, c_vec.data(), n);
      CHECK(max_abs_diff(c_ref, c_vec) <= 1e-12 * static_cast<double>(k));
    }
  }
}

TEST_CASE("vector gemm honours leading dimensions of sub-blocks") {
  for (const auto* t : vector_tables()) {
    const auto big_a = random_matrix(20, 40, 1);
    const auto big_b = random_matrix(40, 50, 2);
    DenseMatrix c_ref(11, 13), c_vec(11, 13);
    // A = big_a[2:13, 3:22], B = big_b[3:22, 5:18]
    const double* a = big_a.data() + 2 * 40 + 3;
    const double* b = big_b.data() + 3 * 50 + 5;
    kernels::scalar_table().gemm(11, 13, 19, a, 40, b, 50, c_ref.data(), 13);
    t->gemm(11, 13, 19, a, 40, b, 50, c_vec.data(), 13);
    CHECK(max_abs_diff(c_ref, c_vec) < 1e-13);
  }
}

TEST_CASE("vector axpy, dot and squared distance match scalar") {
  const auto& ref = kernels::scalar_table();
  for (const auto* t : vector_tables()) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 930u}) {
      CAPTURE(n);
      const auto x = random_matrix(1, n, n + 1);
      const auto y = random_matrix(1, n, n + 2);
      DenseMatrix y_ref = y, y_vec = y;
      ref.axpy(n, 0.37, x.data(), y_ref.data());
      t->axpy(n, 0.37, x.data(), y_vec.data());
      CHECK(max_abs_diff(y_ref, y_vec) <= 1e-15);
      const double tol = 1e-14 * static_cast<double>(n + 1);
      CHECK(std::abs(ref.dot(n, x.data(), y.data()) - t->dot(n, x.data(), y.data())) <= tol);
      CHECK(std::abs(ref.squared_distance(n, x.data(), y.data()) -
                     t->squared_distance(n, x.data(), y.data())) <= tol);
    }
  }
}

TEST_CASE("every backend reproduces the independent matmul oracle") {
  const auto a = random_matrix(37, 93, 5);
  const auto b = random_matrix(93, 21, 6);
  const auto oracle = testutil::naive_matmul(a, b);
  std::vector<kernels::Backend> backends{kernels::Backend::Scalar};
  for (const auto* t : vector_tables()) backends.push_back(t->backend);
  for (auto be : backends) {
    kernels::ScopedBackend guard(be);
    CAPTURE(kernels::active().name);
    CHECK(max_abs_diff(ops::matmul(a, b), oracle) < 1e-12);
    CHECK(max_abs_diff(ops::matmul_tn(a.transposed(), b), oracle) < 1e-12);
    CHECK(max_abs_diff(ops::matmul_nt(a, b.transposed()), oracle) < 1e-12);
  }
}

TEST_CASE("a backend is deterministic across repeated calls") {
  const auto a = random_matrix(50, 70, 9);
  const auto b = random_matrix(70, 30, 10);
  CHECK(ops::matmul(a, b) == ops::matmul(a, b));
}
