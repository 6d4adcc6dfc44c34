#include "mosgnn/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "mosgnn/error.hpp"

namespace mosgnn {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_string());
  }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged initializer for DenseMatrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::from_external(std::size_t rows, std::size_t cols,
                                       std::vector<double> data) {
  DenseMatrix m(rows, cols, std::move(data));
  for (std::size_t r = 0; r < rows; ++r) {
    for (double v : m.row(r)) {
      if (!std::isfinite(v)) {
        throw DataError("non-finite value in row " + std::to_string(r));
      }
    }
  }
  return m;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void DenseMatrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  // Blocked to keep both sides cache-friendly for the 1000x500 shapes the model uses.
  constexpr std::size_t kBlock = 32;
  for (std::size_t i0 = 0; i0 < rows_; i0 += kBlock) {
    const std::size_t i1 = std::min(rows_, i0 + kBlock);
    for (std::size_t j0 = 0; j0 < cols_; j0 += kBlock) {
      const std::size_t j1 = std::min(cols_, j0 + kBlock);
      for (std::size_t i = i0; i < i1; ++i)
        for (std::size_t j = j0; j < j1; ++j) t.data_[j * rows_ + i] = data_[i * cols_ + j];
    }
  }
  return t;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string DenseMatrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shapes " + a.shape_string() + " and " +
                         b.shape_string());
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

DenseMatrix slice_rows(const DenseMatrix& m, std::size_t begin, std::size_t count) {
  if (begin + count > m.rows()) {
    throw DimensionError("slice_rows: rows " + std::to_string(begin) + "+" +
                         std::to_string(count) + " out of " + m.shape_string());
  }
  DenseMatrix out(count, m.cols());
  if (count > 0 && m.cols() > 0) {
    std::memcpy(out.data(), m.data() + begin * m.cols(), count * m.cols() * sizeof(double));
  }
  return out;
}

DenseMatrix concat_rows(std::span<const DenseMatrix> parts) {
  if (parts.empty()) return {};
  const std::size_t cols = parts.front().cols();
  std::size_t rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) {
      throw DimensionError("concat_rows: column mismatch " + std::to_string(cols) + " vs " +
                           std::to_string(p.cols()));
    }
    rows += p.rows();
  }
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const auto& p : parts) data.insert(data.end(), p.values().begin(), p.values().end());
  return DenseMatrix(rows, cols, std::move(data));
}

}  // namespace mosgnn
