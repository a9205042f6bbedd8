#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mgdl {

/// Dense row-major matrix of 64-bit floats. Rows double as samples when a
/// Matrix holds a data batch (one sample per row).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), values(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  std::span<double> row(std::size_t r) {
    return {values.data() + r * cols, cols};
  }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }

  bool empty() const { return values.empty(); }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Squared Frobenius norm.
inline double squared_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.values) s += v * v;
  return s;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  require(a.rows == b.rows && a.cols == b.cols, "matrix shape mismatch");
  Matrix out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    out.values[i] = a.values[i] - b.values[i];
  return out;
}

inline void add_in_place(Matrix& a, const Matrix& b) {
  require(a.rows == b.rows && a.cols == b.cols, "matrix shape mismatch");
  for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
}

}  // namespace mgdl
