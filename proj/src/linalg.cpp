#include "def/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "def/errors.hpp"

namespace def {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
  Matrix out(lhs.rows, rhs.cols);
  for (std::size_t i = 0; i < lhs.rows; ++i)
    for (std::size_t k = 0; k < lhs.cols; ++k) {
      double v = lhs.at(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols; ++j)
        out.at(i, j) += v * rhs.at(k, j);
    }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out.at(j, i) = m.at(i, j);
  return out;
}

Matrix madd(const Matrix& lhs, const Matrix& rhs) {
  Matrix out = lhs;
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += rhs.a[i];
  return out;
}

Matrix mscale(const Matrix& m, double c) {
  Matrix out = m;
  for (double& v : out.a) v *= c;
  return out;
}

Matrix solve_linear(Matrix a, Matrix b) {
  const std::size_t n = a.rows;

  // Pivot tolerance scaled by the largest entry so near-singular systems are
  // flagged rather than amplified.
  double max_entry = 0.0;
  for (double v : a.a) max_entry = std::max(max_entry, std::fabs(v));
  const double tol = std::max(max_entry, 1.0) * 1e-12;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a.at(r, col)) > std::fabs(a.at(pivot, col))) pivot = r;
    if (std::fabs(a.at(pivot, col)) <= tol)
      throw SingularSystem("rank-deficient system (pivot ~ 0 at column " +
                           std::to_string(col) + ")");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a.at(pivot, j), a.at(col, j));
      for (std::size_t j = 0; j < b.cols; ++j)
        std::swap(b.at(pivot, j), b.at(col, j));
    }

    double inv = 1.0 / a.at(col, col);
    for (std::size_t j = 0; j < n; ++j) a.at(col, j) *= inv;
    for (std::size_t j = 0; j < b.cols; ++j) b.at(col, j) *= inv;

    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double factor = a.at(r, col);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) a.at(r, j) -= factor * a.at(col, j);
      for (std::size_t j = 0; j < b.cols; ++j) b.at(r, j) -= factor * b.at(col, j);
    }
  }
  return b;
}

}  // namespace def
