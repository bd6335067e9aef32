#pragma once

#include <cstddef>
#include <vector>

namespace def {

// Dense row-major matrix sized for this project's systems (at most ~20x20).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  static Matrix identity(std::size_t n);
};

Matrix matmul(const Matrix& lhs, const Matrix& rhs);
Matrix transpose(const Matrix& m);
Matrix madd(const Matrix& lhs, const Matrix& rhs);
Matrix mscale(const Matrix& m, double c);

// Solve A X = B by Gauss-Jordan elimination with partial pivoting.
// Throws SingularSystem when A is (numerically) rank-deficient.
Matrix solve_linear(Matrix a, Matrix b);

}  // namespace def
