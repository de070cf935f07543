// Copyright 2026 The lagcrit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense linear algebra for the n <= ~10 systems that show up in
// stationarity and second-order checks.

#ifndef LAGCRIT_DENSE_HPP_
#define LAGCRIT_DENSE_HPP_

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace lagcrit {

using Vector = std::vector<double>;

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  /// Matrix whose columns are `columns`.
  static Matrix from_columns(std::span<const Vector> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  Vector column(std::size_t c) const;
  std::span<const double> data() const noexcept { return data_; }

  Matrix transposed() const;
  /// Largest absolute row sum.
  double norm_inf() const;
  double max_abs() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

/// Solves A x = b by Gaussian elimination with partial pivoting. Throws
/// SingularMatrixError when a pivot falls below 1e-12 * max|A_ij|.
Vector solve_linear(const Matrix& a, std::span<const double> b);

/// Minimizes ||A x - b||_2 for a tall (rows >= cols) full-column-rank A via
/// Householder QR. Throws SingularMatrixError on rank deficiency.
Vector solve_least_squares(const Matrix& a, std::span<const double> b);

/// Orthonormal basis of {d : J d = 0} for an m x n Jacobian with m < n.
///
/// The rows of J are orthonormalized first (modified Gram-Schmidt, two
/// passes); coordinate vectors e_1..e_n are then projected off the row space
/// in index order and kept when their residual norm is >= 1e-8. Returns
/// nullopt when a row's residual falls below 1e-10 of its own norm, i.e. the
/// rows are linearly dependent.
std::optional<std::vector<Vector>> null_space_basis(const Matrix& j);

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
/// Throws std::invalid_argument if S is not symmetric within
/// 1e-12 * max(1, max|S_ij|).
Vector sym_eigenvalues(const Matrix& s);

struct SymmetricEigen {
  Vector values;  // ascending
  Matrix vectors; // column k pairs with values[k]
};
/// Same iteration as sym_eigenvalues, also accumulating the rotations.
SymmetricEigen sym_eigen(const Matrix& s);

/// Determinant by partial-pivot elimination; returns 0 for an exactly
/// vanishing pivot.
double determinant(const Matrix& a);

}  // namespace lagcrit

#endif  // LAGCRIT_DENSE_HPP_
