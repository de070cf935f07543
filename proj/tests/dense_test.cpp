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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lagcrit/dense.hpp"

namespace lagcrit {
namespace {

Matrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = u(gen);
  return a;
}

Matrix random_symmetric(std::mt19937_64& gen, std::size_t n) {
  Matrix a = random_matrix(gen, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
  return a;
}

double trace(const Matrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

TEST(SolveLinear, Identity) {
  const Vector b{1.5, -2, 3};
  EXPECT_EQ(solve_linear(Matrix::identity(3), b), b);
}

TEST(SolveLinear, TwoByTwo) {
  const Vector x = solve_linear(Matrix{{2, 2}, {2, 8}}, Vector{4, 10});
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 1.0, 1e-15);
}

TEST(SolveLinear, ZeroMatrixIsSingular) {
  EXPECT_THROW(solve_linear(Matrix(3, 3), Vector{1, 2, 3}), SingularMatrixError);
  EXPECT_THROW(solve_linear(Matrix{{1, 2}, {2, 4}}, Vector{1, 2}), SingularMatrixError);
}

TEST(SolveLinear, RandomResidual) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 8;
    Matrix a = random_matrix(gen, n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);  // well conditioned
    const Matrix bm = random_matrix(gen, n, 1);
    const Vector b = bm.column(0);
    const Vector x = solve_linear(a, b);
    const Vector ax = a * x;
    Vector r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = ax[i] - b[i];
    EXPECT_LE(norm2(r), 1e-10 * (1 + norm2(b)));
  }
}

TEST(SolveLeastSquares, ConsistentAndOverdetermined) {
  const Matrix a{{1, 0}, {0, 1}, {1, 1}};
  const Vector x = solve_least_squares(a, Vector{1, 2, 3});
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 2.0, 1e-14);
  // Normal equations oracle for an inconsistent right-hand side.
  const Vector y = solve_least_squares(a, Vector{1, 1, 0});
  const Matrix at = a.transposed();
  const Vector expected = solve_linear(at * a, at * Vector({1, 1, 0}));
  EXPECT_NEAR(y[0], expected[0], 1e-14);
  EXPECT_NEAR(y[1], expected[1], 1e-14);
}

TEST(NullSpace, CoordinateConstraint) {
  const auto basis = null_space_basis(Matrix{{0, 0, 1}});
  ASSERT_TRUE(basis.has_value());
  ASSERT_EQ(basis->size(), 2u);
  EXPECT_EQ((*basis)[0], (Vector{1, 0, 0}));
  EXPECT_EQ((*basis)[1], (Vector{0, 1, 0}));
}

TEST(NullSpace, TwoConstraintsLeaveOneDirection) {
  const auto basis = null_space_basis(Matrix{{2, 0, -2}, {1, 0, 1}});
  ASSERT_TRUE(basis.has_value());
  ASSERT_EQ(basis->size(), 1u);
  const Vector& v = (*basis)[0];
  EXPECT_NEAR(std::abs(v[1]), 1.0, 1e-15);
  EXPECT_NEAR(v[0], 0.0, 1e-15);
  EXPECT_NEAR(v[2], 0.0, 1e-15);
}

TEST(NullSpace, DependentRowsSignalled) {
  EXPECT_FALSE(null_space_basis(Matrix{{1, 2, 3}, {1, 2, 3}}).has_value());
  EXPECT_FALSE(null_space_basis(Matrix{{1, 2, 3}, {-2, -4, -6}}).has_value());
  EXPECT_FALSE(null_space_basis(Matrix{{0, 0, 0}}).has_value());
}

TEST(NullSpace, RandomInvariants) {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const std::size_t m = 1 + trial % (n - 1);
    const Matrix j = random_matrix(gen, m, n);
    const auto basis = null_space_basis(j);
    ASSERT_TRUE(basis.has_value());
    ASSERT_EQ(basis->size(), n - m);
    for (std::size_t a = 0; a < basis->size(); ++a) {
      EXPECT_LE(norm2(j * (*basis)[a]), 1e-9);
      for (std::size_t b = 0; b < basis->size(); ++b)
        EXPECT_NEAR(dot((*basis)[a], (*basis)[b]), a == b ? 1.0 : 0.0, 1e-10);
    }
  }
}

TEST(Eigenvalues, Diagonal) {
  Matrix d(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  EXPECT_EQ(sym_eigenvalues(d), (Vector{1, 2, 3}));
}

TEST(Eigenvalues, TwoByTwo) {
  const Vector e = sym_eigenvalues(Matrix{{2, 2}, {2, 8}});
  EXPECT_NEAR(e[0], 5 - std::sqrt(13.0), 1e-13);
  EXPECT_NEAR(e[1], 5 + std::sqrt(13.0), 1e-13);
}

TEST(Eigenvalues, Zero) { EXPECT_EQ(sym_eigenvalues(Matrix(4, 4)), (Vector{0, 0, 0, 0})); }

TEST(Eigenvalues, NonSymmetricRejected) {
  EXPECT_THROW(sym_eigenvalues(Matrix{{1, 2}, {0, 1}}), std::invalid_argument);
}

TEST(Eigenvalues, TraceAndDeterminant) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const Matrix s = random_symmetric(gen, n);
    const Vector e = sym_eigenvalues(s);
    ASSERT_TRUE(std::is_sorted(e.begin(), e.end()));
    double sum = 0.0, product = 1.0;
    for (double v : e) {
      sum += v;
      product *= v;
    }
    const double scale = s.norm_inf();
    EXPECT_NEAR(sum, trace(s), 1e-9 * scale);
    const double det = determinant(s);
    EXPECT_NEAR(product, det, 1e-9 * std::pow(std::max(1.0, scale), static_cast<double>(n)));
  }
}

TEST(Eigenvalues, EigenvectorsReconstruct) {
  std::mt19937_64 gen(24);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const Matrix s = random_symmetric(gen, n);
    const SymmetricEigen eig = sym_eigen(s);
    EXPECT_EQ(eig.values, sym_eigenvalues(s));
    for (std::size_t k = 0; k < n; ++k) {
      const Vector v = eig.vectors.column(k);
      const Vector sv = s * v;
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(sv[i], eig.values[k] * v[i], 1e-10);
      EXPECT_NEAR(norm2(v), 1.0, 1e-12);
    }
  }
}

TEST(Determinant, Examples) {
  EXPECT_NEAR(determinant(Matrix{{2, 2}, {2, 8}}), 12.0, 1e-14);
  EXPECT_EQ(determinant(Matrix::identity(5)), 1.0);
  EXPECT_NEAR(determinant(Matrix{{1, 2, 3}, {4, 5, 6}, {1, 2, 3}}), 0.0, 1e-12);
  EXPECT_NEAR(determinant(Matrix{{0, 1}, {1, 0}}), -1.0, 1e-15);
}

TEST(MatrixOps, ProductsAndNorms) {
  const Matrix a{{1, 2}, {3, 4}};
  EXPECT_EQ(a * Matrix::identity(2), a);
  EXPECT_EQ(a.transposed(), (Matrix{{1, 3}, {2, 4}}));
  EXPECT_EQ((a * Vector{1, 1}), (Vector{3, 7}));
  EXPECT_EQ(a.norm_inf(), 7.0);
  EXPECT_EQ(a.max_abs(), 4.0);
  const std::vector<Vector> cols{{1, 2}, {3, 4}};
  EXPECT_EQ(Matrix::from_columns(cols), (Matrix{{1, 3}, {2, 4}}));
  EXPECT_EQ(norm_inf(Vector{1, -5, 2}), 5.0);
  EXPECT_EQ(norm2(Vector{3, 4}), 5.0);
}

}  // namespace
}  // namespace lagcrit
