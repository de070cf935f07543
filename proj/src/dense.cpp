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

#include "lagcrit/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace lagcrit {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_columns(std::span<const Vector> columns) {
  if (columns.empty()) return {};
  Matrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != m.rows()) throw std::invalid_argument("Matrix: ragged columns");
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (double v : row(r)) sum += std::abs(v);
    best = std::max(best, sum);
  }
  return best;
}

double Matrix::max_abs() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix product: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("Matrix-vector product: shape mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm_inf(std::span<const double> v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

Vector solve_linear(const Matrix& a, std::span<const double> b) {
  if (!a.square()) throw std::invalid_argument("solve_linear: matrix is not square");
  if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: rhs length mismatch");
  const std::size_t n = a.rows();
  const double threshold = 1e-12 * a.max_abs();

  Matrix lu = a;
  Vector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    if (!(std::abs(lu(pivot, k)) > threshold))
      throw SingularMatrixError("solve_linear: singular matrix");
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
      std::swap(x[k], x[pivot]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = lu(i, k) / lu(k, k);
      if (factor == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) lu(i, j) -= factor * lu(k, j);
      x[i] -= factor * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= lu(k, j) * x[j];
    x[k] = s / lu(k, k);
  }
  return x;
}

Vector solve_least_squares(const Matrix& a, std::span<const double> b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) throw std::invalid_argument("solve_least_squares: matrix is wide");
  if (b.size() != m) throw std::invalid_argument("solve_least_squares: rhs length mismatch");

  Matrix r = a;
  Vector y(b.begin(), b.end());
  const double threshold = 1e-12 * std::max(a.max_abs(), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k; i < m; ++i) alpha += r(i, k) * r(i, k);
    alpha = std::sqrt(alpha);
    if (!(alpha > threshold)) throw SingularMatrixError("solve_least_squares: rank deficient");
    if (r(k, k) > 0) alpha = -alpha;

    // Householder vector v = x - alpha e_k, stored in a scratch copy.
    Vector v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = r(i, k);
    v[0] -= alpha;
    const double vnorm2 = dot(v, v);
    if (vnorm2 == 0.0) continue;

    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += v[i - k] * r(i, j);
      s = 2.0 * s / vnorm2;
      for (std::size_t i = k; i < m; ++i) r(i, j) -= s * v[i - k];
    }
    double s = 0.0;
    for (std::size_t i = k; i < m; ++i) s += v[i - k] * y[i];
    s = 2.0 * s / vnorm2;
    for (std::size_t i = k; i < m; ++i) y[i] -= s * v[i - k];
  }

  Vector x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = y[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= r(k, j) * x[j];
    x[k] = s / r(k, k);
  }
  return x;
}

namespace {

// Removes the components of `w` along the orthonormal vectors in `basis`.
// Two passes of modified Gram-Schmidt keep the result orthogonal to working
// precision.
void project_out(Vector& w, const std::vector<Vector>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& q : basis) {
      const double c = dot(q, w);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * q[i];
    }
  }
}

void scale(Vector& w, double factor) {
  for (double& v : w) v *= factor;
}

}  // namespace

std::optional<std::vector<Vector>> null_space_basis(const Matrix& j) {
  const std::size_t m = j.rows();
  const std::size_t n = j.cols();
  if (m == 0 || n <= m) throw std::invalid_argument("null_space_basis: need 1 <= m < n");

  std::vector<Vector> row_basis;
  for (std::size_t r = 0; r < m; ++r) {
    Vector w(j.row(r).begin(), j.row(r).end());
    const double original = norm2(w);
    project_out(w, row_basis);
    const double residual = norm2(w);
    if (original == 0.0 || residual < 1e-10 * original) return std::nullopt;
    scale(w, 1.0 / residual);
    row_basis.push_back(std::move(w));
  }

  std::vector<Vector> all = row_basis;
  std::vector<Vector> tangent;
  for (std::size_t k = 0; k < n && tangent.size() < n - m; ++k) {
    Vector w(n, 0.0);
    w[k] = 1.0;
    project_out(w, all);
    const double residual = norm2(w);
    if (residual < 1e-8) continue;
    scale(w, 1.0 / residual);
    all.push_back(w);
    tangent.push_back(std::move(w));
  }
  return tangent;
}

namespace {

void check_symmetric(const Matrix& s) {
  if (!s.square()) throw std::invalid_argument("sym_eigen: matrix is not square");
  const double tol = 1e-12 * std::max(1.0, s.max_abs());
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t k = i + 1; k < s.cols(); ++k)
      if (std::abs(s(i, k) - s(k, i)) > tol)
        throw std::invalid_argument("sym_eigen: matrix is not symmetric");
}

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (i != k) sum += a(i, k) * a(i, k);
  return std::sqrt(sum);
}

double frobenius(const Matrix& a) { return norm2(a.data()); }

SymmetricEigen jacobi(const Matrix& s, bool want_vectors) {
  check_symmetric(s);
  const std::size_t n = s.rows();
  Matrix a = s;
  // Exact symmetrization so every rotation works on a symmetric matrix.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k) a(i, k) = a(k, i) = 0.5 * (a(i, k) + a(k, i));
  Matrix v = want_vectors ? Matrix::identity(n) : Matrix();

  const double target = 1e-12 * frobenius(a);
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) >= target; ++sweep) {
    if (off_diagonal_norm(a) == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;

        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v(k, p);
            const double vkq = v(k, q);
            v(k, p) = c * vkp - sn * vkq;
            v(k, q) = sn * vkp + c * vkq;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return a(l, l) < a(r, r); });

  SymmetricEigen out;
  out.values.reserve(n);
  for (std::size_t k : order) out.values.push_back(a(k, k));
  if (want_vectors) {
    out.vectors = Matrix(n, n);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

}  // namespace

Vector sym_eigenvalues(const Matrix& s) { return jacobi(s, false).values; }

SymmetricEigen sym_eigen(const Matrix& s) { return jacobi(s, true); }

double determinant(const Matrix& a) {
  if (!a.square()) throw std::invalid_argument("determinant: matrix is not square");
  const std::size_t n = a.rows();
  Matrix lu = a;
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    if (lu(pivot, k) == 0.0) return 0.0;
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
      det = -det;
    }
    det *= lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = lu(i, k) / lu(k, k);
      for (std::size_t j = k; j < n; ++j) lu(i, j) -= factor * lu(k, j);
    }
  }
  return det;
}

}  // namespace lagcrit
