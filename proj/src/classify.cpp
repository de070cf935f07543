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

#include "lagcrit/classify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace lagcrit {

namespace {

constexpr std::array<std::pair<Verdict, std::string_view>, 5> kVerdictNames{{
    {Verdict::kStrictLocalMin, "StrictLocalMin"},
    {Verdict::kStrictLocalMax, "StrictLocalMax"},
    {Verdict::kSaddle, "Saddle"},
    {Verdict::kIndeterminate, "Indeterminate"},
    {Verdict::kLicqFailure, "LicqFailure"},
}};

}  // namespace

std::string_view to_string(Verdict v) {
  for (const auto& [verdict, name] : kVerdictNames)
    if (verdict == v) return name;
  return "?";
}

std::optional<Verdict> verdict_from_string(std::string_view s) {
  for (const auto& [verdict, name] : kVerdictNames)
    if (name == s) return verdict;
  return std::nullopt;
}

std::string_view to_string(SpecializedKind k) {
  switch (k) {
    case SpecializedKind::kTwoVarsOneConstraint: return "n2m1-vHv";
    case SpecializedKind::kThreeVarsOneConstraint: return "n3m1-a11-det";
    case SpecializedKind::kThreeVarsTwoConstraints: return "n3m2-vHv";
  }
  return "?";
}

Matrix lagrangian_hessian(const Problem& p, const CriticalPoint& cp) {
  if (cp.x.size() != p.n() || cp.lambda.size() != p.m())
    throw std::invalid_argument("critical point dimensions do not match the problem");
  // The upper-left block of the KKT matrix is exactly the Lagrangian Hessian.
  const Matrix k = kkt_jacobian(p, cp.x, cp.lambda);
  Matrix h(p.n(), p.n());
  for (std::size_t r = 0; r < p.n(); ++r)
    for (std::size_t c = 0; c < p.n(); ++c) h(r, c) = k(r, c);
  return h;
}

Verdict verdict_from_eigenvalues(std::span<const double> eigenvalues, double norm, double tol) {
  if (eigenvalues.empty()) return Verdict::kIndeterminate;
  const double threshold = tol * std::max(1.0, norm);
  const double lo = *std::min_element(eigenvalues.begin(), eigenvalues.end());
  const double hi = *std::max_element(eigenvalues.begin(), eigenvalues.end());
  if (lo > threshold) return Verdict::kStrictLocalMin;
  if (hi < -threshold) return Verdict::kStrictLocalMax;
  if (lo < -threshold && hi > threshold) return Verdict::kSaddle;
  return Verdict::kIndeterminate;
}

namespace {

double quadratic_form(const Matrix& h, const Vector& v) { return dot(v, h * v); }

Verdict scalar_verdict(double vhv, double vv, double tol) {
  const double curvature = vhv / vv;
  const Vector single{curvature};
  return verdict_from_eigenvalues(single, std::abs(curvature), tol);
}

// Closed-form tests built from explicit perpendicular vectors, without
// orthonormalization.
std::optional<SpecializedCheck> specialized_check(const Matrix& jg, const Matrix& h, double tol) {
  const std::size_t m = jg.rows();
  const std::size_t n = jg.cols();
  SpecializedCheck check{};

  if (n == 2 && m == 1) {
    check.kind = SpecializedKind::kTwoVarsOneConstraint;
    const Vector v{-jg(0, 1), jg(0, 0)};
    const double vhv = quadratic_form(h, v);
    check.vectors = {v};
    check.witnesses = {vhv};
    check.verdict = scalar_verdict(vhv, dot(v, v), tol);
    return check;
  }

  if (n == 3 && m == 1) {
    check.kind = SpecializedKind::kThreeVarsOneConstraint;
    const auto row = jg.row(0);
    // Pivot on the first component that is at least half the largest one;
    // the two vectors (g_j / g_k) e_k - e_j are then perpendicular to the
    // gradient and independent.
    const double largest = norm_inf(row);
    std::size_t pivot = 0;
    while (std::abs(row[pivot]) < 0.5 * largest) ++pivot;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j == pivot) continue;
      Vector v(3, 0.0);
      v[pivot] = row[j] / row[pivot];
      v[j] = -1.0;
      check.vectors.push_back(v);
    }
    const Matrix w = Matrix::from_columns(check.vectors);
    Matrix a = w.transposed() * h * w;
    a(0, 1) = a(1, 0) = 0.5 * (a(0, 1) + a(1, 0));
    const double a11 = a(0, 0);
    const double det = determinant(a);
    check.witnesses = {a11, det};

    const double s = std::max(1.0, a.norm_inf());
    const double t1 = tol * s;
    const double t2 = tol * s * s;
    if (det > t2 && a11 > t1) {
      check.verdict = Verdict::kStrictLocalMin;
    } else if (det > t2 && a11 < -t1) {
      check.verdict = Verdict::kStrictLocalMax;
    } else if (det < -t2) {
      check.verdict = Verdict::kSaddle;
    } else {
      check.verdict = Verdict::kIndeterminate;
    }
    return check;
  }

  if (n == 3 && m == 2) {
    check.kind = SpecializedKind::kThreeVarsTwoConstraints;
    const auto a = jg.row(0);
    const auto b = jg.row(1);
    Vector v{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    const double len = norm2(v);
    for (double& c : v) c /= len;
    const double vhv = quadratic_form(h, v);
    check.vectors = {v};
    check.witnesses = {vhv};
    check.verdict = scalar_verdict(vhv, 1.0, tol);
    return check;
  }

  return std::nullopt;
}

ClassificationReport finish_report(const Problem& p, const CriticalPoint& cp, const Matrix& jg,
                                   std::vector<Vector> basis, double tol) {
  ClassificationReport report;
  report.point = cp;
  report.licq_ok = true;
  report.tangent_basis = std::move(basis);
  report.lagrangian_hessian = lagrangian_hessian(p, cp);

  const Matrix v = Matrix::from_columns(report.tangent_basis);
  Matrix a = v.transposed() * report.lagrangian_hessian * v;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  report.projected_hessian = a;
  report.eigenvalues = sym_eigenvalues(a);
  report.verdict = verdict_from_eigenvalues(report.eigenvalues, a.norm_inf(), tol);

  report.specialized = specialized_check(jg, report.lagrangian_hessian, tol);
  if (report.specialized) report.specialized->agrees = report.specialized->verdict == report.verdict;
  return report;
}

}  // namespace

ClassificationReport classify(const Problem& p, const CriticalPoint& cp, double tol) {
  if (cp.x.size() != p.n() || cp.lambda.size() != p.m())
    throw std::invalid_argument("critical point dimensions do not match the problem");
  const Matrix jg = constraint_jacobian(p, cp.x);
  auto basis = null_space_basis(jg);
  if (!basis) {
    ClassificationReport report;
    report.point = cp;
    report.licq_ok = false;
    report.verdict = Verdict::kLicqFailure;
    return report;
  }
  return finish_report(p, cp, jg, std::move(*basis), tol);
}

ClassificationReport classify_with_basis(const Problem& p, const CriticalPoint& cp,
                                         std::span<const Vector> basis, double tol) {
  if (cp.x.size() != p.n() || cp.lambda.size() != p.m())
    throw std::invalid_argument("critical point dimensions do not match the problem");
  const Matrix jg = constraint_jacobian(p, cp.x);
  if (!null_space_basis(jg)) {
    ClassificationReport report;
    report.point = cp;
    report.verdict = Verdict::kLicqFailure;
    return report;
  }
  if (basis.size() != p.n() - p.m()) throw std::invalid_argument("basis has the wrong size");
  const double jscale = std::max(1.0, jg.max_abs());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != p.n()) throw std::invalid_argument("basis vector has the wrong length");
    if (norm_inf(jg * basis[i]) > 1e-9 * jscale)
      throw std::invalid_argument("basis vector is not tangent to the constraints");
    for (std::size_t j = i; j < basis.size(); ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(dot(basis[i], basis[j]) - expected) > 1e-9)
        throw std::invalid_argument("basis is not orthonormal");
    }
  }
  return finish_report(p, cp, jg, std::vector<Vector>(basis.begin(), basis.end()), tol);
}

}  // namespace lagcrit
