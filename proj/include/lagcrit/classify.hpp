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

// Second-order classification of critical points: the Lagrangian Hessian is
// restricted to the tangent space of the constraints and its eigenvalue
// signs decide the verdict.

#ifndef LAGCRIT_CLASSIFY_HPP_
#define LAGCRIT_CLASSIFY_HPP_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lagcrit/dense.hpp"
#include "lagcrit/kkt.hpp"

namespace lagcrit {

enum class Verdict {
  kStrictLocalMin,
  kStrictLocalMax,
  kSaddle,
  kIndeterminate,
  kLicqFailure,
};

std::string_view to_string(Verdict v);
std::optional<Verdict> verdict_from_string(std::string_view s);

/// Which closed-form small-dimension test was evaluated alongside the
/// eigenvalue test.
enum class SpecializedKind {
  kTwoVarsOneConstraint,     // sign of v^T H v, v = (-dg/dx2, dg/dx1)
  kThreeVarsOneConstraint,   // a11 and det(A), A = W^T H W
  kThreeVarsTwoConstraints,  // sign of v^T H v, v = unit(grad g1 x grad g2)
};

std::string_view to_string(SpecializedKind k);

struct SpecializedCheck {
  SpecializedKind kind;
  std::vector<Vector> vectors;  // the tangent vectors used (not normalized)
  /// {v^T H v} for the scalar tests, {a11, det A} for the 2x2 test.
  Vector witnesses;
  Verdict verdict;
  bool agrees = false;  // verdict == general eigenvalue verdict
};

struct ClassificationReport {
  CriticalPoint point;
  bool licq_ok = false;
  std::vector<Vector> tangent_basis;  // n - m orthonormal vectors
  Matrix lagrangian_hessian;          // n x n
  Matrix projected_hessian;           // (n - m) x (n - m)
  Vector eigenvalues;                 // ascending
  Verdict verdict = Verdict::kLicqFailure;
  std::optional<SpecializedCheck> specialized;
};

/// grad^2 f(x) + sum_i lambda_i grad^2 g_i(x).
Matrix lagrangian_hessian(const Problem& p, const CriticalPoint& cp);

inline constexpr double kDefaultClassifyTol = 1e-8;

/// Full second-order report. With s = max(1, ||A||_inf) for the projected
/// Hessian A: every eigenvalue > tol*s gives kStrictLocalMin, every one
/// < -tol*s gives kStrictLocalMax, mixed strict signs give kSaddle, and
/// any eigenvalue within tol*s of zero gives kIndeterminate.
ClassificationReport classify(const Problem& p, const CriticalPoint& cp,
                              double tol = kDefaultClassifyTol);

/// As classify(), but with a caller-supplied orthonormal tangent basis.
/// Throws std::invalid_argument if the basis is not orthonormal or not
/// tangent to the constraints (both within 1e-9).
ClassificationReport classify_with_basis(const Problem& p, const CriticalPoint& cp,
                                         std::span<const Vector> basis,
                                         double tol = kDefaultClassifyTol);

/// Verdict from ascending eigenvalues of a projected Hessian with
/// infinity norm `norm`.
Verdict verdict_from_eigenvalues(std::span<const double> eigenvalues, double norm, double tol);

}  // namespace lagcrit

#endif  // LAGCRIT_CLASSIFY_HPP_
