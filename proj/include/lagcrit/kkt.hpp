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

#ifndef LAGCRIT_KKT_HPP_
#define LAGCRIT_KKT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lagcrit/dense.hpp"
#include "lagcrit/expr.hpp"

namespace lagcrit {

struct Interval {
  double lo = -5.0;
  double hi = 5.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// minimize objective(x) subject to constraints[i](x) = 0.
struct Problem {
  std::vector<std::string> variables;
  Expression objective;
  std::vector<Expression> constraints;
  std::vector<Interval> box;  // one per variable; empty means [-5, 5]^n

  std::size_t n() const noexcept { return variables.size(); }
  std::size_t m() const noexcept { return constraints.size(); }
  /// The sampling box with defaults filled in.
  std::vector<Interval> sample_box() const;
};

/// Parses objective and constraint text over `variables` and validates the
/// result.
Problem make_problem(std::vector<std::string> variables, std::string_view objective,
                     const std::vector<std::string>& constraints, std::vector<Interval> box = {});

/// Throws std::invalid_argument unless every expression has arity n,
/// 1 <= m < n, and the box (if given) has n non-degenerate intervals.
void validate(const Problem& p);

/// DomainError raised while evaluating a specific expression of a problem.
/// `expression` is -1 for the objective, otherwise the constraint index.
class ProblemDomainError : public DomainError {
 public:
  ProblemDomainError(const DomainError& cause, int expression);
  int expression() const noexcept { return expression_; }

 private:
  int expression_;
};

struct CriticalPoint {
  Vector x;
  Vector lambda;
  double residual_norm = 0.0;  // ||kkt_residual||_inf
  std::size_t iterations = 0;  // Newton iterations until the tolerance was met
};

struct SolverConfig {
  std::size_t starts = 64;
  std::size_t max_newton_iters = 100;
  double stationarity_tol = 1e-9;
  double dedup_radius = 1e-6;
  double min_step = 0x1p-30;
  std::uint64_t rng_seed = 0;

  /// Throws std::invalid_argument unless all fields are positive and
  /// dedup_radius > stationarity_tol.
  void validate() const;
};

/// (grad f + sum_i lambda_i grad g_i, g_1..g_m), length n + m.
Vector kkt_residual(const Problem& p, std::span<const double> x, std::span<const double> lambda);

/// [[H_L, Jg^T], [Jg, 0]] where H_L is the Lagrangian Hessian and Jg the
/// m x n constraint Jacobian.
Matrix kkt_jacobian(const Problem& p, std::span<const double> x, std::span<const double> lambda);

/// m x n matrix whose rows are the constraint gradients.
Matrix constraint_jacobian(const Problem& p, std::span<const double> x);

enum class DivergenceReason {
  kIterationLimit,
  kStepCollapse,
  kSingularJacobian,
  kLeftBox,
  kDomain,
};

struct Divergence {
  DivergenceReason reason;
  std::size_t iterations = 0;
};

using SolveOutcome = std::variant<CriticalPoint, Divergence>;

/// Damped Newton on kkt_residual from (start_x, start_lambda).
///
/// Each iteration tries the full Newton step and halves it until the
/// residual 2-norm decreases; a step shorter than cfg.min_step ends the run.
/// Success once ||residual||_inf <= cfg.stationarity_tol. The accepted point
/// is then polished with further Newton steps while they keep reducing the
/// residual, and a point where the KKT matrix is numerically singular is
/// refined on the augmented system {F(z) = 0, K(z) v = 0}.
SolveOutcome solve_from(const Problem& p, std::span<const double> start_x,
                        std::span<const double> start_lambda, const SolverConfig& cfg);

struct SearchResult {
  std::vector<CriticalPoint> points;  // sorted lexicographically by x
  std::size_t seeds = 0;              // seeds generated
  std::size_t skipped = 0;            // seeds outside an expression domain
  std::size_t converged = 0;          // seeds that reached a critical point
  std::size_t diverged = 0;
};

/// Multistart search over the problem's sample box. Seeds come from a
/// Halton sequence with a Cranley-Patterson shift drawn from cfg.rng_seed;
/// multipliers start at 0. Results within cfg.dedup_radius of each other are
/// merged (smallest residual wins). The list is what was found in the box,
/// not a certificate that nothing else exists.
SearchResult find_critical_points(const Problem& p, const SolverConfig& cfg);

/// The seed points find_critical_points() will use.
std::vector<Vector> multistart_seeds(const Problem& p, const SolverConfig& cfg);

}  // namespace lagcrit

#endif  // LAGCRIT_KKT_HPP_
