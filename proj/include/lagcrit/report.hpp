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

#ifndef LAGCRIT_REPORT_HPP_
#define LAGCRIT_REPORT_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lagcrit/classify.hpp"
#include "lagcrit/corpus.hpp"
#include "lagcrit/kkt.hpp"

namespace lagcrit {

/// Output of the solve -> classify pipeline.
struct SolveReport {
  Problem problem;
  SolverConfig config;
  double classify_tol = kDefaultClassifyTol;
  SearchResult search;
  std::vector<ClassificationReport> points;  // same order as search.points
  std::vector<double> f_values;
  std::vector<std::string> warnings;

  /// "found k critical point(s) in the sample box"
  std::string summary() const;
};

SolveReport run_pipeline(const Problem& p, const SolverConfig& cfg,
                         double classify_tol = kDefaultClassifyTol);

nlohmann::json to_json(const SolveReport& r);

/// Indentation-stable JSON text with every floating-point number written
/// with 17 significant digits (non-finite values become null).
std::string dump_json(const nlohmann::json& j);

struct Ranking {
  std::vector<std::size_t> order;  // indices into SolveReport::points, by ascending f
  std::vector<std::string> warnings;
};

/// Sorts points by objective value. Warns when nothing was found and when
/// the smallest-value point is not a strict local minimizer.
Ranking rank(const SolveReport& r);

/// Hypotheses under which the smallest critical value is the global
/// minimum; printed with every ranking.
const std::vector<std::string>& rank_caveats();

nlohmann::json rank_to_json(const SolveReport& r, const Ranking& ranking);

/// Forward-mode vs central-difference derivatives of one expression.
struct DerivativeCheck {
  std::string name;  // "objective" or "constraint <i>"
  std::string error; // domain error text; other fields unset when non-empty
  Vector ad_gradient;
  Vector fd_gradient;
  Matrix ad_hessian;
  Matrix fd_hessian;
  double gradient_rel_error = 0.0;  // max_i |ad - fd| / (1 + |ad|)
  double hessian_rel_error = 0.0;
};

std::vector<DerivativeCheck> check_derivatives(const Problem& p, std::span<const double> x);

/// Max of |a_i - b_i| / (1 + |a_i|).
double max_relative_error(std::span<const double> reference, std::span<const double> approx);

inline constexpr double kCheckGradTolerance = 1e-4;

struct CorpusRun {
  std::vector<CaseResult> cases;
  bool all_passed = false;
  double classify_tol = kDefaultClassifyTol;
};

CorpusRun run_corpus(const SolverConfig& cfg, double classify_tol = kDefaultClassifyTol);
nlohmann::json to_json(const CorpusRun& run, const SolverConfig& cfg);

}  // namespace lagcrit

#endif  // LAGCRIT_REPORT_HPP_
