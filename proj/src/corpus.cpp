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

#include "lagcrit/corpus.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace lagcrit {

namespace {

std::vector<CorpusCase> build_cases() {
  std::vector<CorpusCase> cases;
  const double cbrt2 = std::cbrt(2.0);
  const double cbrt4 = std::cbrt(4.0);

  {
    CorpusCase c;
    c.id = "local-not-global-3d";
    c.summary = "x1^2 + x2^2*(1-x1)^3 with artificial constraint x3 = 0: unique critical point, "
                "strict local min, not global";
    c.problem = make_problem({"x1", "x2", "x3"}, "x1^2 + x2^2*(1-x1)^3", {"x3"},
                             {{-2, 2}, {-2, 2}, {-2, 2}});
    // The Hessian of f at 0 is diag(2, 2, 0); on the tangent plane x3 = 0
    // both eigenvalues are 2.
    c.expected = {{{0, 0, 0}, {0}, Verdict::kStrictLocalMin, 0.0, "0",
                   "local min but not global; f(4,1,0) = -11"}};
    c.global_note = "not a global minimizer: f(4,1,0) = -11 < 0; the origin is the only critical "
                    "point, which a bounded search supports but cannot prove";
    cases.push_back(std::move(c));
  }
  {
    CorpusCase c;
    c.id = "min-area-box";
    c.summary = "open box of unit volume with least surface area";
    c.problem = make_problem({"x1", "x2", "x3"}, "x1*x2 + 2*x1*x3 + 2*x2*x3", {"x1*x2*x3 - 1"},
                             {{0.1, 5}, {0.1, 5}, {0.1, 5}});
    c.expected = {{{cbrt2, cbrt2, cbrt2 / 2}, {-2 * cbrt4}, Verdict::kStrictLocalMin, 3 * cbrt4,
                   "3*4^(1/3)", ""}};
    c.global_note = "global minimizer (compactness of the sublevel set {f <= 5} on the feasible set)";
    cases.push_back(std::move(c));
  }
  {
    CorpusCase c;
    c.id = "septic-saddles";
    c.summary = "degree-7 objective on the line x2 = 0: the smallest critical value is not a "
                "local minimum";
    c.problem = make_problem({"x1", "x2"},
                             "(1/7)*x1^7 - (17/12)*x1^6 + (51/10)*x1^5 - (63/8)*x1^4 + (9/2)*x1^3",
                             {"x2"});
    const std::string saddle = "saddle (odd-order contact; not decidable at second order)";
    c.expected = {
        {{0, 0}, {0}, Verdict::kIndeterminate, 0.0, "0", saddle},
        {{1, 0}, {0}, Verdict::kStrictLocalMax, 379.0 / 840.0, "0.4511", ""},
        {{1.5, 0}, {0}, Verdict::kStrictLocalMin, 3159.0 / 8960.0, "0.3525", ""},
        {{3, 0}, {0}, Verdict::kIndeterminate, 729.0 / 280.0, "2.6035", saddle},
    };
    c.global_note = "smallest critical value 0 is at a saddle; largest 2.6035 is at a saddle";
    cases.push_back(std::move(c));
  }
  {
    CorpusCase c;
    c.id = "cubic-parabola";
    c.summary = "x2 - x1^3 + x1 on the parabola x2 = x1^2: one local min, one local max";
    c.problem = make_problem({"x1", "x2"}, "x2 - x1^3 + x1", {"x2 - x1^2"});
    c.expected = {
        {{-1.0 / 3, 1.0 / 9}, {-1}, Verdict::kStrictLocalMin, -5.0 / 27, "-5/27",
         "local min not global: f(2,4) = -2 < -5/27"},
        {{1, 1}, {-1}, Verdict::kStrictLocalMax, 1.0, "1", ""},
    };
    cases.push_back(std::move(c));
  }
  {
    CorpusCase c;
    c.id = "cone-plane";
    c.summary = "lowest point of the cone x1^2 + x2^2 = x3^2 cut by the plane x1 + x3 = 2";
    c.problem = make_problem({"x1", "x2", "x3"}, "x3", {"x1^2 + x2^2 - x3^2", "x1 + x3 - 2"});
    c.expected = {{{1, 0, 1}, {0.25, -0.5}, Verdict::kStrictLocalMin, 1.0, "1", ""}};
    c.global_note = "global minimizer: on the feasible set 4(x3 - 1) = x2^2 >= 0, so x3 >= 1";
    cases.push_back(std::move(c));
  }
  return cases;
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

double distance(const Vector& a, const Vector& b) {
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return norm2(d);
}

}  // namespace

const std::vector<CorpusCase>& corpus_cases() {
  static const std::vector<CorpusCase> kCases = build_cases();
  return kCases;
}

const CorpusCase* find_case(std::string_view id) {
  for (const auto& c : corpus_cases())
    if (c.id == id) return &c;
  return nullptr;
}

CaseResult run_case(const CorpusCase& c, const SolverConfig& cfg, double classify_tol) {
  CaseResult result;
  result.id = c.id;
  auto fail = [&](std::string why) { result.failures.push_back(std::move(why)); };

  for (std::size_t k = 0; k < c.expected.size(); ++k) {
    const ExpectedPoint& e = c.expected[k];
    const std::string tag = "expected point " + std::to_string(k);
    try {
      const double r = norm_inf(kkt_residual(c.problem, e.x, e.lambda));
      if (r > 1e-8) fail(tag + fmt(": stationarity residual %.3g > 1e-8", r));
      const double f = evaluate(c.problem.objective, e.x);
      if (std::abs(f - e.f_value) > 1e-9) fail(tag + fmt(": f = %.17g, stored %.17g", f, e.f_value));
      const CriticalPoint cp{e.x, e.lambda, r, 0};
      const Verdict v = classify(c.problem, cp, classify_tol).verdict;
      if (v != e.verdict)
        fail(tag + ": classified " + std::string(to_string(v)) + ", expected " +
             std::string(to_string(e.verdict)));
    } catch (const std::exception& ex) {
      fail(tag + ": " + ex.what());
    }
  }

  result.search = find_critical_points(c.problem, cfg);
  for (const auto& cp : result.search.points) result.reports.push_back(classify(c.problem, cp, classify_tol));

  if (result.search.points.size() != c.expected.size()) {
    fail("found " + std::to_string(result.search.points.size()) + " critical points, expected " +
         std::to_string(c.expected.size()));
  }
  for (std::size_t k = 0; k < c.expected.size(); ++k) {
    const ExpectedPoint& e = c.expected[k];
    const std::string tag = "expected point " + std::to_string(k);
    std::size_t best = result.search.points.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < result.search.points.size(); ++j) {
      const double d = distance(result.search.points[j].x, e.x);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == result.search.points.size()) {
      fail(tag + ": not found");
      continue;
    }
    if (best_d > 1e-6) fail(tag + fmt(": nearest found point at distance %.3g > 1e-6", best_d));
    const double dl = distance(result.search.points[best].lambda, e.lambda);
    if (dl > 1e-6) fail(tag + fmt(": multiplier off by %.3g > 1e-6", dl));
    const Verdict v = result.reports[best].verdict;
    if (v != e.verdict)
      fail(tag + ": found point classified " + std::string(to_string(v)) + ", expected " +
           std::string(to_string(e.verdict)));
  }

  result.passed = result.failures.empty();
  return result;
}

}  // namespace lagcrit
