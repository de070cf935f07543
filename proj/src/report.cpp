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

#include "lagcrit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace lagcrit {

using nlohmann::json;

std::string SolveReport::summary() const {
  return "found " + std::to_string(points.size()) +
         " critical point(s) in the sample box (multistart search, not exhaustive)";
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json point_json(const ClassificationReport& c, double f_value) {
  json j;
  j["x"] = c.point.x;
  j["lambda"] = c.point.lambda;
  j["residual_norm"] = c.point.residual_norm;
  j["verdict"] = std::string(to_string(c.verdict));
  j["licq_ok"] = c.licq_ok;
  j["f_value"] = f_value;
  j["eigenvalues"] = c.eigenvalues;
  if (c.specialized) {
    const auto& s = *c.specialized;
    j["specialized_check"] = {
        {"kind", std::string(to_string(s.kind))},
        {"vectors", s.vectors},
        {"witnesses", s.witnesses},
        {"verdict", std::string(to_string(s.verdict))},
        {"agrees", s.agrees},
    };
  } else {
    j["specialized_check"] = nullptr;
  }
  return j;
}

json problem_json(const Problem& p) {
  json j;
  j["vars"] = p.variables;
  j["objective"] = p.objective.serialize();
  json constraints = json::array();
  for (const auto& c : p.constraints) constraints.push_back(c.serialize());
  j["constraints"] = constraints;
  json box = json::array();
  for (const auto& iv : p.sample_box()) box.push_back({iv.lo, iv.hi});
  j["box"] = box;
  return j;
}

json config_json(const SolverConfig& cfg, double classify_tol) {
  return {
      {"starts", cfg.starts},
      {"max_newton_iters", cfg.max_newton_iters},
      {"stationarity_tol", cfg.stationarity_tol},
      {"dedup_radius", cfg.dedup_radius},
      {"min_step", cfg.min_step},
      {"rng_seed", cfg.rng_seed},
      {"classify_tol", classify_tol},
  };
}

json search_json(const SearchResult& s) {
  return {{"seeds", s.seeds}, {"skipped", s.skipped}, {"converged", s.converged}, {"diverged", s.diverged}};
}

void dump_into(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + json(it.key()).dump() + ": ";
        dump_into(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_into(j[i], out, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_into(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const json& j) {
  std::string out;
  dump_into(j, out, 0);
  out += "\n";
  return out;
}

SolveReport run_pipeline(const Problem& p, const SolverConfig& cfg, double classify_tol) {
  SolveReport r;
  r.problem = p;
  r.config = cfg;
  r.classify_tol = classify_tol;
  r.search = find_critical_points(p, cfg);
  for (const auto& cp : r.search.points) {
    r.points.push_back(classify(p, cp, classify_tol));
    r.f_values.push_back(evaluate(p.objective, cp.x));
  }

  if (r.points.empty()) r.warnings.push_back("no critical points found in the sample box");
  if (r.search.skipped > 0)
    r.warnings.push_back(std::to_string(r.search.skipped) +
                         " seed(s) outside an expression domain were skipped");
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& c = r.points[i];
    const std::string tag = "point " + std::to_string(i) + ": ";
    if (c.verdict == Verdict::kLicqFailure) {
      r.warnings.push_back(tag + "constraint gradients are linearly dependent (LICQ fails); "
                                 "no second-order verdict");
    } else if (c.verdict == Verdict::kIndeterminate) {
      r.warnings.push_back(tag + "projected Hessian is singular at tolerance; second-order "
                                 "information cannot classify this point");
    }
    if (c.specialized && !c.specialized->agrees) {
      r.warnings.push_back(tag + "closed-form test (" + std::string(to_string(c.specialized->kind)) +
                           ") gives " + std::string(to_string(c.specialized->verdict)) +
                           ", eigenvalue test gives " + std::string(to_string(c.verdict)));
    }
  }
  return r;
}

json to_json(const SolveReport& r) {
  json j;
  j["problem"] = problem_json(r.problem);
  j["config"] = config_json(r.config, r.classify_tol);
  j["summary"] = r.summary();
  j["search"] = search_json(r.search);
  json points = json::array();
  for (std::size_t i = 0; i < r.points.size(); ++i) points.push_back(point_json(r.points[i], r.f_values[i]));
  j["critical_points"] = points;
  j["warnings"] = r.warnings;
  return j;
}

const std::vector<std::string>& rank_caveats() {
  static const std::vector<std::string> kCaveats{
      "The smallest critical value equals the global minimum only under all of these hypotheses:",
      "1. the global minimum value is attained (a global minimizer exists);",
      "2. it is attained in the interior of the common domain of the objective and the "
      "constraints, not on its boundary;",
      "3. the constraint gradients are linearly independent on that domain;",
      "4. every critical point has been found. This search covers only the sample box and cannot "
      "certify completeness.",
      "Second-order verdicts are local statements and say nothing about global optimality.",
  };
  return kCaveats;
}

Ranking rank(const SolveReport& r) {
  Ranking out;
  out.order.resize(r.points.size());
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return r.f_values[a] < r.f_values[b]; });
  if (out.order.empty()) {
    out.warnings.push_back("no critical points found; nothing to rank");
    return out;
  }
  const std::size_t best = out.order.front();
  const Verdict v = r.points[best].verdict;
  if (v != Verdict::kStrictLocalMin) {
    out.warnings.push_back("the smallest critical value f = " + format_double(r.f_values[best]) +
                           " is attained at a point classified " + std::string(to_string(v)) +
                           ", not a strict local minimizer: the smallest critical value need not "
                           "be a minimum at all");
  }
  return out;
}

json rank_to_json(const SolveReport& r, const Ranking& ranking) {
  json j = to_json(r);
  json ranked = json::array();
  for (std::size_t k = 0; k < ranking.order.size(); ++k) {
    const std::size_t i = ranking.order[k];
    ranked.push_back({{"rank", k + 1},
                      {"index", i},
                      {"f_value", r.f_values[i]},
                      {"verdict", std::string(to_string(r.points[i].verdict))}});
  }
  j["ranking"] = ranked;
  j["caveats"] = rank_caveats();
  j["rank_warnings"] = ranking.warnings;
  return j;
}

double max_relative_error(std::span<const double> reference, std::span<const double> approx) {
  double worst = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i)
    worst = std::max(worst, std::abs(reference[i] - approx[i]) / (1.0 + std::abs(reference[i])));
  return worst;
}

std::vector<DerivativeCheck> check_derivatives(const Problem& p, std::span<const double> x) {
  std::vector<DerivativeCheck> out;
  auto check_one = [&](const Expression& e, std::string name) {
    DerivativeCheck c;
    c.name = std::move(name);
    try {
      SecondOrder ad = second_order(e, x);
      c.ad_gradient = std::move(ad.gradient);
      c.ad_hessian = std::move(ad.hessian);
      c.fd_gradient = fd_gradient(e, x);
      c.fd_hessian = fd_hessian(e, x);
      c.gradient_rel_error = max_relative_error(c.ad_gradient, c.fd_gradient);
      c.hessian_rel_error = max_relative_error(c.ad_hessian.data(), c.fd_hessian.data());
    } catch (const DomainError& ex) {
      c.error = ex.what();
    }
    out.push_back(std::move(c));
  };
  check_one(p.objective, "objective");
  for (std::size_t i = 0; i < p.m(); ++i) check_one(p.constraints[i], "constraint " + std::to_string(i));
  return out;
}

CorpusRun run_corpus(const SolverConfig& cfg, double classify_tol) {
  CorpusRun run;
  run.all_passed = true;
  run.classify_tol = classify_tol;
  for (const auto& c : corpus_cases()) {
    run.cases.push_back(run_case(c, cfg, classify_tol));
    run.all_passed = run.all_passed && run.cases.back().passed;
  }
  return run;
}

json to_json(const CorpusRun& run, const SolverConfig& cfg) {
  json j;
  j["config"] = config_json(cfg, run.classify_tol);
  json cases = json::array();
  for (const auto& r : run.cases) {
    const CorpusCase* c = find_case(r.id);
    json points = json::array();
    for (const auto& rep : r.reports)
      points.push_back(point_json(rep, evaluate(c->problem.objective, rep.point.x)));
    cases.push_back({{"id", r.id},
                     {"passed", r.passed},
                     {"failures", r.failures},
                     {"search", search_json(r.search)},
                     {"critical_points", points}});
  }
  j["cases"] = cases;
  j["all_passed"] = run.all_passed;
  return j;
}

}  // namespace lagcrit
