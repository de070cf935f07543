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

#include <cmath>

#include "lagcrit/report.hpp"

namespace lagcrit {
namespace {

using nlohmann::json;

SolveReport solve_case(const std::string& id) {
  const CorpusCase* c = find_case(id);
  return run_pipeline(c->problem, SolverConfig{});
}

bool mentions(const std::vector<std::string>& lines, const std::string& needle) {
  for (const auto& l : lines)
    if (l.find(needle) != std::string::npos) return true;
  return false;
}

TEST(Pipeline, ConePlane) {
  const SolveReport r = solve_case("cone-plane");
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_EQ(r.points[0].verdict, Verdict::kStrictLocalMin);
  EXPECT_NEAR(r.f_values[0], 1.0, 1e-12);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Pipeline, CubicParabolaValues) {
  const SolveReport r = solve_case("cubic-parabola");
  ASSERT_EQ(r.f_values.size(), 2u);
  EXPECT_NEAR(r.f_values[0], -5.0 / 27, 1e-12);
  EXPECT_NEAR(r.f_values[1], 1.0, 1e-12);
}

TEST(Pipeline, SummaryNeverClaimsCompleteness) {
  const SolveReport r = solve_case("septic-saddles");
  EXPECT_EQ(r.summary().rfind("found 4 critical point(s) in the sample box", 0), 0u);
  EXPECT_EQ(r.summary().find("all"), std::string::npos);
  EXPECT_TRUE(mentions(r.warnings, "point 0: projected Hessian is singular"));
}

TEST(Pipeline, NoPointsWarns) {
  const SolveReport r = run_pipeline(make_problem({"x1", "x2"}, "x1", {"x2"}), SolverConfig{});
  EXPECT_TRUE(r.points.empty());
  EXPECT_TRUE(mentions(r.warnings, "no critical points"));
  EXPECT_EQ(r.summary().rfind("found 0 critical point(s)", 0), 0u);
}

TEST(Json, Schema) {
  const json j = to_json(solve_case("cubic-parabola"));
  for (const char* key : {"problem", "config", "summary", "search", "critical_points", "warnings"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["problem"]["vars"], json({"x1", "x2"}));
  EXPECT_EQ(j["config"]["starts"], 64);
  EXPECT_EQ(j["config"]["rng_seed"], 0);
  const json& p = j["critical_points"][0];
  for (const char* key : {"x", "lambda", "residual_norm", "verdict", "f_value", "eigenvalues", "specialized_check"})
    EXPECT_TRUE(p.contains(key)) << key;
  EXPECT_EQ(p["verdict"], "StrictLocalMin");
  EXPECT_EQ(p["specialized_check"]["kind"], "n2m1-vHv");
  EXPECT_NEAR(p["specialized_check"]["witnesses"][0].get<double>(), 4.0, 1e-12);
  EXPECT_TRUE(j["critical_points"][1]["specialized_check"]["agrees"].get<bool>());
}

TEST(Json, RoundTripIsExact) {
  for (const auto& c : corpus_cases()) {
    const json j = to_json(run_pipeline(c.problem, SolverConfig{}));
    const std::string text = dump_json(j);
    EXPECT_EQ(json::parse(text), j) << c.id;
    EXPECT_EQ(dump_json(json::parse(text)), text) << c.id;
  }
}

TEST(Json, SeventeenDigits) {
  EXPECT_EQ(dump_json(json(0.1)), "0.10000000000000001\n");
  EXPECT_EQ(dump_json(json({{"b", 1}, {"a", json::array({1.5, 2})}})), "{\n  \"a\": [1.5, 2],\n  \"b\": 1\n}\n");
  EXPECT_EQ(dump_json(json(std::nan(""))), "null\n");
}

TEST(Json, Deterministic) {
  const CorpusCase* c = find_case("min-area-box");
  EXPECT_EQ(dump_json(to_json(run_pipeline(c->problem, SolverConfig{}))),
            dump_json(to_json(run_pipeline(c->problem, SolverConfig{}))));
}

TEST(Rank, SepticSmallestValueIsNotAMinimum) {
  const SolveReport r = solve_case("septic-saddles");
  const Ranking k = rank(r);
  ASSERT_EQ(k.order.size(), 4u);
  EXPECT_NEAR(r.points[k.order[0]].point.x[0], 0.0, 1e-6);
  EXPECT_EQ(r.points[k.order[0]].verdict, Verdict::kIndeterminate);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LE(r.f_values[k.order[i - 1]], r.f_values[k.order[i]]);
  ASSERT_EQ(k.warnings.size(), 1u);
  EXPECT_NE(k.warnings[0].find("not a strict local minimizer"), std::string::npos);
}

TEST(Rank, MinAreaSinglePoint) {
  const SolveReport r = solve_case("min-area-box");
  const Ranking k = rank(r);
  ASSERT_EQ(k.order.size(), 1u);
  EXPECT_NEAR(r.f_values[k.order[0]], 3 * std::cbrt(4.0), 1e-12);
  EXPECT_TRUE(k.warnings.empty());
}

TEST(Rank, EmptyRankingWarns) {
  const SolveReport r = run_pipeline(make_problem({"x1", "x2"}, "x1", {"x2"}), SolverConfig{});
  const Ranking k = rank(r);
  EXPECT_TRUE(k.order.empty());
  EXPECT_FALSE(k.warnings.empty());
}

TEST(Rank, CaveatsAlwaysPresent) {
  EXPECT_GE(rank_caveats().size(), 4u);
  EXPECT_TRUE(mentions(rank_caveats(), "attained"));
  const SolveReport r = solve_case("min-area-box");
  const json j = rank_to_json(r, rank(r));
  EXPECT_EQ(j["caveats"].size(), rank_caveats().size());
  EXPECT_EQ(j["ranking"][0]["rank"], 1);
  EXPECT_TRUE(j["rank_warnings"].empty());
}

TEST(CheckDerivatives, MinAreaObjective) {
  const auto checks = check_derivatives(find_case("min-area-box")->problem, Vector{1, 1, 1});
  ASSERT_EQ(checks.size(), 2u);
  EXPECT_EQ(checks[0].name, "objective");
  EXPECT_EQ(checks[0].ad_gradient, (Vector{3, 3, 4}));
  EXPECT_LT(checks[0].gradient_rel_error, 1e-6);
  EXPECT_LT(checks[0].hessian_rel_error, 1e-4);
}

TEST(CheckDerivatives, LinearConstraint) {
  const auto checks = check_derivatives(find_case("cone-plane")->problem, Vector{0.3, -1, 2});
  ASSERT_EQ(checks.size(), 3u);
  EXPECT_EQ(checks[2].name, "constraint 1");
  EXPECT_EQ(checks[2].ad_hessian, Matrix(3, 3));
  for (double v : checks[2].fd_hessian.data()) EXPECT_NEAR(v, 0.0, 1e-6);
}

TEST(CheckDerivatives, DomainErrorPerExpression) {
  const Problem p = make_problem({"x1", "x2"}, "2/x1 + x2", {"x2 - 1"});
  const auto checks = check_derivatives(p, Vector{0, 1});
  ASSERT_EQ(checks.size(), 2u);
  EXPECT_FALSE(checks[0].error.empty());
  EXPECT_TRUE(checks[1].error.empty());
}

TEST(CheckDerivatives, RelativeError) {
  EXPECT_EQ(max_relative_error(Vector{0, 1}, Vector{0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(max_relative_error(Vector{1, 3}, Vector{1.5, 3}), 0.25);
}

TEST(CorpusRunJson, AllPassedAndEchoesConfig) {
  SolverConfig cfg;
  const CorpusRun run = run_corpus(cfg);
  EXPECT_TRUE(run.all_passed);
  const json j = to_json(run, cfg);
  EXPECT_TRUE(j["all_passed"].get<bool>());
  EXPECT_EQ(j["cases"].size(), 5u);
  EXPECT_EQ(j["config"]["classify_tol"], 1e-8);
}

}  // namespace
}  // namespace lagcrit
