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

// lagcrit command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 check or corpus failure, 2 usage/parse/domain error.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lagcrit/lagcrit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct ProblemDeleter {
  void operator()(lc_problem* p) const { lc_problem_free(p); }
};
struct ReportDeleter {
  void operator()(lc_report* r) const { lc_report_free(r); }
};
using ProblemPtr = std::unique_ptr<lc_problem, ProblemDeleter>;
using ReportPtr = std::unique_ptr<lc_report, ReportDeleter>;

// Takes ownership of a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  lc_string_free(s);
  return out;
}

int report_error(const std::string& context) {
  std::cerr << "lagcrit: " << context << ": " << lc_last_error() << '\n';
  return kExitUsage;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt(const double* v, size_t n) {
  std::string s = "(";
  for (size_t i = 0; i < n; ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

struct SolveFlags {
  std::string path;
  size_t starts = 0;
  uint64_t seed = 0;
  double tol = 0.0;
  bool json = false;
};

lc_solver_config make_config(const SolveFlags& f) {
  lc_solver_config cfg = lc_solver_config_default();
  if (f.starts) cfg.starts = f.starts;
  cfg.rng_seed = f.seed;
  if (f.tol > 0.0) cfg.stationarity_tol = f.tol;
  return cfg;
}

int load_problem(const std::string& path, ProblemPtr& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "lagcrit: cannot read '" << path << "'\n";
    return kExitUsage;
  }
  std::ostringstream text;
  text << in.rdbuf();
  lc_problem* p = nullptr;
  if (lc_problem_parse(text.str().c_str(), &p) != LC_OK) return report_error(path);
  out.reset(p);
  return kExitOk;
}

int run_solve(const SolveFlags& f, ReportPtr& out) {
  ProblemPtr problem;
  if (int rc = load_problem(f.path, problem); rc != kExitOk) return rc;
  const lc_solver_config cfg = make_config(f);
  lc_report* r = nullptr;
  if (lc_solve(problem.get(), &cfg, &r) != LC_OK) return report_error(f.path);
  out.reset(r);
  return kExitOk;
}

void print_point(const lc_report* r, size_t i) {
  lc_point_view v;
  lc_report_point(r, i, &v);
  std::cout << "[" << i << "] x = " << fmt(v.x, v.n) << "  lambda = " << fmt(v.lambda, v.m) << '\n'
            << "    f = " << fmt(v.f_value) << "  verdict " << lc_verdict_name(v.verdict)
            << "  residual " << fmt(v.residual_norm) << '\n';
  if (v.licq_ok) std::cout << "    projected Hessian eigenvalues " << fmt(v.eigenvalues, v.num_eigenvalues) << '\n';
  if (v.has_specialized) {
    std::cout << "    closed-form " << v.specialized_kind << ": " << fmt(v.witnesses, v.num_witnesses) << " -> "
              << lc_verdict_name(v.specialized_verdict) << (v.specialized_agrees ? " (agrees)" : " (DISAGREES)")
              << '\n';
  }
}

void print_warnings(const lc_report* r) {
  for (size_t i = 0; i < lc_report_num_warnings(r); ++i)
    std::cout << "warning: " << lc_report_warning(r, i) << '\n';
}

int cmd_solve(const SolveFlags& f) {
  ReportPtr r;
  if (int rc = run_solve(f, r); rc != kExitOk) return rc;
  if (f.json) {
    char* json = nullptr;
    if (lc_report_to_json(r.get(), &json) != LC_OK) return report_error("json");
    std::cout << take(json);
    return kExitOk;
  }
  std::cout << lc_report_summary(r.get()) << '\n';
  for (size_t i = 0; i < lc_report_num_points(r.get()); ++i) print_point(r.get(), i);
  print_warnings(r.get());
  return kExitOk;
}

int cmd_rank(const SolveFlags& f) {
  ReportPtr r;
  if (int rc = run_solve(f, r); rc != kExitOk) return rc;
  if (f.json) {
    char* json = nullptr;
    if (lc_report_rank_json(r.get(), &json) != LC_OK) return report_error("json");
    std::cout << take(json);
    return kExitOk;
  }
  const size_t count = lc_report_rank_order(r.get(), nullptr, 0);
  std::vector<size_t> order(count);
  lc_report_rank_order(r.get(), order.data(), order.size());
  std::cout << lc_report_summary(r.get()) << '\n' << "ranking by objective value:\n";
  for (size_t k = 0; k < count; ++k) {
    lc_point_view v;
    lc_report_point(r.get(), order[k], &v);
    std::cout << "  " << k + 1 << ". f = " << fmt(v.f_value) << "  " << lc_verdict_name(v.verdict)
              << "  x = " << fmt(v.x, v.n) << '\n';
  }
  for (size_t i = 0; i < lc_report_num_rank_warnings(r.get()); ++i)
    std::cout << "warning: " << lc_report_rank_warning(r.get(), i) << '\n';
  print_warnings(r.get());
  std::cout << "caveats:\n";
  for (size_t i = 0; i < lc_rank_num_caveats(); ++i) std::cout << "  " << lc_rank_caveat(i) << '\n';
  return kExitOk;
}

int cmd_corpus_list() {
  for (size_t i = 0; i < lc_corpus_count(); ++i)
    std::cout << lc_corpus_id(i) << "  " << lc_corpus_summary(i) << '\n';
  return kExitOk;
}

int cmd_corpus_run(const SolveFlags& f) {
  const lc_solver_config cfg = make_config(f);
  char* out = nullptr;
  int all_passed = 0;
  if (lc_corpus_run(&cfg, f.json ? 1 : 0, &out, &all_passed) != LC_OK) return report_error("corpus run");
  std::cout << take(out);
  return all_passed ? kExitOk : kExitCheckFailed;
}

int cmd_corpus_export(const std::string& id) {
  char* out = nullptr;
  if (lc_corpus_export(id.c_str(), &out) != LC_OK) return report_error("corpus export");
  std::cout << take(out);
  return kExitOk;
}

bool parse_point(const std::string& text, std::vector<double>& out) {
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const char* begin = item.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    while (*end == ' ' || *end == '\t') ++end;
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

int cmd_check_grad(const std::string& path, const std::string& point_text) {
  ProblemPtr problem;
  if (int rc = load_problem(path, problem); rc != kExitOk) return rc;
  std::vector<double> x;
  if (!parse_point(point_text, x)) {
    std::cerr << "lagcrit: --point must be a comma-separated list of finite numbers\n";
    return kExitUsage;
  }
  char* out = nullptr;
  double worst = 0.0;
  const lc_status st = lc_check_derivatives(problem.get(), x.data(), x.size(), &out, &worst);
  if (st != LC_OK && st != LC_ERR_DOMAIN) return report_error(path);
  std::cout << take(out);
  if (st == LC_ERR_DOMAIN) {
    std::cerr << "lagcrit: domain error: " << lc_last_error() << '\n';
    return kExitUsage;
  }
  return worst > 1e-4 ? kExitCheckFailed : kExitOk;
}

void add_solve_flags(CLI::App* cmd, SolveFlags& f, bool with_path) {
  if (with_path) cmd->add_option("file", f.path, "problem file")->required();
  cmd->add_option("--starts", f.starts, "number of multistart seeds (default 64)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "random seed for the start shift (default 0)");
  cmd->add_option("--tol", f.tol, "KKT residual tolerance for convergence (default 1e-9)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--json", f.json, "machine-readable JSON output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lagcrit: critical points of equality-constrained problems and their second-order classification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lc_version());

  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "find and classify critical points");
  add_solve_flags(solve, solve_flags, true);

  SolveFlags rank_flags;
  auto* rank = app.add_subcommand("rank", "rank critical points by objective value, with caveats");
  add_solve_flags(rank, rank_flags, true);

  auto* corpus = app.add_subcommand("corpus", "built-in worked examples");
  corpus->require_subcommand(1);
  auto* corpus_list = corpus->add_subcommand("list", "list case ids");
  SolveFlags corpus_flags;
  auto* corpus_run = corpus->add_subcommand("run", "run every case and check the expected results");
  add_solve_flags(corpus_run, corpus_flags, false);
  std::string export_id;
  auto* corpus_export = corpus->add_subcommand("export", "print a case as a problem file");
  corpus_export->add_option("id", export_id, "case id")->required();

  std::string check_path, check_point;
  auto* check = app.add_subcommand("check-grad", "compare forward-mode and finite-difference derivatives");
  check->add_option("file", check_path, "problem file")->required();
  check->add_option("--point", check_point, "comma-separated coordinates")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  if (*solve) return cmd_solve(solve_flags);
  if (*rank) return cmd_rank(rank_flags);
  if (*corpus_list) return cmd_corpus_list();
  if (*corpus_run) return cmd_corpus_run(corpus_flags);
  if (*corpus_export) return cmd_corpus_export(export_id);
  if (*check) return cmd_check_grad(check_path, check_point);
  return kExitUsage;
}
