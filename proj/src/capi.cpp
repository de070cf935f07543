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

#include "lagcrit/lagcrit.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lagcrit/corpus.hpp"
#include "lagcrit/problem_file.hpp"
#include "lagcrit/report.hpp"

struct lc_problem {
  lagcrit::Problem problem;
};

struct lc_report {
  lagcrit::SolveReport report;
  lagcrit::Ranking ranking;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

lc_status fail(lc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps the exception in flight to a status code.
lc_status translate() {
  try {
    throw;
  } catch (const lagcrit::ProblemFileError& e) {
    return fail(LC_ERR_PARSE, e.what());
  } catch (const lagcrit::ParseError& e) {
    return fail(LC_ERR_PARSE, e.what());
  } catch (const lagcrit::DomainError& e) {
    return fail(LC_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LC_ERR_INTERNAL, "unknown error");
  }
}

template <class F>
lc_status guarded(F&& f) {
  try {
    return f();
  } catch (...) {
    return translate();
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lagcrit::SolverConfig to_config(const lc_solver_config* cfg) {
  lagcrit::SolverConfig c;
  if (cfg) {
    c.starts = cfg->starts;
    c.max_newton_iters = cfg->max_newton_iters;
    c.stationarity_tol = cfg->stationarity_tol;
    c.dedup_radius = cfg->dedup_radius;
    c.rng_seed = cfg->rng_seed;
  }
  c.validate();
  return c;
}

double classify_tol(const lc_solver_config* cfg) {
  const double tol = cfg ? cfg->classify_tol : lagcrit::kDefaultClassifyTol;
  if (!(tol > 0.0)) throw std::invalid_argument("classify_tol must be positive");
  return tol;
}

lc_verdict to_c(lagcrit::Verdict v) {
  switch (v) {
    case lagcrit::Verdict::kStrictLocalMin: return LC_VERDICT_STRICT_LOCAL_MIN;
    case lagcrit::Verdict::kStrictLocalMax: return LC_VERDICT_STRICT_LOCAL_MAX;
    case lagcrit::Verdict::kSaddle: return LC_VERDICT_SADDLE;
    case lagcrit::Verdict::kIndeterminate: return LC_VERDICT_INDETERMINATE;
    case lagcrit::Verdict::kLicqFailure: return LC_VERDICT_LICQ_FAILURE;
  }
  return LC_VERDICT_INDETERMINATE;
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string vector_text(std::span<const double> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + number(v[i]);
  return s + ")";
}

std::string corpus_text(const lagcrit::CorpusRun& run) {
  std::ostringstream out;
  for (const auto& r : run.cases) {
    out << (r.passed ? "PASS " : "FAIL ") << r.id << "  (" << r.search.points.size()
        << " critical point(s) found)\n";
    for (const auto& f : r.failures) out << "    " << f << '\n';
  }
  out << (run.all_passed ? "all cases passed\n" : "some cases FAILED\n");
  return out.str();
}

}  // namespace

extern "C" {

const char* lc_version(void) { return "1.0.0"; }

const char* lc_last_error(void) { return g_last_error.c_str(); }

void lc_string_free(char* s) { std::free(s); }

const char* lc_verdict_name(lc_verdict v) {
  switch (v) {
    case LC_VERDICT_STRICT_LOCAL_MIN: return "StrictLocalMin";
    case LC_VERDICT_STRICT_LOCAL_MAX: return "StrictLocalMax";
    case LC_VERDICT_SADDLE: return "Saddle";
    case LC_VERDICT_INDETERMINATE: return "Indeterminate";
    case LC_VERDICT_LICQ_FAILURE: return "LicqFailure";
  }
  return "?";
}

lc_solver_config lc_solver_config_default(void) {
  const lagcrit::SolverConfig d;
  return lc_solver_config{d.starts, d.max_newton_iters, d.stationarity_tol, d.dedup_radius,
                          lagcrit::kDefaultClassifyTol, d.rng_seed};
}

lc_status lc_problem_parse(const char* text, lc_problem** out) {
  if (!text || !out) return fail(LC_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new lc_problem{lagcrit::parse_problem_file(text)};
    return LC_OK;
  });
}

void lc_problem_free(lc_problem* p) { delete p; }

size_t lc_problem_num_vars(const lc_problem* p) { return p ? p->problem.n() : 0; }

size_t lc_problem_num_constraints(const lc_problem* p) { return p ? p->problem.m() : 0; }

lc_status lc_problem_to_text(const lc_problem* p, char** out) {
  if (!p || !out) return fail(LC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = duplicate(lagcrit::format_problem_file(p->problem));
    return LC_OK;
  });
}

lc_status lc_solve(const lc_problem* p, const lc_solver_config* cfg, lc_report** out) {
  if (!p || !out) return fail(LC_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<lc_report>();
    r->report = lagcrit::run_pipeline(p->problem, to_config(cfg), classify_tol(cfg));
    r->ranking = lagcrit::rank(r->report);
    r->summary = r->report.summary();
    *out = r.release();
    return LC_OK;
  });
}

void lc_report_free(lc_report* r) { delete r; }

size_t lc_report_num_points(const lc_report* r) { return r ? r->report.points.size() : 0; }

lc_status lc_report_point(const lc_report* r, size_t i, lc_point_view* out) {
  if (!r || !out) return fail(LC_ERR_INVALID_ARGUMENT, "null argument");
  if (i >= r->report.points.size()) return fail(LC_ERR_NOT_FOUND, "point index out of range");
  const auto& c = r->report.points[i];
  lc_point_view v{};
  v.x = c.point.x.data();
  v.n = c.point.x.size();
  v.lambda = c.point.lambda.data();
  v.m = c.point.lambda.size();
  v.residual_norm = c.point.residual_norm;
  v.f_value = r->report.f_values[i];
  v.verdict = to_c(c.verdict);
  v.licq_ok = c.licq_ok ? 1 : 0;
  v.eigenvalues = c.eigenvalues.data();
  v.num_eigenvalues = c.eigenvalues.size();
  if (c.specialized) {
    v.has_specialized = 1;
    v.specialized_kind = lagcrit::to_string(c.specialized->kind).data();
    v.witnesses = c.specialized->witnesses.data();
    v.num_witnesses = c.specialized->witnesses.size();
    v.specialized_verdict = to_c(c.specialized->verdict);
    v.specialized_agrees = c.specialized->agrees ? 1 : 0;
  }
  *out = v;
  return LC_OK;
}

const char* lc_report_summary(const lc_report* r) { return r ? r->summary.c_str() : ""; }

size_t lc_report_num_warnings(const lc_report* r) { return r ? r->report.warnings.size() : 0; }

const char* lc_report_warning(const lc_report* r, size_t i) {
  if (!r || i >= r->report.warnings.size()) return nullptr;
  return r->report.warnings[i].c_str();
}

lc_status lc_report_to_json(const lc_report* r, char** out) {
  if (!r || !out) return fail(LC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = duplicate(lagcrit::dump_json(lagcrit::to_json(r->report)));
    return LC_OK;
  });
}

size_t lc_report_rank_order(const lc_report* r, size_t* order, size_t capacity) {
  if (!r) return 0;
  const auto& o = r->ranking.order;
  for (size_t k = 0; order && k < o.size() && k < capacity; ++k) order[k] = o[k];
  return o.size();
}

size_t lc_report_num_rank_warnings(const lc_report* r) { return r ? r->ranking.warnings.size() : 0; }

const char* lc_report_rank_warning(const lc_report* r, size_t i) {
  if (!r || i >= r->ranking.warnings.size()) return nullptr;
  return r->ranking.warnings[i].c_str();
}

size_t lc_rank_num_caveats(void) { return lagcrit::rank_caveats().size(); }

const char* lc_rank_caveat(size_t i) {
  const auto& c = lagcrit::rank_caveats();
  return i < c.size() ? c[i].c_str() : nullptr;
}

lc_status lc_report_rank_json(const lc_report* r, char** out) {
  if (!r || !out) return fail(LC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = duplicate(lagcrit::dump_json(lagcrit::rank_to_json(r->report, r->ranking)));
    return LC_OK;
  });
}

size_t lc_corpus_count(void) { return lagcrit::corpus_cases().size(); }

const char* lc_corpus_id(size_t i) {
  const auto& cases = lagcrit::corpus_cases();
  return i < cases.size() ? cases[i].id.c_str() : nullptr;
}

const char* lc_corpus_summary(size_t i) {
  const auto& cases = lagcrit::corpus_cases();
  return i < cases.size() ? cases[i].summary.c_str() : nullptr;
}

lc_status lc_corpus_export(const char* id, char** out) {
  if (!id || !out) return fail(LC_ERR_INVALID_ARGUMENT, "null argument");
  const lagcrit::CorpusCase* c = lagcrit::find_case(id);
  if (!c) return fail(LC_ERR_NOT_FOUND, std::string("unknown corpus case '") + id + "'");
  return guarded([&] {
    std::string text = "# " + c->id + ": " + c->summary + "\n";
    text += lagcrit::format_problem_file(c->problem);
    *out = duplicate(text);
    return LC_OK;
  });
}

lc_status lc_corpus_run(const lc_solver_config* cfg, int as_json, char** out, int* all_passed) {
  if (!out) return fail(LC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const lagcrit::SolverConfig c = to_config(cfg);
    const lagcrit::CorpusRun run = lagcrit::run_corpus(c, classify_tol(cfg));
    *out = duplicate(as_json ? lagcrit::dump_json(lagcrit::to_json(run, c)) : corpus_text(run));
    if (all_passed) *all_passed = run.all_passed ? 1 : 0;
    return LC_OK;
  });
}

lc_status lc_check_derivatives(const lc_problem* p, const double* x, size_t n, char** out,
                               double* max_rel_error) {
  if (!p || !x || !out) return fail(LC_ERR_INVALID_ARGUMENT, "null argument");
  if (n != p->problem.n())
    return fail(LC_ERR_INVALID_ARGUMENT, "point has " + std::to_string(n) + " coordinates, problem has " +
                                             std::to_string(p->problem.n()) + " variables");
  return guarded([&] {
    const std::span<const double> point(x, n);
    const auto checks = lagcrit::check_derivatives(p->problem, point);
    std::ostringstream text;
    double worst = 0.0;
    std::string domain_errors;
    text << "point " << vector_text(point) << '\n';
    for (const auto& c : checks) {
      text << c.name << ":\n";
      if (!c.error.empty()) {
        text << "  domain error: " << c.error << '\n';
        domain_errors += (domain_errors.empty() ? "" : "; ") + c.name + ": " + c.error;
        continue;
      }
      text << "  gradient AD " << vector_text(c.ad_gradient) << '\n';
      text << "  gradient FD " << vector_text(c.fd_gradient) << '\n';
      text << "  gradient max rel error " << number(c.gradient_rel_error) << '\n';
      text << "  hessian  max rel error " << number(c.hessian_rel_error) << '\n';
      worst = std::max({worst, c.gradient_rel_error, c.hessian_rel_error});
    }
    text << "max relative error " << number(worst) << " (limit " << number(lagcrit::kCheckGradTolerance)
         << ")\n";
    *out = duplicate(text.str());
    if (max_rel_error) *max_rel_error = worst;
    if (!domain_errors.empty()) return fail(LC_ERR_DOMAIN, domain_errors);
    return LC_OK;
  });
}

}  // extern "C"
