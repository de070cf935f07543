/*
 * Copyright 2026 The lagcrit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to lagcrit: find critical points of equality-constrained
 * problems and classify them with second-order conditions.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Functions return an lc_status; on failure lc_last_error() describes the
 * problem (per thread, valid until the next failing call on that thread).
 * Strings returned through char** out-parameters are owned by the caller and
 * released with lc_string_free().
 */

#ifndef LAGCRIT_LAGCRIT_H_
#define LAGCRIT_LAGCRIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LAGCRIT_BUILDING)
#    define LC_API __declspec(dllexport)
#  else
#    define LC_API __declspec(dllimport)
#  endif
#else
#  define LC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lc_status {
  LC_OK = 0,
  LC_ERR_INVALID_ARGUMENT = 1,
  LC_ERR_PARSE = 2,     /* problem file or expression syntax */
  LC_ERR_DOMAIN = 3,    /* expression evaluated outside its domain */
  LC_ERR_NOT_FOUND = 4, /* unknown corpus id, index out of range */
  LC_ERR_INTERNAL = 5
} lc_status;

typedef enum lc_verdict {
  LC_VERDICT_STRICT_LOCAL_MIN = 0,
  LC_VERDICT_STRICT_LOCAL_MAX = 1,
  LC_VERDICT_SADDLE = 2,
  LC_VERDICT_INDETERMINATE = 3,
  LC_VERDICT_LICQ_FAILURE = 4
} lc_verdict;

typedef struct lc_problem lc_problem;
typedef struct lc_report lc_report;

typedef struct lc_solver_config {
  size_t starts;
  size_t max_newton_iters;
  double stationarity_tol;
  double dedup_radius;
  double classify_tol;
  uint64_t rng_seed;
} lc_solver_config;

/* Borrowed view of one classified critical point; pointers stay valid for
 * the lifetime of the owning lc_report. */
typedef struct lc_point_view {
  const double* x;
  size_t n;
  const double* lambda;
  size_t m;
  double residual_norm;
  double f_value;
  lc_verdict verdict;
  int licq_ok;
  const double* eigenvalues;
  size_t num_eigenvalues;
  int has_specialized;
  const char* specialized_kind; /* NULL when has_specialized == 0 */
  const double* witnesses;
  size_t num_witnesses;
  lc_verdict specialized_verdict;
  int specialized_agrees;
} lc_point_view;

LC_API const char* lc_version(void);
LC_API const char* lc_last_error(void);
LC_API void lc_string_free(char* s);
LC_API const char* lc_verdict_name(lc_verdict v);

LC_API lc_solver_config lc_solver_config_default(void);

/* Problem files: see README for the format. */
LC_API lc_status lc_problem_parse(const char* text, lc_problem** out);
LC_API void lc_problem_free(lc_problem* p);
LC_API size_t lc_problem_num_vars(const lc_problem* p);
LC_API size_t lc_problem_num_constraints(const lc_problem* p);
LC_API lc_status lc_problem_to_text(const lc_problem* p, char** out);

/* Multistart solve followed by second-order classification. */
LC_API lc_status lc_solve(const lc_problem* p, const lc_solver_config* cfg, lc_report** out);
LC_API void lc_report_free(lc_report* r);
LC_API size_t lc_report_num_points(const lc_report* r);
LC_API lc_status lc_report_point(const lc_report* r, size_t i, lc_point_view* out);
LC_API const char* lc_report_summary(const lc_report* r);
LC_API size_t lc_report_num_warnings(const lc_report* r);
LC_API const char* lc_report_warning(const lc_report* r, size_t i);
LC_API lc_status lc_report_to_json(const lc_report* r, char** out);

/* Ranking by objective value. `order` receives up to `capacity` point
 * indices, smallest f first; the return value is the number of points. */
LC_API size_t lc_report_rank_order(const lc_report* r, size_t* order, size_t capacity);
LC_API size_t lc_report_num_rank_warnings(const lc_report* r);
LC_API const char* lc_report_rank_warning(const lc_report* r, size_t i);
LC_API size_t lc_rank_num_caveats(void);
LC_API const char* lc_rank_caveat(size_t i);
LC_API lc_status lc_report_rank_json(const lc_report* r, char** out);

/* Built-in corpus. */
LC_API size_t lc_corpus_count(void);
LC_API const char* lc_corpus_id(size_t i);
LC_API const char* lc_corpus_summary(size_t i);
LC_API lc_status lc_corpus_export(const char* id, char** out);
/* Runs every case; `out` receives a text (as_json == 0) or JSON report and
 * `all_passed` is set to 1 when every case passed. */
LC_API lc_status lc_corpus_run(const lc_solver_config* cfg, int as_json, char** out, int* all_passed);

/* Forward-mode vs finite-difference derivatives at `x` for the objective
 * and every constraint. `out` receives a text report; `max_rel_error` the
 * worst relative error. Returns LC_ERR_DOMAIN (with the report still
 * filled in) when any expression cannot be evaluated at x. */
LC_API lc_status lc_check_derivatives(const lc_problem* p, const double* x, size_t n, char** out,
                                      double* max_rel_error);

#ifdef __cplusplus
}
#endif

#endif /* LAGCRIT_LAGCRIT_H_ */
