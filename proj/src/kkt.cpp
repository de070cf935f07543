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

#include "lagcrit/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

namespace lagcrit {

std::vector<Interval> Problem::sample_box() const {
  if (!box.empty()) return box;
  return std::vector<Interval>(n(), Interval{});
}

void validate(const Problem& p) {
  const std::size_t n = p.n();
  if (p.constraints.empty()) throw std::invalid_argument("problem needs at least one constraint");
  if (p.m() >= n)
    throw std::invalid_argument("problem needs fewer constraints than variables (m < n)");
  if (p.objective.arity() != n || p.objective.variables() != p.variables)
    throw std::invalid_argument("objective variables do not match the problem");
  for (const auto& c : p.constraints)
    if (c.arity() != n || c.variables() != p.variables)
      throw std::invalid_argument("constraint variables do not match the problem");
  if (!p.box.empty()) {
    if (p.box.size() != n) throw std::invalid_argument("box needs one interval per variable");
    for (const auto& iv : p.box)
      if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo < iv.hi))
        throw std::invalid_argument("box interval must satisfy lo < hi");
  }
}

Problem make_problem(std::vector<std::string> variables, std::string_view objective,
                     const std::vector<std::string>& constraints, std::vector<Interval> box) {
  Problem p;
  p.objective = parse(objective, variables);
  for (const auto& c : constraints) p.constraints.push_back(parse(c, variables));
  p.variables = std::move(variables);
  p.box = std::move(box);
  validate(p);
  return p;
}

ProblemDomainError::ProblemDomainError(const DomainError& cause, int expression)
    : DomainError(cause.node(), cause.subexpression(),
                  std::string(expression < 0 ? "objective" : "constraint " + std::to_string(expression)) +
                      ": " + cause.what()),
      expression_(expression) {}

void SolverConfig::validate() const {
  if (starts == 0 || max_newton_iters == 0)
    throw std::invalid_argument("solver config: counts must be positive");
  if (!(stationarity_tol > 0.0) || !(dedup_radius > 0.0) || !(min_step > 0.0))
    throw std::invalid_argument("solver config: tolerances must be positive");
  if (!(dedup_radius > stationarity_tol))
    throw std::invalid_argument("solver config: dedup_radius must exceed stationarity_tol");
}

namespace {

void check_dims(const Problem& p, std::span<const double> x, std::span<const double> lambda) {
  if (x.size() != p.n() || lambda.size() != p.m())
    throw std::invalid_argument("point or multiplier length does not match the problem");
}

template <class F>
auto with_context(int expression, F&& f) {
  try {
    return f();
  } catch (const ProblemDomainError&) {
    throw;
  } catch (const DomainError& e) {
    throw ProblemDomainError(e, expression);
  }
}

}  // namespace

Vector kkt_residual(const Problem& p, std::span<const double> x, std::span<const double> lambda) {
  check_dims(p, x, lambda);
  const std::size_t n = p.n();
  Vector r(n + p.m(), 0.0);
  const Vector gf = with_context(-1, [&] { return gradient(p.objective, x); });
  std::copy(gf.begin(), gf.end(), r.begin());
  for (std::size_t i = 0; i < p.m(); ++i) {
    const int idx = static_cast<int>(i);
    const Vector gi = with_context(idx, [&] { return gradient(p.constraints[i], x); });
    for (std::size_t k = 0; k < n; ++k) r[k] += lambda[i] * gi[k];
    r[n + i] = with_context(idx, [&] { return evaluate(p.constraints[i], x); });
  }
  return r;
}

Matrix constraint_jacobian(const Problem& p, std::span<const double> x) {
  Matrix j(p.m(), p.n());
  for (std::size_t i = 0; i < p.m(); ++i) {
    const Vector gi = with_context(static_cast<int>(i), [&] { return gradient(p.constraints[i], x); });
    for (std::size_t k = 0; k < p.n(); ++k) j(i, k) = gi[k];
  }
  return j;
}

Matrix kkt_jacobian(const Problem& p, std::span<const double> x, std::span<const double> lambda) {
  check_dims(p, x, lambda);
  const std::size_t n = p.n();
  const std::size_t m = p.m();
  Matrix k(n + m, n + m);
  const Matrix hf = with_context(-1, [&] { return hessian(p.objective, x); });
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) k(r, c) = hf(r, c);
  for (std::size_t i = 0; i < m; ++i) {
    const SecondOrder gi = with_context(static_cast<int>(i), [&] { return second_order(p.constraints[i], x); });
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) k(r, c) += lambda[i] * gi.hessian(r, c);
      k(n + i, r) = gi.gradient[r];
      k(r, n + i) = gi.gradient[r];
    }
  }
  return k;
}

namespace {

// Newton state over z = (x, lambda).
class NewtonRun {
 public:
  NewtonRun(const Problem& p, const SolverConfig& cfg) : p_(p), cfg_(cfg), n_(p.n()), m_(p.m()) {
    for (const auto& iv : p.sample_box()) {
      const double centre = 0.5 * (iv.lo + iv.hi);
      const double half = 0.5 * (iv.hi - iv.lo);
      bounds_.push_back({centre - 10.0 * half, centre + 10.0 * half});
    }
  }

  std::span<const double> xs(const Vector& z) const { return {z.data(), n_}; }
  std::span<const double> ls(const Vector& z) const { return {z.data() + n_, m_}; }

  Vector residual(const Vector& z) const { return kkt_residual(p_, xs(z), ls(z)); }
  Matrix jacobian(const Vector& z) const { return kkt_jacobian(p_, xs(z), ls(z)); }

  bool inside(const Vector& z) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (!(z[i] >= bounds_[i].lo && z[i] <= bounds_[i].hi)) return false;
    return true;
  }

  enum class StepResult { kAccepted, kCollapsed, kSingular, kDomain };

  // Levenberg-Marquardt direction (K^T K + mu I) d = K^T rhs, used when K is
  // singular. With lambda = 0 and a linear objective the KKT matrix is always
  // singular, so the first step from every seed lands here.
  static Vector regularized_step(const Matrix& k, const Vector& rhs) {
    const Matrix kt = k.transposed();
    Matrix normal = kt * k;
    const double mu = 1e-10 * std::max(1.0, normal.norm_inf());
    for (std::size_t i = 0; i < normal.rows(); ++i) normal(i, i) += mu;
    return solve_linear(normal, kt * std::span<const double>(rhs));
  }

  // One damped Newton step; updates z and r in place when accepted.
  StepResult step(Vector& z, Vector& r) const {
    Vector dz;
    try {
      const Matrix k = jacobian(z);
      Vector rhs(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
      try {
        dz = solve_linear(k, rhs);
      } catch (const SingularMatrixError&) {
        dz = regularized_step(k, rhs);
      }
    } catch (const SingularMatrixError&) {
      return StepResult::kSingular;
    } catch (const DomainError&) {
      return StepResult::kDomain;
    }

    const double merit = norm2(r);
    Vector trial(z.size());
    for (double t = 1.0; t >= cfg_.min_step; t *= 0.5) {
      for (std::size_t i = 0; i < z.size(); ++i) trial[i] = z[i] + t * dz[i];
      try {
        Vector rt = residual(trial);
        if (norm2(rt) < merit) {
          z = trial;
          r = std::move(rt);
          return StepResult::kAccepted;
        }
      } catch (const DomainError&) {
        // rejected; keep halving
      }
    }
    return StepResult::kCollapsed;
  }

  void polish(Vector& z, Vector& r) const {
    for (std::size_t it = 0; it < cfg_.max_newton_iters; ++it) {
      if (norm_inf(r) == 0.0) return;
      Vector zt = z;
      Vector rt = r;
      if (step(zt, rt) != StepResult::kAccepted || !inside(zt)) return;
      z = std::move(zt);
      r = std::move(rt);
    }
  }

  // At a root where the KKT matrix K is singular Newton converges only
  // linearly and stalls at a distance ~sqrt(eps) from the root. Solving the
  // augmented system G(z, v) = (F(z), K(z) v, v0.v - 1) = 0 by Gauss-Newton
  // recovers the root to working precision; the augmented Jacobian has full
  // column rank at a simple rank-one singular root.
  void refine_singular(Vector& z, Vector& r) const {
    SymmetricEigen eig;
    try {
      eig = sym_eigen(jacobian(z));
    } catch (const DomainError&) {
      return;
    }
    const std::size_t big = z.size();
    std::size_t weakest = 0;
    double largest = 0.0;
    for (std::size_t k = 0; k < big; ++k) {
      largest = std::max(largest, std::abs(eig.values[k]));
      if (std::abs(eig.values[k]) < std::abs(eig.values[weakest])) weakest = k;
    }
    const double scale = std::max(1.0, largest);
    if (std::abs(eig.values[weakest]) > 1e-3 * scale) return;

    const Vector v0 = eig.vectors.column(weakest);
    Vector w(z);
    w.insert(w.end(), v0.begin(), v0.end());

    auto augmented = [&](const Vector& ww) {
      const Vector zz(ww.begin(), ww.begin() + big);
      const std::span<const double> v(ww.data() + big, big);
      Vector g = residual(zz);
      const Vector kv = jacobian(zz) * v;
      g.insert(g.end(), kv.begin(), kv.end());
      g.push_back(dot(v0, v) - 1.0);
      return g;
    };

    try {
      Vector g = augmented(w);
      const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
      for (int it = 0; it < 50; ++it) {
        const Vector zz(w.begin(), w.begin() + big);
        const std::span<const double> v(w.data() + big, big);
        const Matrix k = jacobian(zz);
        Matrix dg(2 * big + 1, 2 * big);
        for (std::size_t r0 = 0; r0 < big; ++r0)
          for (std::size_t c = 0; c < big; ++c) {
            dg(r0, c) = k(r0, c);
            dg(big + r0, big + c) = k(r0, c);
          }
        for (std::size_t c = 0; c < big; ++c) {
          const double h = h0 * (1.0 + std::abs(zz[c]));
          Vector up = zz, down = zz;
          up[c] += h;
          down[c] -= h;
          const Vector kvu = jacobian(up) * v;
          const Vector kvd = jacobian(down) * v;
          for (std::size_t r0 = 0; r0 < big; ++r0) dg(big + r0, c) = (kvu[r0] - kvd[r0]) / (2.0 * h);
        }
        for (std::size_t c = 0; c < big; ++c) dg(2 * big, big + c) = v0[c];

        Vector rhs(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) rhs[i] = -g[i];
        const Vector delta = solve_least_squares(dg, rhs);

        bool moved = false;
        for (double t = 1.0; t >= cfg_.min_step; t *= 0.5) {
          Vector trial(w.size());
          for (std::size_t i = 0; i < w.size(); ++i) trial[i] = w[i] + t * delta[i];
          try {
            Vector gt = augmented(trial);
            if (norm2(gt) < norm2(g)) {
              w = std::move(trial);
              g = std::move(gt);
              moved = true;
              break;
            }
          } catch (const DomainError&) {
          }
        }
        if (!moved) break;
        if (norm_inf(delta) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + norm_inf(w))) break;
      }
    } catch (const DomainError&) {
      return;
    } catch (const SingularMatrixError&) {
      return;
    }

    const Vector refined(w.begin(), w.begin() + big);
    Vector rr;
    try {
      rr = residual(refined);
      const Vector kv = jacobian(refined) * std::span<const double>(w.data() + big, big);
      if (norm_inf(kv) > 1e-8 * scale) return;
    } catch (const DomainError&) {
      return;
    }
    if (norm_inf(rr) > cfg_.stationarity_tol || !inside(refined)) return;
    double moved = 0.0;
    for (std::size_t i = 0; i < n_; ++i) moved = std::max(moved, std::abs(refined[i] - z[i]));
    if (moved > 1e-4 * (1.0 + norm_inf(xs(z)))) return;
    z = refined;
    r = std::move(rr);
  }

  CriticalPoint finish(Vector z, Vector r, std::size_t iterations) const {
    polish(z, r);
    refine_singular(z, r);
    CriticalPoint cp;
    cp.x.assign(z.begin(), z.begin() + n_);
    cp.lambda.assign(z.begin() + n_, z.end());
    cp.residual_norm = norm_inf(r);
    cp.iterations = iterations;
    return cp;
  }

 private:
  const Problem& p_;
  const SolverConfig& cfg_;
  std::size_t n_;
  std::size_t m_;
  std::vector<Interval> bounds_;
};

}  // namespace

SolveOutcome solve_from(const Problem& p, std::span<const double> start_x,
                        std::span<const double> start_lambda, const SolverConfig& cfg) {
  check_dims(p, start_x, start_lambda);
  cfg.validate();
  const NewtonRun run(p, cfg);

  Vector z(start_x.begin(), start_x.end());
  z.insert(z.end(), start_lambda.begin(), start_lambda.end());
  Vector r;
  try {
    r = run.residual(z);
  } catch (const DomainError&) {
    return Divergence{DivergenceReason::kDomain, 0};
  }

  for (std::size_t it = 0;; ++it) {
    if (norm_inf(r) <= cfg.stationarity_tol) return run.finish(std::move(z), std::move(r), it);
    if (it == cfg.max_newton_iters) return Divergence{DivergenceReason::kIterationLimit, it};
    switch (run.step(z, r)) {
      case NewtonRun::StepResult::kAccepted: break;
      case NewtonRun::StepResult::kCollapsed: return Divergence{DivergenceReason::kStepCollapse, it};
      case NewtonRun::StepResult::kSingular: return Divergence{DivergenceReason::kSingularJacobian, it};
      case NewtonRun::StepResult::kDomain: return Divergence{DivergenceReason::kDomain, it};
    }
    if (!run.inside(z)) return Divergence{DivergenceReason::kLeftBox, it + 1};
  }
}

namespace {

std::vector<unsigned> first_primes(std::size_t count) {
  std::vector<unsigned> primes;
  for (unsigned c = 2; primes.size() < count; ++c) {
    bool prime = true;
    for (unsigned q : primes) {
      if (q * q > c) break;
      if (c % q == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(std::size_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

}  // namespace

std::vector<Vector> multistart_seeds(const Problem& p, const SolverConfig& cfg) {
  const std::size_t n = p.n();
  const auto box = p.sample_box();
  const auto primes = first_primes(n);

  // Bit-level conversion keeps the shift identical across standard libraries.
  std::mt19937_64 gen(cfg.rng_seed);
  Vector shift(n);
  for (double& s : shift) s = static_cast<double>(gen() >> 11) * 0x1p-53;

  std::vector<Vector> seeds;
  seeds.reserve(cfg.starts);
  for (std::size_t k = 1; k <= cfg.starts; ++k) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      double u = radical_inverse(k, primes[i]) + shift[i];
      if (u >= 1.0) u -= 1.0;
      x[i] = box[i].lo + u * (box[i].hi - box[i].lo);
    }
    seeds.push_back(std::move(x));
  }
  return seeds;
}

SearchResult find_critical_points(const Problem& p, const SolverConfig& cfg) {
  validate(p);
  cfg.validate();
  SearchResult out;
  const Vector lambda0(p.m(), 0.0);

  std::vector<CriticalPoint> found;
  for (const Vector& seed : multistart_seeds(p, cfg)) {
    ++out.seeds;
    try {
      (void)kkt_residual(p, seed, lambda0);
    } catch (const DomainError&) {
      ++out.skipped;
      continue;
    }
    SolveOutcome outcome = solve_from(p, seed, lambda0, cfg);
    if (auto* cp = std::get_if<CriticalPoint>(&outcome)) {
      ++out.converged;
      found.push_back(std::move(*cp));
    } else {
      ++out.diverged;
    }
  }

  std::stable_sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return a.residual_norm < b.residual_norm;
  });
  for (auto& cp : found) {
    const bool duplicate = std::any_of(out.points.begin(), out.points.end(), [&](const CriticalPoint& kept) {
      Vector d(cp.x.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = cp.x[i] - kept.x[i];
      return norm2(d) < cfg.dedup_radius;
    });
    if (!duplicate) out.points.push_back(std::move(cp));
  }
  std::sort(out.points.begin(), out.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return std::lexicographical_compare(a.x.begin(), a.x.end(), b.x.begin(), b.x.end());
  });
  return out;
}

}  // namespace lagcrit
