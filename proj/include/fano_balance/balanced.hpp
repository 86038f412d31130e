#pragma once

// Fixed-point iteration towards anti-canonically balanced metrics, Bergman
// geodesic rays and their behaviour at infinity.

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "fano_balance/error.hpp"
#include "fano_balance/functionals.hpp"
#include "fano_balance/invariants.hpp"
#include "fano_balance/testconfig.hpp"

namespace fano {

struct IterationStep {
  double step_change = 0;  // max |h_{j+1}/h_j - 1|
  double residual = 0;     // max |Mbar(H_j)|
  double ding = 0;         // D^(k)(H_j) up to the reference constant
  double damping = 1.0;
};

struct IterationTrace {
  std::vector<IterationStep> steps;
  DiagonalHermitian final_metric;
  bool converged = false;
  int iterations = 0;
  int ding_increases = 0;  // steps where D^(k) went up by more than 1e-12
  double wall_seconds = 0;
};

class NonConvergence : public Error {
 public:
  NonConvergence(int max_iter, IterationTrace trace)
      : Error("no convergence after " + std::to_string(max_iter) + " iterations"),
        trace_(std::move(trace)) {}
  const IterationTrace& trace() const { return trace_; }

 private:
  IterationTrace trace_;
};

struct IterationOptions {
  double tol = 1e-10;
  int max_iter = 500;
  double damping = 0.5;  // theta of the fallback once the residual oscillates
  bool allow_damping = true;
  QuadratureSpec spec{};
};

/// H_{j+1} = normalize(Hilb(FS(H_j))), determinant-one gauge. Switches to the
/// damped update H^{1-theta} T(H)^theta after three consecutive residual
/// increases.
inline IterationTrace donaldson_iterate(const DiagonalHermitian& init,
                                        const IterationOptions& opt = {}) {
  if (!(opt.tol > 0)) throw InvalidInput("tolerance must be positive");
  auto start = std::chrono::steady_clock::now();
  const double kn = std::pow(static_cast<double>(init.k()), init.dim());
  const double residual_target = 10.0 * opt.tol * kn / static_cast<double>(init.size());
  DiagonalHermitian h = init.normalized();
  IterationTrace trace;
  double theta = 1.0;
  int rising = 0;
  double last_residual = std::numeric_limits<double>::infinity();
  for (int j = 0; j < opt.max_iter; ++j) {
    PotentialMoments m = potential_moments(fs(h), opt.spec);
    MMatrix mm = m_matrix(h, m);
    DiagonalHermitian next = hilb_fs(h, m).normalized();
    IterationStep step;
    step.residual = mm.residual();
    step.damping = theta;
    // D^(k) in the determinant-one gauge is L(FS(H)) plus a constant.
    step.ding = -m.log_z;
    if (theta < 1.0) {
      std::vector<double> mixed(h.size());
      for (std::size_t b = 0; b < mixed.size(); ++b)
        mixed[b] = (1.0 - theta) * h.log_entries()[b] + theta * next.log_entries()[b];
      next = DiagonalHermitian(h.polytope(), h.k(), std::move(mixed)).normalized();
    }
    double change = 0;
    for (std::size_t b = 0; b < h.size(); ++b)
      change = std::max(change, std::abs(std::expm1(next.log_entries()[b] - h.log_entries()[b])));
    step.step_change = change;
    if (!trace.steps.empty() && step.ding > trace.steps.back().ding + 1e-12) ++trace.ding_increases;
    trace.steps.push_back(step);
    trace.iterations = j + 1;
    if (change < opt.tol && step.residual < residual_target) {
      trace.converged = true;
      trace.final_metric = h;
      break;
    }
    rising = step.residual > last_residual ? rising + 1 : 0;
    last_residual = step.residual;
    if (opt.allow_damping && rising >= 3 && theta == 1.0) theta = opt.damping;
    h = std::move(next);
  }
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!trace.converged) {
    trace.final_metric = h;
    throw NonConvergence(opt.max_iter, std::move(trace));
  }
  return trace;
}

/// H_t = e^{-tA} H: h_beta e^{-t w_beta}.
inline DiagonalHermitian bergman_ray(const DiagonalHermitian& h, const std::vector<double>& weights,
                                     double t) {
  if (weights.size() != h.size()) throw InvalidInput("generator does not match basis");
  std::vector<double> logs = h.log_entries();
  for (std::size_t b = 0; b < logs.size(); ++b) logs[b] -= t * weights[b];
  return DiagonalHermitian(h.polytope(), h.k(), std::move(logs));
}

/// Uniform grid t0, t0 + step, ..., t1.
inline std::vector<double> time_grid(double t0, double t1, double step) {
  if (!(step > 0) || t1 < t0) throw InvalidInput("bad time grid");
  std::vector<double> out;
  const int count = static_cast<int>(std::floor((t1 - t0) / step + 1e-9));
  for (int i = 0; i <= count; ++i) out.push_back(t0 + i * step);
  return out;
}

struct RayPoint {
  double t = 0;
  RayRates rates;
  double balancing = 0;  // Z_k(H_t)
};

struct SlopeReport {
  std::vector<RayPoint> series;
  double slope = 0;          // d(t_max)
  double slope_bracket = 0;  // d(t_max) - d(t_max - step)
  Rational fut;              // Fut_k
  double invariant_side = 0; // Fut_k/(k N_k)
  double gap = 0;            // q_est
  Rational chow;
  double z_rate_limit = 0;   // dZ_k/dt at t_max
  double z_invariant = 0;    // (-K)^n/n! k^{n+1} Chow_k
  bool is_product = false;
  int monotonicity_violations = 0;
};

struct RayOptions {
  QuadratureSpec spec{};
  bool with_balancing_values = true;  // also evaluate Z_k(H_t) itself
  double monotone_tol = 1e-8;
  bool throw_on_non_monotone = true;
};

inline std::vector<RayPoint> ray_series(const DiagonalHermitian& h, const std::vector<double>& w,
                                        const std::vector<double>& t_grid, const RayOptions& opt) {
  std::optional<Reference> ref;
  if (opt.with_balancing_values) ref = make_reference(h.polytope(), h.k(), opt.spec);
  std::vector<RayPoint> out;
  for (double t : t_grid) {
    DiagonalHermitian ht = bergman_ray(h, w, t);
    QuadratureSpec s = QuadratureSpec::for_time(t, opt.spec);
    RayPoint pt;
    pt.t = t;
    pt.rates = ray_rates(ht, w, s);
    if (ref) pt.balancing = functional_suite(ht, *ref, s).Zk;
    out.push_back(pt);
  }
  return out;
}

/// Derivative of D^(k) along the ray of tc through h, read at the end of the
/// grid, compared with Fut_k/(k N_k).
inline SlopeReport slope_at_infinity(const DiagonalHermitian& h, const ToricTestConfig& tc,
                                     const std::vector<double>& t_grid, const RayOptions& opt = {}) {
  if (t_grid.size() < 2) throw InvalidInput("time grid needs at least two points");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw InvalidInput("time grid must increase");
  if (tc.k() != h.k() || !(tc.polytope() == h.polytope()))
    throw InvalidInput("metric and test configuration live on different section spaces");
  Generator a = generator(tc);
  std::vector<double> w = a.weights_double();

  SlopeReport r;
  r.series = ray_series(h, w, t_grid, opt);
  for (std::size_t i = 1; i < r.series.size(); ++i)
    if (r.series[i].rates.ding < r.series[i - 1].rates.ding - opt.monotone_tol)
      ++r.monotonicity_violations;
  if (r.monotonicity_violations > 0 && opt.throw_on_non_monotone)
    throw NonMonotone(std::to_string(r.monotonicity_violations) +
                      " decreases of the Ding derivative along the ray");
  const auto& last = r.series.back();
  const auto& prev = r.series[r.series.size() - 2];
  r.slope = last.rates.ding;
  r.slope_bracket = last.rates.ding - prev.rates.ding;

  ExpansionCoeffs e = expansion(tc);
  r.fut = quantized_futaki(tc, e);
  r.chow = chow_weight(tc, e);
  const auto c = GeometryConstants::of(h);
  r.invariant_side = to_double(r.fut) / (static_cast<double>(tc.k()) * c.nk);
  r.gap = r.invariant_side - r.slope;
  r.z_rate_limit = last.rates.balancing;
  r.z_invariant = c.degree / std::tgamma(c.n + 1.0) * c.kpow * to_double(r.chow);
  r.is_product = tc.is_product();
  return r;
}

struct ZLimit {
  std::vector<double> t;
  std::vector<double> values;  // Z_k(H_t)
  std::vector<double> rates;   // dZ_k/dt
  double limit = 0;            // rate at t_max
  double bracket = 0;          // rate(t_max) - rate(t_max - step)
  double invariant = 0;        // (-K)^n/n! k^{n+1} Chow_k
};

/// Balancing energy along the ray. Its value carries an additive constant set
/// by the reference metric; its rate converges to the normalised Chow weight.
inline ZLimit z_limit(const DiagonalHermitian& h, const ToricTestConfig& tc,
                      const std::vector<double>& t_grid, const RayOptions& opt = {}) {
  if (t_grid.size() < 2) throw InvalidInput("time grid needs at least two points");
  std::vector<double> w = generator(tc).weights_double();
  auto series = ray_series(h, w, t_grid, opt);
  ZLimit z;
  for (const auto& pt : series) {
    z.t.push_back(pt.t);
    z.values.push_back(pt.balancing);
    z.rates.push_back(pt.rates.balancing);
  }
  z.limit = z.rates.back();
  z.bracket = z.rates.back() - z.rates[z.rates.size() - 2];
  const auto c = GeometryConstants::of(h);
  z.invariant = c.degree / std::tgamma(c.n + 1.0) * c.kpow * to_double(chow_weight(tc));
  return z;
}

struct LowerBound {
  double lhs = 0;     // ||B(u)||_{L^q}
  double rhs = 0;     // -DF / ||tc||_p
  double margin = 0;  // lhs - rhs
  Rational df;
  PNorm norm;
  double q = 0;
};

/// ||B(u)||_{L^q(omega^n/n!)} against -DF/||tc||_p with q = p/(p-1).
inline LowerBound lower_bound_check(const ToricPotential& u, const ToricTestConfig& tc, int p,
                                    const QuadratureSpec& spec = {}) {
  LowerBound lb;
  lb.norm = pnorm(tc, p);
  lb.df = donaldson_futaki(tc);
  lb.q = static_cast<double>(p) / (p - 1.0);
  lb.lhs = lq_norm_b(u, lb.q, spec);
  lb.rhs = -to_double(lb.df) / lb.norm.value;
  lb.margin = lb.lhs - lb.rhs;
  return lb;
}

}  // namespace fano
