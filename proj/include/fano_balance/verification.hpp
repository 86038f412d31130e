#pragma once

// The acceptance checks, one named check per criterion, collected into a
// deterministic JSON report.

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "fano_balance/corpus.hpp"
#include "fano_balance/io.hpp"

#ifndef FANO_BALANCE_VERSION
#define FANO_BALANCE_VERSION "0.1.0"
#endif

namespace fano {

enum class Profile { quick, full };

struct VerifyOptions {
  Profile profile = Profile::quick;
  QuadratureSpec spec{};
  bool corrupt_weights = false;  // negative control: flips the weight sign of the kink fixture
};

struct Check {
  int criterion = 0;
  std::string name;
  std::string statement;
  io::json expected;
  io::json observed;
  double tolerance = 0;
  bool pass = false;
  double seconds = 0;  // kept out of the report payload
};

struct VerificationReport {
  std::vector<Check> checks;
  QuadratureSpec spec;
  Profile profile = Profile::quick;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace verify {

inline ToricTestConfig p1_kink(std::int64_t k) {
  return ToricTestConfig(builtin_polytope("P1"), k,
                         PLConvexFunction({AffinePiece{}, AffinePiece{{1, 0}, 0}}));
}

inline DiagonalHermitian random_metric(const LatticePolytope& p, std::int64_t k, std::uint64_t seed,
                                       double amplitude = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-amplitude, amplitude);
  std::vector<double> logs(lattice_points(p, k).size());
  for (auto& l : logs) l = d(rng);
  return DiagonalHermitian(p, k, logs);
}

/// h_beta = (k+beta)!(k-beta)!/(2k+1)! on the line.
inline DiagonalHermitian p1_balanced(std::int64_t k) {
  std::vector<double> logs;
  for (std::int64_t b = -k; b <= k; ++b)
    logs.push_back(std::lgamma(k + b + 1.0) + std::lgamma(k - b + 1.0) - std::lgamma(2.0 * k + 2.0));
  return DiagonalHermitian(builtin_polytope("P1"), k, logs);
}

inline double max_log_ratio(const DiagonalHermitian& a, const DiagonalHermitian& b) {
  auto x = a.normalized().log_entries(), y = b.normalized().log_entries();
  double m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(std::expm1(x[i] - y[i])));
  return m;
}

inline std::vector<double> grid_for_slope(Profile) { return time_grid(0, 40, 2); }

// ------------------------------------------------------------------ checks

inline Check exact_invariants(const VerifyOptions& opt) {
  Check c{1, "exact_invariants", "Donaldson-Futaki invariant, Chow weight and quantized Futaki invariant of the kinked configuration on the line", {}, {}, 0, true};
  io::json exp = io::json::array(), obs = io::json::array();
  for (std::int64_t k = 1; k <= 3; ++k) {
    ToricTestConfig tc = p1_kink(k);
    if (opt.corrupt_weights) tc = tc.reversed();
    auto e = expansion(tc);
    Rational df = donaldson_futaki(e), chow = chow_weight(tc, e), fut = quantized_futaki(tc, e);
    Rational df_x = make_rational(1, 4), chow_x = make_rational(1, 4 * (2 * k + 1)),
             fut_x = Rational(k * (k + 1) / 2);
    exp.push_back({{"k", k}, {"DF", to_string(df_x)}, {"Chow_k", to_string(chow_x)}, {"Fut_k", to_string(fut_x)}});
    obs.push_back({{"k", k}, {"DF", to_string(df)}, {"Chow_k", to_string(chow)}, {"Fut_k", to_string(fut)}});
    c.pass = c.pass && df == df_x && chow == chow_x && fut == fut_x;
  }
  c.expected = exp;
  c.observed = obs;
  return c;
}

inline Check chow_df_limit_check(const VerifyOptions&) {
  Check c{2, "chow_df_limit", "level-scaled Chow weights of the kinked line configuration approach half the Donaldson-Futaki invariant", {}, {}, 0.01, true};
  auto seq = chow_df_limit(p1_kink(1), 50);
  const double target = 0.125;
  const double last = to_double(seq.back());
  bool exact_ok = true;
  io::json mism = io::json::array();
  for (std::int64_t m = 1; m <= 10; ++m) {
    Rational x = make_rational(m, 4 * (2 * m + 1));
    if (seq[m - 1] != x) {
      exact_ok = false;
      mism.push_back(m);
    }
  }
  c.pass = exact_ok && std::abs(last - target) <= 0.01 * target;
  c.expected = {{"limit", "1/8"}, {"relative_tolerance", 0.01}, {"sequence", "m/(4(2m+1)), m <= 10"}};
  c.observed = {{"m", 50}, {"km_Chow_km", to_string(seq.back())}, {"decimal", last},
                {"sequence_mismatches", mism}};
  return c;
}

inline Check affine_invariance(const VerifyOptions&) {
  Check c{3, "affine_invariance", "DF and Chow_k are unchanged by linearization shifts and by adding affine functions to g, over the whole corpus", {}, {}, 0, true};
  const std::vector<Rational> shifts = {Rational(1), make_rational(-3, 2)};
  const std::vector<AffinePiece> affines = {AffinePiece{{1, 0}, 0},
                                            AffinePiece{{0, 1}, make_rational(1, 2)},
                                            AffinePiece{{1, -2}, make_rational(-1, 3)}};
  io::json per = io::json::object();
  int total = 0, failed = 0;
  for (const auto& entry : builtin_corpus()) {
    const auto& tc = entry.config;
    const std::string poly = tc.polytope().name();
    if (!per.contains(poly)) per[poly] = {{"cases", 0}, {"shift_failures", 0}, {"affine_failures", 0}};
    auto e = expansion(tc);
    Rational df = donaldson_futaki(e), chow = chow_weight(tc, e);
    for (const auto& s : shifts) {
      auto t2 = tc.with_shift(s);
      auto e2 = expansion(t2);
      ++total;
      per[poly]["cases"] = per[poly]["cases"].get<int>() + 1;
      if (donaldson_futaki(e2) != df || chow_weight(t2, e2) != chow) {
        ++failed;
        per[poly]["shift_failures"] = per[poly]["shift_failures"].get<int>() + 1;
      }
    }
    for (auto a : affines) {
      if (tc.polytope().dim() == 1) a.linear[1] = 0;
      auto t2 = add_affine(tc, a);
      auto e2 = expansion(t2);
      ++total;
      per[poly]["cases"] = per[poly]["cases"].get<int>() + 1;
      if (donaldson_futaki(e2) != df || chow_weight(t2, e2) != chow) {
        ++failed;
        per[poly]["affine_failures"] = per[poly]["affine_failures"].get<int>() + 1;
      }
    }
  }
  c.pass = failed == 0;
  c.expected = {{"failures", 0}};
  c.observed = {{"cases", total}, {"failures", failed}, {"by_polytope", per}};
  return c;
}

inline Check balanced_line(const VerifyOptions& opt) {
  Check c{4, "balanced_line", "Donaldson iteration on the line reaches the Beta-integral balanced metrics", {}, {}, 1e-6, true};
  io::json obs = io::json::array();
  IterationOptions io_opt;
  io_opt.tol = 1e-10;
  io_opt.spec = opt.spec;
  for (std::int64_t k = 1; k <= 4; ++k) {
    IterationTrace t;
    bool converged = true;
    try {
      t = donaldson_iterate(DiagonalHermitian::identity(builtin_polytope("P1"), k), io_opt);
    } catch (const NonConvergence& e) {
      t = e.trace();
      converged = false;
    }
    double err = max_log_ratio(t.final_metric, p1_balanced(k));
    double res = m_matrix(t.final_metric, opt.spec).residual();
    bool ok = converged && t.iterations <= 60 && err <= 1e-6 && res <= 1e-8;
    c.pass = c.pass && ok;
    obs.push_back({{"k", k}, {"iterations", t.iterations}, {"relative_error", err},
                   {"residual", res}, {"ding_increases", t.ding_increases}, {"pass", ok}});
  }
  c.expected = {{"iterations_max", 60}, {"relative_error_max", 1e-6}, {"residual_max", 1e-8}};
  c.observed = obs;
  return c;
}

inline Check ke_identity(const VerifyOptions& opt) {
  Check c{5, "ke_identity", "B vanishes for the round metric on the line", {}, {}, 1e-6, true};
  ToricPotential u(p1_balanced(1).normalized(), 0.0);
  BFunction b(u, opt.spec);
  TensorGrid grid(1, at_level(b.mu().spec, 1));
  double pointwise = 0;
  for (double x : grid.axis()) pointwise = std::max(pointwise, std::abs(b(&x)));
  double l2 = lq_norm_b(u, 2.0, opt.spec);
  c.pass = l2 <= 1e-6 && pointwise <= 1e-8;
  c.expected = {{"L2_max", 1e-6}, {"pointwise_max", 1e-8}};
  c.observed = {{"L2", l2}, {"pointwise", pointwise}, {"nodes", grid.nodes_per_axis()}};
  return c;
}

inline Check derivative_formula(const VerifyOptions& opt) {
  Check c{6, "derivative_formula", "analytic derivative of the quantized Ding functional along Bergman rays matches central differences", {}, {}, 1e-5, true};
  const int cases = opt.profile == Profile::full ? 40 : 20;
  const auto corpus = builtin_corpus();
  const double eps = 1e-4;
  double worst = 0;
  io::json obs = io::json::array();
  for (int i = 0; static_cast<int>(obs.size()) < cases; ++i) {
    // Stride through the corpus so every polytope and both shapes appear.
    const auto& entry = corpus[(i * 37) % corpus.size()];
    const ToricTestConfig& tc = entry.config;
    if (tc.polytope().dim() == 2 && tc.k() == 3 && opt.profile == Profile::quick) continue;
    DiagonalHermitian h = random_metric(tc.polytope(), tc.k(), 1000 + i);
    auto w = generator(tc).weights_double();
    Reference ref = make_reference(tc.polytope(), tc.k(), opt.spec);
    double analytic = ding_derivative(h, w, opt.spec);
    double up = functional_suite(bergman_ray(h, w, eps), ref, opt.spec).Dk;
    double dn = functional_suite(bergman_ray(h, w, -eps), ref, opt.spec).Dk;
    double fd = (up - dn) / (2 * eps);
    double diff = std::abs(analytic - fd);
    worst = std::max(worst, diff);
    obs.push_back({{"config", entry.name}, {"analytic", analytic}, {"central", fd}, {"difference", diff}});
  }
  c.pass = worst <= 1e-5 && static_cast<int>(obs.size()) >= 20;
  c.expected = {{"max_difference", 1e-5}, {"cases_min", 20}};
  c.observed = {{"cases", obs.size()}, {"max_difference", worst}, {"per_case", obs}};
  return c;
}

inline Check slope_product(const VerifyOptions& opt) {
  Check c{7, "slope_product", "the Ding slope of a product configuration on the line equals Fut_k/(kN_k) = 0", {}, {}, 1e-4, true};
  ToricTestConfig base(builtin_polytope("P1"), 1, PLConvexFunction::linear(1));
  RayOptions ro;
  ro.spec = opt.spec;
  ro.with_balancing_values = false;
  ro.throw_on_non_monotone = false;
  io::json obs = io::json::array();
  for (std::int64_t k = 1; k <= 3; ++k) {
    ToricTestConfig tc(base.polytope(), k, base.g());
    std::vector<std::pair<std::string, DiagonalHermitian>> metrics = {
        {"identity", DiagonalHermitian::identity(tc.polytope(), k)},
        {"random", random_metric(tc.polytope(), k, 77 + k)}};
    if (opt.profile == Profile::full) metrics.push_back({"balanced", p1_balanced(k)});
    for (const auto& [label, h] : metrics) {
      auto rep = slope_at_infinity(h, tc, grid_for_slope(opt.profile), ro);
      double dev = std::abs(rep.slope - rep.invariant_side);
      bool ok = dev <= 1e-4;
      c.pass = c.pass && ok;
      obs.push_back({{"k", k}, {"metric", label}, {"d_tmax", rep.slope},
                     {"Fut_k/(kN_k)", rep.invariant_side}, {"deviation", dev}});
    }
  }
  c.expected = {{"Fut_k", "0"}, {"max_deviation", 1e-4}, {"t_max", 40}};
  c.observed = obs;
  return c;
}

inline Check slope_kink(const VerifyOptions& opt) {
  Check c{8, "slope_gap_positive", "the kinked configuration on the line leaves a positive gap between Fut_1/(1*3) and the Ding slope, with nondecreasing derivative", {}, {}, 1e-2, true};
  RayOptions ro;
  ro.spec = opt.spec;
  ro.with_balancing_values = false;
  ro.throw_on_non_monotone = false;
  auto tc = p1_kink(1);
  auto rep = slope_at_infinity(DiagonalHermitian::identity(tc.polytope(), 1), tc,
                               grid_for_slope(opt.profile), ro);
  io::json series = io::json::array();
  for (const auto& p : rep.series) series.push_back({p.t, p.rates.ding});
  c.pass = rep.gap >= 1e-2 && rep.monotonicity_violations == 0;
  c.expected = {{"q_est_min", 1e-2}, {"monotone", true}};
  c.observed = {{"Fut_1", to_string(rep.fut)}, {"d_tmax", rep.slope}, {"bracket", rep.slope_bracket},
                {"q_est", rep.gap}, {"monotonicity_violations", rep.monotonicity_violations},
                {"series", series}};
  return c;
}

inline Check balancing_slope(const VerifyOptions& opt) {
  Check c{9, "balancing_slope", "the balancing energy along the kinked ray grows at the rate given by the Chow weight", {}, {}, 0, true};
  RayOptions ro;
  ro.spec = opt.spec;
  io::json obs = io::json::array();
  const std::vector<std::tuple<std::int64_t, double, double>> targets = {{1, 1.0 / 6, 1e-3},
                                                                         {2, 4.0 / 5, 1e-2}};
  for (const auto& [k, target, tol] : targets) {
    auto tc = p1_kink(k);
    auto z = z_limit(DiagonalHermitian::identity(tc.polytope(), k), tc, time_grid(36, 40, 2), ro);
    bool ok = std::abs(z.limit - target) <= tol;
    c.pass = c.pass && ok;
    obs.push_back({{"k", k}, {"target", target}, {"tolerance", tol}, {"dZk_dt_tmax", z.limit},
                   {"bracket", z.bracket}, {"Zk_tmax", z.values.back()},
                   {"chow_formula", z.invariant}, {"pass", ok}});
  }
  c.expected = {{"k=1", "1/6 +- 1e-3"}, {"k=2", "4/5 +- 1e-2"}};
  c.observed = obs;
  return c;
}

inline Check lower_bound(const VerifyOptions& opt) {
  Check c{10, "lower_bound", "the L^q norm of B bounds -DF/||.||_p from above for a destabilizing product configuration on F1", {}, {}, 1e-6, true};
  const auto p = builtin_polytope("F1");
  ToricTestConfig tc(p, 1, PLConvexFunction::linear(-1, -1));
  Rational df = donaldson_futaki(tc);
  std::vector<std::pair<std::string, DiagonalHermitian>> metrics = {
      {"identity", DiagonalHermitian::identity(p, 1)},
      {"random_a", random_metric(p, 1, 11)},
      {"random_b", random_metric(p, 1, 12)}};
  io::json obs = io::json::array();
  for (const auto& [label, h] : metrics) {
    for (int pp : {2, 4}) {
      auto lb = lower_bound_check(fs(h), tc, pp, opt.spec);
      bool ok = lb.margin >= -1e-6;
      c.pass = c.pass && ok;
      obs.push_back({{"metric", label}, {"p", pp}, {"lhs", lb.lhs}, {"rhs", lb.rhs}, {"margin", lb.margin}});
    }
  }
  c.pass = c.pass && df < 0;
  c.expected = {{"DF_sign", "negative"}, {"margin_min", -1e-6}};
  c.observed = {{"DF", to_string(df)}, {"cases", obs}};
  return c;
}

// Independent vertex-based membership for the Ehrhart sub-check.
inline bool inside_by_vertices(const LatticePolytope& p, std::int64_t m, const LatticePoint& x) {
  const auto& v = p.vertices();
  if (p.dim() == 1) return x[0] >= m * v.front()[0] && x[0] <= m * v.back()[0];
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    std::int64_t cross = (m * b[0] - m * a[0]) * (x[1] - m * a[1]) - (m * b[1] - m * a[1]) * (x[0] - m * a[0]);
    if (cross < 0) return false;
  }
  return true;
}

inline Check property_suites(const VerifyOptions& opt) {
  Check c{11, "property_suites", "structural identities: trace-free M, scale invariance, convexity, mass conservation, derivatives, lattice counts", {}, {}, 0, true};
  io::json obs = io::json::object();
  auto record = [&](const std::string& name, bool ok, io::json data) {
    data["pass"] = ok;
    obs[name] = data;
    c.pass = c.pass && ok;
  };
  const std::vector<std::int64_t> levels = opt.profile == Profile::full ? std::vector<std::int64_t>{1, 2, 3}
                                                                         : std::vector<std::int64_t>{1, 2};
  double tr_dev = 0, scale_dev = 0;
  for (const auto& name : builtin_names()) {
    const auto p = builtin_polytope(name);
    for (auto k : levels) {
      auto h = random_metric(p, k, 5 + k);
      auto m = m_matrix(h, opt.spec);
      double s = 0, t = 0;
      for (double v : m.trace_free) s += v;
      for (double v : m.diagonal) t += v;
      tr_dev = std::max({tr_dev, std::abs(s), std::abs(t - std::pow(double(k), p.dim()))});
      auto ref = make_reference(p, k, opt.spec);
      double d0 = functional_suite(h, ref, opt.spec).Dk;
      for (int e = -3; e <= 3; ++e)
        scale_dev = std::max(scale_dev, std::abs(functional_suite(h.scaled(std::pow(10.0, e)), ref, opt.spec).Dk - d0));
    }
  }
  record("trace_free", tr_dev <= 1e-10, {{"max_deviation", tr_dev}, {"tolerance", 1e-10}});
  record("scale_invariance", scale_dev <= 1e-10, {{"max_deviation", scale_dev}, {"tolerance", 1e-10}});

  double worst_second = std::numeric_limits<double>::infinity();
  for (const auto& name : builtin_names()) {
    const auto p = builtin_polytope(name);
    ToricTestConfig tc(p, 1, PLConvexFunction({AffinePiece{}, AffinePiece{{1, p.dim() == 2 ? 1 : 0}, 0}}));
    auto w = generator(tc).weights_double();
    auto h = random_metric(p, 1, 21);
    auto ref = make_reference(p, 1, opt.spec);
    std::vector<double> vals;
    for (double t = 0; t <= 5.0 + 1e-9; t += 0.25)
      vals.push_back(functional_suite(bergman_ray(h, w, t), ref, QuadratureSpec::for_time(t, opt.spec)).Dk);
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
      worst_second = std::min(worst_second, vals[i + 1] - 2 * vals[i] + vals[i - 1]);
  }
  record("convexity", worst_second >= -1e-8, {{"min_second_difference", worst_second}, {"tolerance", -1e-8}});

  double mu1 = 0, mu2 = 0, ma1 = 0, ma2 = 0;
  QuadratureSpec fine = opt.spec;
  fine.nodes *= 2;
  fine.max_panel_width *= 0.5;
  for (const auto& name : builtin_names()) {
    const auto p = builtin_polytope(name);
    for (auto k : levels) {
      ToricPotential u = fs(random_metric(p, k, 31 + k));
      MuDensity mu = density_mu(u, opt.spec);
      double mass = integrate(p.dim(), [&](const double* x) { return mu(x); }, at_level(fine, k),
                              p.inradius()).value;
      double ma = ma_mass(u, opt.spec).value / to_double(anticanonical_degree(p));
      (p.dim() == 1 ? mu1 : mu2) = std::max(p.dim() == 1 ? mu1 : mu2, std::abs(mass - 1));
      (p.dim() == 1 ? ma1 : ma2) = std::max(p.dim() == 1 ? ma1 : ma2, std::abs(ma - 1));
    }
  }
  record("mass_conservation", std::max(mu1, ma1) <= 1e-8 && std::max(mu2, ma2) <= 1e-6,
         {{"mu_1d", mu1}, {"mu_2d", mu2}, {"ma_relative_1d", ma1}, {"ma_relative_2d", ma2},
          {"tolerance_1d", 1e-8}, {"tolerance_2d", 1e-6}});

  double grad_dev = 0;
  for (const auto& name : builtin_names()) {
    const auto p = builtin_polytope(name);
    ToricPotential u = fs(random_metric(p, 2, 41));
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> d(-8, 8);
    const double step = 1e-5;
    for (int s = 0; s < 100; ++s) {
      std::array<double, 2> x{d(rng), p.dim() == 2 ? d(rng) : 0.0};
      Jet j = potential_jet(u, x);
      for (int a = 0; a < p.dim(); ++a) {
        auto xp = x, xm = x;
        xp[a] += step;
        xm[a] -= step;
        Jet jp = potential_jet(u, xp), jm = potential_jet(u, xm);
        double g = (jp.value - jm.value) / (2 * step);
        grad_dev = std::max(grad_dev, std::abs(j.gradient[a] - g) / std::max(1.0, std::abs(g)));
        for (int b = 0; b < p.dim(); ++b) {
          double hfd = (jp.gradient[b] - jm.gradient[b]) / (2 * step);
          grad_dev = std::max(grad_dev, std::abs(j.hessian[a][b] - hfd) / std::max(1.0, std::abs(hfd)));
        }
      }
    }
  }
  record("finite_differences", grad_dev <= 1e-6, {{"max_relative_deviation", grad_dev}, {"tolerance", 1e-6}});

  bool counts_ok = true;
  for (const auto& name : builtin_names()) {
    const auto p = builtin_polytope(name);
    for (std::int64_t m = 1; m <= 6; ++m) {
      std::int64_t brute = 0;
      for (std::int64_t x = -3 * m; x <= 3 * m; ++x)
        for (std::int64_t y = p.dim() == 2 ? -3 * m : 0; y <= (p.dim() == 2 ? 3 * m : 0); ++y)
          if (inside_by_vertices(p, m, {x, y})) ++brute;
      counts_ok = counts_ok && brute == static_cast<std::int64_t>(lattice_points(p, m).size()) &&
                  Integer(brute) == ehrhart_count(p, m);
    }
  }
  record("ehrhart_counts", counts_ok, {{"m_max", 6}});
  c.expected = "every sub-check within its tolerance";
  c.observed = obs;
  return c;
}

}  // namespace verify

using CheckFn = std::function<Check(const VerifyOptions&)>;

inline std::vector<CheckFn> all_checks() {
  return {verify::exact_invariants, verify::chow_df_limit_check, verify::affine_invariance,
          verify::balanced_line,    verify::ke_identity,         verify::derivative_formula,
          verify::slope_product,    verify::slope_kink,          verify::balancing_slope,
          verify::lower_bound,      verify::property_suites};
}

/// Runs one criterion; errors become failed checks instead of aborting the run.
inline Check run_check(int criterion, const VerifyOptions& opt) {
  auto fns = all_checks();
  if (criterion < 1 || criterion > static_cast<int>(fns.size()))
    throw InvalidInput("no criterion " + std::to_string(criterion));
  auto start = std::chrono::steady_clock::now();
  Check c;
  try {
    c = fns[criterion - 1](opt);
  } catch (const std::exception& e) {
    c.criterion = criterion;
    c.name = "criterion_" + std::to_string(criterion);
    c.pass = false;
    c.observed = {{"error", e.what()}};
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

inline VerificationReport verify_all(const VerifyOptions& opt = {}) {
  VerificationReport r;
  r.spec = opt.spec;
  r.profile = opt.profile;
  for (int i = 1; i <= static_cast<int>(all_checks().size()); ++i) r.checks.push_back(run_check(i, opt));
  return r;
}

inline VerificationReport verify_selected(const std::vector<int>& criteria, const VerifyOptions& opt = {}) {
  VerificationReport r;
  r.spec = opt.spec;
  r.profile = opt.profile;
  for (int i : criteria) r.checks.push_back(run_check(i, opt));
  return r;
}

namespace io {

inline json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"criterion", c.criterion}, {"name", c.name},     {"statement", c.statement},
                      {"expected", c.expected},   {"observed", c.observed}, {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  return {{"artifact", "fano-balance"},
          {"version", FANO_BALANCE_VERSION},
          {"profile", r.profile == Profile::full ? "full" : "quick"},
          {"quadrature", to_json(r.spec)},
          {"all_pass", r.all_pass()},
          {"checks", checks}};
}

inline json timing_json(const VerificationReport& r) {
  json t = json::object();
  double total = 0;
  for (const auto& c : r.checks) {
    t[c.name] = c.seconds;
    total += c.seconds;
  }
  return {{"total_seconds", total}, {"checks", t}};
}

}  // namespace io

}  // namespace fano
