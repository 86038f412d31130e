#include <gtest/gtest.h>

#include <cmath>

#include "fano_balance/functionals.hpp"
#include "fano_balance/testconfig.hpp"

using namespace fano;

namespace {

DiagonalHermitian round_h() {
  return DiagonalHermitian::from_entries(builtin_polytope("P1"), 1, {1.0, 0.5, 1.0});
}

DiagonalHermitian wobble(const std::string& name, std::int64_t k, double amp = 0.4) {
  auto p = builtin_polytope(name);
  auto pts = lattice_points(p, k);
  std::vector<double> logs;
  for (std::size_t i = 0; i < pts.size(); ++i) logs.push_back(amp * std::cos(2.3 * i + 0.4));
  return DiagonalHermitian(p, k, logs);
}

std::vector<double> ray_weights(const std::string& name, std::int64_t k) {
  auto p = builtin_polytope(name);
  PLConvexFunction g({AffinePiece{}, AffinePiece{{1, p.dim() == 2 ? Rational(1) : Rational(0)}, 0}});
  return generator(ToricTestConfig(p, k, g)).weights_double();
}

DiagonalHermitian bergman_ray_step(const DiagonalHermitian& h, const std::vector<double>& w,
                                   double t) {
  auto logs = h.log_entries();
  for (std::size_t b = 0; b < logs.size(); ++b) logs[b] -= t * w[b];
  return DiagonalHermitian(h.polytope(), h.k(), logs);
}

}  // namespace

TEST(Hilbert, RoundMetricBetaIntegrals) {
  ToricPotential u(round_h(), std::log(3.0));
  auto h1 = hilb(u).entries();
  EXPECT_NEAR(h1[0], 1.0 / 3, 1e-12);
  EXPECT_NEAR(h1[1], 1.0 / 6, 1e-12);
  EXPECT_NEAR(h1[2], 1.0 / 3, 1e-12);
  auto h2 = hilb(u, 2).entries();
  const double expect[] = {1.0 / 5, 1.0 / 20, 1.0 / 30, 1.0 / 20, 1.0 / 5};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(h2[i], expect[i], 1e-12);
}

TEST(Hilbert, SoftmaxRouteAgreesWithDirectIntegral) {
  for (const auto& name : builtin_names()) {
    auto h = wobble(name, 2);
    auto direct = hilb(fs(h));
    auto fast = hilb_fs(h, potential_moments(fs(h), {}));
    for (std::size_t b = 0; b < h.size(); ++b)
      EXPECT_NEAR(fast.log_entries()[b], direct.log_entries()[b], 1e-10) << name;
  }
}

TEST(Energy, ConstantShiftAndCocycle) {
  for (const auto& name : builtin_names()) {
    auto u0 = fs(wobble(name, 1, 0.0));
    double deg = to_double(anticanonical_degree(u0.polytope()));
    EXPECT_NEAR(energy_e(u0.shifted(0.8), u0), 0.8 * deg, 1e-9) << name;
    auto u1 = fs(wobble(name, 1, 0.3));
    auto u2 = fs(wobble(name, 1, -0.5));
    double e10 = energy_e(u1, u0), e21 = energy_e(u2, u1), e20 = energy_e(u2, u0);
    EXPECT_NEAR(e10 + e21, e20, 1e-9) << name;
    EXPECT_NEAR(energy_e(u0, u1), -e10, 1e-9) << name;
  }
}

TEST(Functionals, ScaleInvariance) {
  for (const auto& name : builtin_names()) {
    auto ref = make_reference(builtin_polytope(name), 2);
    auto h = wobble(name, 2);
    auto a = functional_suite(h, ref), b = functional_suite(h.scaled(7.0), ref);
    EXPECT_NEAR(a.Dk, b.Dk, 1e-9) << name;
    EXPECT_NEAR(a.D, b.D, 1e-9) << name;
    EXPECT_NEAR(a.Zk, b.Zk, 1e-8) << name;
    EXPECT_GT(std::abs(a.L - b.L), 0.5) << name;
  }
}

TEST(Functionals, ReferencePoint) {
  auto ref = make_reference(builtin_polytope("P2"), 1);
  auto v = functional_suite(DiagonalHermitian::identity(ref.h0.polytope(), 1), ref);
  EXPECT_NEAR(v.E, 0.0, 1e-12);
  auto w = functional_suite(ref.h0, ref);
  EXPECT_NEAR(w.Ek, 0.0, 1e-12);
}

TEST(Functionals, RatesMatchCentralDifferences) {
  const double eps = 1e-4;
  for (const auto& name : builtin_names()) {
    for (std::int64_t k : {1, 2}) {
      auto ref = make_reference(builtin_polytope(name), k);
      auto h = wobble(name, k);
      auto w = ray_weights(name, k);
      auto r = ray_rates(h, w);
      auto fp = functional_suite(bergman_ray_step(h, w, eps), ref);
      auto fm = functional_suite(bergman_ray_step(h, w, -eps), ref);
      EXPECT_NEAR(r.ding, (fp.Dk - fm.Dk) / (2 * eps), 1e-7) << name << k;
      EXPECT_NEAR(r.ding_fs, (fp.D - fm.D) / (2 * eps), 1e-7) << name << k;
      EXPECT_NEAR(r.energy, (fp.E - fm.E) / (2 * eps), 1e-6) << name << k;
      EXPECT_NEAR(r.balancing, (fp.Zk - fm.Zk) / (2 * eps), 1e-6) << name << k;
    }
  }
}

TEST(MMatrix, TraceFreeAndBalancedRound) {
  auto h = wobble("F1", 2);
  auto m = m_matrix(h);
  double s = 0, t = 0;
  for (double v : m.trace_free) s += v;
  for (double v : m.diagonal) t += v;
  EXPECT_NEAR(s, 0.0, 1e-12);
  EXPECT_NEAR(t, 4.0, 1e-12);
  EXPECT_LT(m_matrix(round_h()).residual(), 1e-12);
}

TEST(Functionals, DecompositionIdentity) {
  for (const auto& name : builtin_names()) {
    for (std::int64_t k : {1, 2}) {
      auto ref = make_reference(builtin_polytope(name), k);
      auto v = functional_suite(wobble(name, k), ref);
      double n = builtin_polytope(name).dim();
      double deg = to_double(anticanonical_degree(builtin_polytope(name)));
      double coeff = std::tgamma(n + 1) / (std::pow(double(k), n + 1) * deg);
      EXPECT_NEAR(v.Dk - v.D - coeff * v.Zk, 0.0, 1e-10) << name << k;
      EXPECT_NEAR(v.Dk, -v.Ek + v.L, 1e-12);
    }
  }
}

TEST(Functionals, IdentityPotentialOnLine) {
  auto u = fs(DiagonalHermitian::identity(builtin_polytope("P1"), 1));
  for (double x : {-3.0, 0.0, 0.7, 12.0})
    EXPECT_NEAR(u(&x), std::log((std::exp(-x) + 1 + std::exp(x)) / 3), 1e-13);
  auto v = fs(DiagonalHermitian::identity(builtin_polytope("P1"), 1).scaled(5.0));
  double x = 0.3;
  EXPECT_NEAR(v(&x), u(&x) - std::log(5.0), 1e-14);
}

TEST(Functionals, BalancedLineIsRound) {
  auto h = DiagonalHermitian::from_entries(builtin_polytope("P1"), 2,
                                           {1.0 / 5, 1.0 / 20, 1.0 / 30, 1.0 / 20, 1.0 / 5});
  ToricPotential u = fs(h);
  double x0 = 0.0;
  const double offset = u(&x0) - 2 * std::log(2.0);
  for (double x : {-20.0, -1.0, 2.0, 30.0})
    EXPECT_NEAR(u(&x) - offset, 2 * std::log(2 * std::cosh(x / 2)), 1e-13);
}

TEST(Hilbert, SymmetricPotentialGivesSymmetricEntries) {
  auto h = DiagonalHermitian::from_entries(builtin_polytope("P1"), 1, {1.0, 10.0, 1.0});
  auto out = hilb(fs(h)).entries();
  EXPECT_NEAR(out[0], out[2], 1e-14 * out[0]);
  auto m = m_matrix(h);
  EXPECT_GT(m.residual(), 1e-3);
  EXPECT_NEAR(m.trace_free[0], m.trace_free[2], 1e-14);
}

TEST(Energy, MonotoneInPotential) {
  auto u0 = fs(wobble("P2", 1, 0.0));
  auto lo = fs(wobble("P2", 1, 0.2));
  // Raising every entry of log h lowers the potential everywhere.
  auto logs = wobble("P2", 1, 0.2).log_entries();
  for (auto& l : logs) l -= 0.3;
  auto hi = fs(DiagonalHermitian(builtin_polytope("P2"), 1, logs));
  EXPECT_GT(energy_e(hi, u0), energy_e(lo, u0));
}

TEST(Densities, NormOfSkewedLineMetricIsStable) {
  auto u = fs(DiagonalHermitian::from_entries(builtin_polytope("P1"), 1, {1.0, 10.0, 1.0}));
  QuadratureSpec fine;
  fine.nodes = 800;
  double a = lq_norm_b(u, 2.0), b = lq_norm_b(u, 2.0, fine);
  EXPECT_GT(a, 0.01);
  EXPECT_NEAR(a, b, 1e-8);
}
