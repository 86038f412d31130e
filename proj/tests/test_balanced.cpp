#include <gtest/gtest.h>

#include <cmath>

#include <random>

#include "fano_balance/balanced.hpp"
#include "fano_balance/corpus.hpp"

using namespace fano;

namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

ToricTestConfig p1_kink(std::int64_t k) {
  return ToricTestConfig(builtin_polytope("P1"), k,
                         PLConvexFunction({AffinePiece{}, AffinePiece{{1, 0}, 0}}));
}

}  // namespace

TEST(Donaldson, ProjectiveLineReachesBetaIntegrals) {
  for (int k = 1; k <= 3; ++k) {
    auto trace = donaldson_iterate(DiagonalHermitian::identity(builtin_polytope("P1"), k));
    ASSERT_TRUE(trace.converged);
    std::vector<double> logs;
    for (int b = -k; b <= k; ++b)
      logs.push_back(log_factorial(k + b) + log_factorial(k - b) - log_factorial(2 * k + 1));
    auto expect = DiagonalHermitian(builtin_polytope("P1"), k, logs).normalized();
    for (std::size_t i = 0; i < logs.size(); ++i)
      EXPECT_NEAR(trace.final_metric.log_entries()[i], expect.log_entries()[i], 1e-8) << k;
    EXPECT_EQ(trace.ding_increases, 0);
  }
}

TEST(Donaldson, SurfacesConvergeWithSmallResidual) {
  for (const auto& name : {"P2", "P1xP1"}) {
    auto trace = donaldson_iterate(DiagonalHermitian::identity(builtin_polytope(name), 1));
    ASSERT_TRUE(trace.converged) << name;
    EXPECT_LT(m_matrix(trace.final_metric).residual(), 1e-8) << name;
    EXPECT_EQ(trace.ding_increases, 0) << name;
  }
}

TEST(Donaldson, ReportsNonConvergenceWithTrace) {
  IterationOptions opt;
  opt.max_iter = 2;
  try {
    donaldson_iterate(DiagonalHermitian::identity(builtin_polytope("P1"), 2), opt);
    FAIL();
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.trace().steps.size(), 2u);
    EXPECT_FALSE(e.trace().converged);
  }
}

TEST(Ray, WeightsEnterExponentially) {
  auto h = DiagonalHermitian::identity(builtin_polytope("P1"), 1);
  auto r = bergman_ray(h, {-1.0, 0.0, 0.0}, 2.0);
  EXPECT_NEAR(r.entries()[0], std::exp(2.0), 1e-12);
  EXPECT_THROW(bergman_ray(h, {1.0}, 1.0), InvalidInput);
}

TEST(Ray, SlopeOnProjectiveLineKink) {
  auto tc = p1_kink(1);
  auto h = DiagonalHermitian::identity(tc.polytope(), 1);
  auto rep = slope_at_infinity(h, tc, time_grid(0, 40, 5));
  EXPECT_NEAR(rep.invariant_side, 1.0 / 3, 1e-15);
  EXPECT_NEAR(rep.slope, 1.0 / 3 - 1.0 / 40, 1e-6);
  EXPECT_NEAR(rep.gap, 1.0 / 40, 1e-6);
  EXPECT_NEAR(rep.z_rate_limit, 1.0 / 6, 1e-3);
  EXPECT_NEAR(rep.z_invariant, 1.0 / 6, 1e-15);
  EXPECT_EQ(rep.monotonicity_violations, 0);
}

TEST(Ray, BalancingRateSecondLevel) {
  auto tc = p1_kink(2);
  auto z = z_limit(DiagonalHermitian::identity(tc.polytope(), 2), tc, time_grid(30, 40, 10));
  EXPECT_NEAR(z.invariant, 0.4, 1e-15);
  EXPECT_NEAR(z.limit, 0.4, 2e-3);
}

TEST(Ray, ProductConfigurationHasFlatSlope) {
  auto tc = ToricTestConfig(builtin_polytope("P1xP1"), 1, PLConvexFunction::linear(1, 0));
  auto trace = donaldson_iterate(DiagonalHermitian::identity(tc.polytope(), 1));
  auto rep = slope_at_infinity(trace.final_metric, tc, time_grid(0, 10, 5));
  for (const auto& pt : rep.series) EXPECT_NEAR(pt.rates.ding, 0.0, 1e-8);
  EXPECT_TRUE(rep.is_product);
}

TEST(LowerBound, HoldsAtIdentityForKinks) {
  for (const auto& name : builtin_names()) {
    auto p = builtin_polytope(name);
    PLConvexFunction g({AffinePiece{}, AffinePiece{{1, 0}, 0}});
    ToricTestConfig tc(p, 1, g);
    auto lb = lower_bound_check(fs(DiagonalHermitian::identity(p, 1)), tc, 2);
    EXPECT_GE(lb.margin, -1e-6) << name;
  }
}

TEST(Donaldson, GaugeIndependentTraces) {
  auto p = builtin_polytope("P1");
  auto a = donaldson_iterate(DiagonalHermitian::identity(p, 2));
  auto b = donaldson_iterate(DiagonalHermitian::identity(p, 2).scaled(1e3));
  ASSERT_EQ(a.iterations, b.iterations);
  for (std::size_t i = 0; i < a.final_metric.size(); ++i)
    EXPECT_NEAR(a.final_metric.log_entries()[i], b.final_metric.log_entries()[i], 1e-12);
}

TEST(Donaldson, StartingAtBalancedStopsImmediately) {
  auto h = DiagonalHermitian::from_entries(builtin_polytope("P1"), 2,
                                           {1.0 / 5, 1.0 / 20, 1.0 / 30, 1.0 / 20, 1.0 / 5});
  IterationOptions opt;
  opt.tol = 1e-9;
  EXPECT_LE(donaldson_iterate(h, opt).iterations, 2);
}

TEST(Donaldson, BalancedMetricIsCritical) {
  auto trace = donaldson_iterate(DiagonalHermitian::identity(builtin_polytope("P2"), 2));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int i = 0; i < 5; ++i) {
    std::vector<double> w(trace.final_metric.size());
    for (auto& x : w) x = d(rng);
    EXPECT_NEAR(ding_derivative(trace.final_metric, w), 0.0, 1e-6);
  }
}

TEST(Ray, Semigroup) {
  auto h = DiagonalHermitian::identity(builtin_polytope("P2"), 1);
  auto w = generator(ToricTestConfig(h.polytope(), 1, PLConvexFunction({AffinePiece{}, AffinePiece{{1, 1}, 0}})))
               .weights_double();
  auto a = bergman_ray(bergman_ray(h, w, 2.0), w, 2.0), b = bergman_ray(h, w, 4.0);
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_NEAR(a.log_entries()[i], b.log_entries()[i], 1e-15);
  auto line = bergman_ray(DiagonalHermitian::identity(builtin_polytope("P1"), 1),
                          generator(p1_kink(1)).weights_double(), 1.0).entries();
  EXPECT_NEAR(line[0], 1.0, 1e-15);
  EXPECT_NEAR(line[1], 1.0, 1e-15);
  EXPECT_NEAR(line[2], std::exp(1.0), 1e-14);
}

TEST(Ray, TrivialConfigurationIsFlat) {
  ToricTestConfig tc(builtin_polytope("P1"), 2, PLConvexFunction());
  auto rep = slope_at_infinity(DiagonalHermitian::identity(tc.polytope(), 2), tc, time_grid(0, 20, 10));
  for (const auto& pt : rep.series) EXPECT_EQ(pt.rates.ding, 0.0);
}

TEST(Ray, LinearConfigurationHasBoundedBalancingEnergy) {
  ToricTestConfig tc(builtin_polytope("P1"), 1, PLConvexFunction::linear(1));
  auto z = z_limit(DiagonalHermitian::identity(tc.polytope(), 1), tc, time_grid(0, 40, 10));
  EXPECT_NEAR(z.limit, 0.0, 1e-3);
  for (double v : z.values) EXPECT_NEAR(v, z.values.front(), 1e-6);
}

TEST(Ray, GapSignsOnLineCorpus) {
  RayOptions ro;
  ro.with_balancing_values = false;
  for (const auto& e : builtin_corpus()) {
    if (e.config.polytope().dim() != 1) continue;
    Rational fut = quantized_futaki(e.config);
    EXPECT_GE(fut, 0) << e.name;
    EXPECT_EQ(fut == 0, e.config.is_product()) << e.name;
    auto rep = slope_at_infinity(DiagonalHermitian::identity(e.config.polytope(), e.config.k()), e.config,
                                 time_grid(0, 40, 4), ro);
    EXPECT_GE(rep.gap, -1e-4) << e.name;
    if (e.config.is_product()) {
      EXPECT_LE(std::abs(rep.gap), 1e-4) << e.name;
    }
  }
}

TEST(Corpus, FutakiNonnegativeOnProjectivePlane) {
  for (const auto& e : builtin_corpus()) {
    if (e.config.polytope().name() != "P2") continue;
    Rational fut = quantized_futaki(e.config);
    EXPECT_GE(fut, 0) << e.name;
    EXPECT_EQ(fut == 0, e.config.is_product()) << e.name;
  }
}
