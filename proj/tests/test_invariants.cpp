#include <gtest/gtest.h>

#include "fano_balance/invariants.hpp"

using namespace fano;

namespace {

PLConvexFunction kink(Rational a = 1, Rational b = 0) {
  return PLConvexFunction({AffinePiece{}, AffinePiece{{a, b}, 0}});
}

ToricTestConfig p1_kink(std::int64_t k) { return ToricTestConfig(builtin_polytope("P1"), k, kink()); }

}  // namespace

TEST(Invariants, ExpansionKink) {
  auto e = expansion(p1_kink(1));
  EXPECT_EQ(e.a, (std::vector<Rational>{2, 1}));
  EXPECT_EQ(e.b, (std::vector<Rational>{make_rational(-1, 2), make_rational(-1, 2), 0}));
}

TEST(Invariants, ExpansionLinearAndTrivial) {
  auto e = expansion(ToricTestConfig(builtin_polytope("P1"), 1, PLConvexFunction::linear(1)));
  EXPECT_EQ(e.a, (std::vector<Rational>{2, 1}));
  EXPECT_EQ(e.b, (std::vector<Rational>{0, 0, 0}));
  auto f = expansion(ToricTestConfig(builtin_polytope("P2"), 1, PLConvexFunction()));
  EXPECT_EQ(f.a, (std::vector<Rational>{make_rational(9, 2), make_rational(9, 2), 1}));
  for (const auto& b : f.b) EXPECT_EQ(b, 0);
}

TEST(Invariants, DonaldsonFutakiKink) {
  EXPECT_EQ(donaldson_futaki(p1_kink(1)), make_rational(1, 4));
  EXPECT_EQ(donaldson_futaki(p1_kink(2)), make_rational(1, 4));
  for (std::int64_t k = 1; k <= 3; ++k)
    EXPECT_EQ(donaldson_futaki(ToricTestConfig(builtin_polytope("P1"), k, PLConvexFunction::linear(-1))), 0);
}

TEST(Invariants, ChowWeight) {
  EXPECT_EQ(chow_weight(p1_kink(1)), make_rational(1, 12));
  EXPECT_EQ(chow_weight(p1_kink(2)), make_rational(1, 20));
  for (const auto& name : builtin_names())
    EXPECT_EQ(chow_weight(ToricTestConfig(builtin_polytope(name), 1, PLConvexFunction())), 0);
}

TEST(Invariants, QuantizedFutaki) {
  EXPECT_EQ(quantized_futaki(p1_kink(1)), 1);
  EXPECT_EQ(quantized_futaki(p1_kink(3)), 6);
  EXPECT_EQ(quantized_futaki(ToricTestConfig(builtin_polytope("P1"), 1, PLConvexFunction::linear(1))), 0);
}

TEST(Invariants, ChowDFSequence) {
  auto seq = chow_df_limit(p1_kink(1), 10);
  ASSERT_EQ(seq.size(), 10u);
  for (std::int64_t m = 1; m <= 10; ++m) EXPECT_EQ(seq[m - 1], make_rational(m, 4 * (2 * m + 1)));
  EXPECT_EQ(seq.back(), make_rational(5, 42));
  auto lin = chow_df_limit(ToricTestConfig(builtin_polytope("P1"), 1, PLConvexFunction::linear(1)), 5);
  for (const auto& v : lin) EXPECT_EQ(v, 0);
  EXPECT_THROW(chow_df_limit(p1_kink(1), 1), InvalidInput);
}

TEST(Invariants, PNorm) {
  auto n = pnorm(p1_kink(1), 2);
  EXPECT_EQ(n.leading, make_rational(5, 24));
  EXPECT_NEAR(n.value, std::sqrt(5.0 / 24.0), 1e-15);
  auto lin = pnorm(ToricTestConfig(builtin_polytope("P1"), 1, PLConvexFunction::linear(1)), 2);
  EXPECT_EQ(lin.leading, make_rational(2, 3));
  EXPECT_THROW(pnorm(ToricTestConfig(builtin_polytope("P1"), 1, PLConvexFunction()), 2), DegenerateNorm);
  EXPECT_THROW(pnorm(p1_kink(1), 3), InvalidInput);
}

TEST(Invariants, PNormMatchesFiniteLevelAsymptotics) {
  // tr(Abar_km^p)/(km)^(n+p) tends to the leading coefficient.
  for (int p : {2, 4}) {
    ToricTestConfig tc(builtin_polytope("P2"), 1, kink(1, 1));
    Rational lead = pnorm(tc, p).leading;
    double prev_err = 1e300;
    for (std::int64_t m : {4, 8, 16}) {
      double ratio = to_double(trace_free_power_trace(tc, m, p)) / std::pow(double(m), 2 + p);
      double err = std::abs(ratio - to_double(lead));
      EXPECT_LT(err, prev_err);
      prev_err = err;
    }
    EXPECT_LT(prev_err / to_double(lead), 0.2);
  }
}

TEST(Invariants, HigherFutaki) {
  auto p1 = higher_futaki(ToricTestConfig(builtin_polytope("P1"), 1, PLConvexFunction::linear(1)));
  EXPECT_EQ(p1, (std::vector<Rational>{0}));
  auto sq = higher_futaki(ToricTestConfig(builtin_polytope("P1xP1"), 1, PLConvexFunction::linear(1, 0)));
  EXPECT_EQ(sq, (std::vector<Rational>{0, 0}));
  ToricTestConfig f1(builtin_polytope("F1"), 1, PLConvexFunction::linear(1, 1));
  auto e = expansion(f1);
  Rational df = donaldson_futaki(e);
  auto hf = higher_futaki(f1);
  ASSERT_EQ(hf.size(), 2u);
  EXPECT_NE(df, 0);
  EXPECT_EQ(hf[0], -2 * e.a[0] * df / 2);
  EXPECT_THROW(higher_futaki(p1_kink(1)), NotProduct);
}

TEST(Invariants, ProductHasVanishingLastWeightCoefficient) {
  for (const auto& name : builtin_names()) {
    auto p = builtin_polytope(name);
    for (std::int64_t k = 1; k <= 2; ++k) {
      ToricTestConfig tc(p, k, PLConvexFunction::linear(1, p.dim() == 2 ? -1 : 0));
      EXPECT_EQ(expansion(tc).b.back(), 0) << name;
    }
  }
}

TEST(Invariants, LinearizationInvariance) {
  for (const auto& name : builtin_names()) {
    auto p = builtin_polytope(name);
    ToricTestConfig tc(p, 2, kink(1, p.dim() == 2 ? 1 : 0));
    Rational df = donaldson_futaki(tc);
    Rational chow = chow_weight(tc);
    for (const Rational& c : {make_rational(1), make_rational(-7, 3), make_rational(5, 2)}) {
      EXPECT_EQ(donaldson_futaki(tc.with_shift(c)), df) << name;
      EXPECT_EQ(chow_weight(tc.with_shift(c)), chow) << name;
    }
  }
}

TEST(Invariants, ScaleCovariance) {
  auto tc = ToricTestConfig(builtin_polytope("P2"), 2, kink(1, 0));
  auto r = invariant_report(tc, 2, 2);
  for (const Rational& d : {make_rational(3), make_rational(2, 5)}) {
    auto s = invariant_report(scale_config(tc, d), 2, 2);
    EXPECT_EQ(s.df, d * r.df);
    EXPECT_EQ(s.chow, d * r.chow);
    EXPECT_EQ(s.fut, d * r.fut);
    EXPECT_NEAR(s.pnorm->value, to_double(d) * r.pnorm->value, 1e-12);
  }
}

TEST(Invariants, FutakiCharacterOfLinearFunctions) {
  // Adding a linear function to g adds the Futaki character <l, barycenter>
  // term, which vanishes on the symmetric builtins but not on F1.
  for (const auto& name : builtin_names()) {
    auto p = builtin_polytope(name);
    ToricTestConfig base(p, 1, kink(1, p.dim() == 2 ? 1 : 0));
    AffinePiece lin{{1, p.dim() == 2 ? 1 : 0}, 0};
    ToricTestConfig lin_only(p, 1, PLConvexFunction({lin}));
    Rational ddf = donaldson_futaki(add_affine(base, lin)) - donaldson_futaki(base);
    EXPECT_EQ(ddf, donaldson_futaki(lin_only)) << name;
    if (name == "F1") EXPECT_NE(ddf, 0);
    else EXPECT_EQ(ddf, 0);
  }
}
