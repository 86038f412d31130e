#include <gtest/gtest.h>

#include "fano_balance/testconfig.hpp"

using namespace fano;

namespace {

PLConvexFunction kink(Rational a = 1, Rational b = 0) {
  return PLConvexFunction({AffinePiece{}, AffinePiece{{a, b}, 0}});
}

std::vector<Rational> as_rationals(std::initializer_list<long long> v) {
  std::vector<Rational> out;
  for (auto x : v) out.push_back(x);
  return out;
}

}  // namespace

TEST(TestConfig, KinkWeightsLevelOne) {
  ToricTestConfig tc(builtin_polytope("P1"), 1, kink());
  EXPECT_EQ(weights_at_level(tc, 1).weights, as_rationals({0, 0, -1}));
  EXPECT_EQ(weights_at_level(tc, 2).weights, as_rationals({0, 0, 0, -1, -2}));
}

TEST(TestConfig, LinearWeights) {
  ToricTestConfig tc(builtin_polytope("P1"), 1, PLConvexFunction::linear(1));
  EXPECT_EQ(weights_at_level(tc, 1).weights, as_rationals({1, 0, -1}));
  for (std::int64_t m = 1; m <= 5; ++m) EXPECT_EQ(total_weight(tc, m), 0);
}

TEST(TestConfig, TotalWeights) {
  ToricTestConfig tc(builtin_polytope("P1"), 1, kink());
  EXPECT_EQ(total_weight(tc, 3), -6);
  for (std::int64_t m = 1; m <= 8; ++m) EXPECT_EQ(total_weight(tc, m), Rational(-m * (m + 1) / 2));
  ToricTestConfig tc2(builtin_polytope("P1"), 2, kink());
  EXPECT_EQ(total_weight(tc2, 1), -3);
}

TEST(TestConfig, GeneratorTraceFree) {
  ToricTestConfig tc(builtin_polytope("P1"), 1, kink());
  Generator a = generator(tc);
  EXPECT_EQ(a.weights, as_rationals({0, 0, -1}));
  EXPECT_EQ(a.trace, -1);
  std::vector<Rational> expected{make_rational(1, 3), make_rational(1, 3), make_rational(-2, 3)};
  EXPECT_EQ(a.trace_free, expected);

  ToricTestConfig zero(builtin_polytope("P1"), 1, PLConvexFunction());
  Generator z = generator(zero);
  for (const auto& w : z.weights) EXPECT_EQ(w, 0);
  EXPECT_TRUE(zero.is_trivial());
}

TEST(TestConfig, F1DiagonalGenerator) {
  ToricTestConfig tc(builtin_polytope("F1"), 1, PLConvexFunction::linear(1, 1));
  Generator a = generator(tc);
  ASSERT_EQ(a.weights.size(), 9u);
  for (std::size_t i = 0; i < a.basis.size(); ++i)
    EXPECT_EQ(a.weights[i], Rational(-(a.basis[i][0] + a.basis[i][1])));
  EXPECT_EQ(a.trace, -2);
  Rational s = 0;
  for (const auto& w : a.trace_free) s += w;
  EXPECT_EQ(s, 0);
}

TEST(TestConfig, ShiftLinearization) {
  ToricTestConfig zero(builtin_polytope("P1"), 1, PLConvexFunction());
  WeightSystem ws = shift_linearization(weights_at_level(zero, 2), 1);
  for (const auto& w : ws.weights) EXPECT_EQ(w, 2);
  auto shifted = zero.with_shift(1);
  EXPECT_EQ(weights_at_level(shifted, 2).weights, ws.weights);
}

TEST(TestConfig, ProductAndTrivialFlags) {
  auto p1 = builtin_polytope("P1");
  EXPECT_TRUE(ToricTestConfig(p1, 1, PLConvexFunction::linear(1)).is_product());
  EXPECT_FALSE(ToricTestConfig(p1, 1, PLConvexFunction::linear(1)).is_trivial());
  EXPECT_FALSE(ToricTestConfig(p1, 1, kink()).is_product());
  EXPECT_TRUE(ToricTestConfig(p1, 1, PLConvexFunction::linear(0, 0, 5)).is_trivial());
}

TEST(TestConfig, RedundantPiecesRejected) {
  auto p1 = builtin_polytope("P1");
  // max(0, y, y - 5): the last piece is never maximal on [-1, 1].
  PLConvexFunction g({AffinePiece{}, AffinePiece{{1, 0}, 0}, AffinePiece{{1, 0}, -5}});
  EXPECT_THROW(ToricTestConfig(p1, 1, g), InvalidInput);
  // max(0, y + 3) is the single piece y + 3 on P.
  PLConvexFunction h({AffinePiece{}, AffinePiece{{1, 0}, 3}});
  EXPECT_THROW(ToricTestConfig(p1, 1, h), InvalidInput);
  PLConvexFunction dup({AffinePiece{}, AffinePiece{}});
  EXPECT_THROW(ToricTestConfig(p1, 1, dup), InvalidInput);
  // max(0, y1 + y2 - 1) is zero on P2 away from the edge y1 + y2 = 1.
  PLConvexFunction corner({AffinePiece{}, AffinePiece{{1, 1}, -1}});
  EXPECT_THROW(ToricTestConfig(builtin_polytope("P2"), 1, corner), InvalidInput);
  EXPECT_NO_THROW(ToricTestConfig(builtin_polytope("P2"), 1, kink(1, 1)));
}

TEST(TestConfig, HomogeneityOfSampling) {
  // Level-m weights at m*beta are m times the level-one weights at beta.
  for (const auto& name : builtin_names()) {
    ToricTestConfig tc(builtin_polytope(name), 2, kink(1, name == "P1" ? 0 : 1));
    WeightSystem one = weights_at_level(tc, 1);
    WeightSystem three = weights_at_level(tc, 3);
    for (std::size_t i = 0; i < one.basis.size(); ++i) {
      LatticePoint scaled{3 * one.basis[i][0], 3 * one.basis[i][1]};
      auto it = std::find(three.basis.begin(), three.basis.end(), scaled);
      ASSERT_NE(it, three.basis.end());
      EXPECT_EQ(three.weights[it - three.basis.begin()], 3 * one.weights[i]) << name;
    }
  }
}

TEST(TestConfig, ClearDenominators) {
  ToricTestConfig tc(builtin_polytope("P1"), 2, kink(make_rational(1, 3)));
  // Level-one weights: -max(0, beta/3) for beta in {-2..2}.
  EXPECT_EQ(tc.weight_denominator(), 3);
  auto cleared = clear_denominators(tc);
  EXPECT_EQ(cleared.scale, 3);
  for (const auto& w : weights_at_level(cleared.config, 1).weights)
    EXPECT_EQ(denominator_of(w), 1);
}
