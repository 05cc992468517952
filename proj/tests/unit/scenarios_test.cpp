#include "riskpool/scenarios.hpp"

#include <gtest/gtest.h>

#include "riskpool/convolution.hpp"
#include "test_support.hpp"

namespace riskpool {
namespace {

using testing::Rng;
using testing::uniform_index;

Rational q(long num, long den = 1) { return ratio(num, den); }

GroundSet ground(std::size_t n) { return GroundSet::indexed(n); }

TwoInputProduction<Rational> single_supplier(Rational p) {
  return TwoInputProduction<Rational>(CoinVector<Rational>(ground(1), {p}), {q(4)}, {q(9)}, q(1, 2), q(1, 2));
}

MonotoneFamily random_family(Rng& rng, const GroundSet& h) {
  std::vector<Subset> seeds;
  for (std::size_t i = uniform_index(rng, 0, 3); i > 0; --i) seeds.emplace_back(static_cast<Mask>(rng() & h.full_mask()));
  return up_closure(h, seeds);
}

SetFunction<Rational> random_vote(Rng& rng, const GroundSet& h) {
  std::vector<Rational> weights;
  Rational total = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    weights.emplace_back(static_cast<long>(uniform_index(rng, 0, 5)));
    total += weights.back();
  }
  if (total == 0) {
    weights[0] = 1;
    total = 1;
  }
  const Rational quota = total * ratio(static_cast<long>(uniform_index(rng, 1, 8)), 8);
  return weighted_voting<Rational>({h, weights, quota});
}

TEST(ProductionTest, SingleSupplierClosedForm) {
  const auto sc = single_supplier(q(1, 2));
  EXPECT_EQ(production_payoff(sc, Subset::of({0})), q(3));
  EXPECT_EQ(production_payoff(sc, Subset()), q(3, 2));
  const auto table = production_table(sc);
  const auto best = optimal_strategies(table);
  ASSERT_EQ(best.size(), 1U);
  EXPECT_EQ(best[0], Subset::of({0}));
}

TEST(ProductionTest, CertainDeliveryIsConstant) {
  const auto h = ground(3);
  TwoInputProduction<Rational> sc(CoinVector<Rational>::uniform(h, q(1)), {q(1), q(2), q(3)}, {q(3), q(0), q(1)},
                                  q(2), q(1));
  const auto table = production_table(sc);
  EXPECT_EQ(table, SetFunction<Rational>::constant(h, table.at(0)));
  EXPECT_EQ(optimal_strategies(table).size(), 8U);
}

TEST(ProductionTest, EqualsConvolutionOfFactors) {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto h = ground(uniform_index(rng, 1, 4));
    std::vector<Rational> x, y;
    for (std::size_t i = 0; i < h.size(); ++i) {
      x.emplace_back(static_cast<long>(uniform_index(rng, 0, 5)));
      y.emplace_back(static_cast<long>(uniform_index(rng, 0, 5)));
    }
    TwoInputProduction<Rational> sc(testing::random_coins<Rational>(rng, h), x, y,
                                    q(static_cast<long>(uniform_index(rng, 1, 3))), q(1));
    const auto [f1, f2] = production_factors(sc);
    const auto table = production_table(sc);
    EXPECT_EQ(table, convolve(f1, f2, sc.coins()));
    EXPECT_TRUE(is_increasing(table));
  }
}

TEST(ProductionTest, FloatModeWithIrrationalPowers) {
  const auto h = ground(3);
  TwoInputProduction<double> sc(CoinVector<double>(h, {0.2, 0.5, 0.9}), {1.0, 2.5, 0.0}, {0.5, 0.0, 3.0},
                                q(1, 3), q(7, 10));
  EXPECT_TRUE(is_increasing(production_table(sc)));
}

TEST(ProductionTest, Validation) {
  const auto h = ground(1);
  const auto p = CoinVector<Rational>::uniform(h, q(1, 2));
  EXPECT_THROW(TwoInputProduction<Rational>(p, {q(1)}, {q(1)}, q(0), q(1)), Error);
  EXPECT_THROW(TwoInputProduction<Rational>(p, {q(-1)}, {q(1)}, q(1), q(1)), Error);
  EXPECT_THROW(TwoInputProduction<Rational>(p, {q(1), q(2)}, {q(1)}, q(1), q(1)), Error);
  // 2^(1/2) has no exact value.
  TwoInputProduction<Rational> irrational(p, {q(2)}, {q(1)}, q(1, 2), q(1));
  EXPECT_THROW(production_table(irrational), Error);
}

TEST(MilitaryTest, SingleSiteExample) {
  const auto h = ground(1);
  std::vector<Subset> seeds{Subset::of({0})};
  const auto family = up_closure(h, seeds);
  MilitaryScenario<Rational> sc(CoinVector<Rational>(h, {q(1, 2)}), family, family);
  const auto none = military_outcomes(sc, Subset());
  const auto joint = military_outcomes(sc, Subset::of({0}));
  EXPECT_EQ(none.both, q(1, 4));
  EXPECT_EQ(joint.both, q(1, 2));
  EXPECT_EQ(none.neither, q(1, 4));
  EXPECT_EQ(joint.neither, q(1, 2));
  EXPECT_EQ(none.exactly_one, q(1, 2));
  EXPECT_EQ(joint.exactly_one, q(0));
}

TEST(MilitaryTest, DisjointSitesDecouple) {
  const auto h = ground(4);
  std::vector<Subset> red_seeds{Subset::of({0}), Subset::of({1})};
  std::vector<Subset> blue_seeds{Subset::of({2, 3})};
  MilitaryScenario<Rational> sc(CoinVector<Rational>(h, {q(1, 3), q(1, 2), q(3, 4), q(1, 5)}),
                                up_closure(h, red_seeds), up_closure(h, blue_seeds));
  const auto tables = military_tables(sc);
  EXPECT_EQ(tables.both, SetFunction<Rational>::constant(h, tables.both.at(0)));
}

TEST(MilitaryTest, PropertiesAndConvolutionCrossCheck) {
  Rng rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    const auto h = ground(uniform_index(rng, 1, 4));
    MilitaryScenario<Rational> sc(testing::random_coins<Rational>(rng, h), random_family(rng, h),
                                  random_family(rng, h));
    const auto t = military_tables(sc);
    const auto f = indicator<Rational>(sc.red());
    const auto g = indicator<Rational>(sc.blue());
    const auto one = SetFunction<Rational>::constant(h, q(1));
    EXPECT_EQ(t.both, convolve(f, g, sc.coins()));
    EXPECT_EQ(t.neither, convolve(one - f, one - g, sc.coins()));
    EXPECT_TRUE(is_increasing(t.both));
    EXPECT_TRUE(is_increasing(t.neither));
    EXPECT_TRUE(is_decreasing(t.exactly_one));
    EXPECT_EQ(t.both + t.neither + t.exactly_one, one);
  }
}

TEST(MergerTest, NonemptyCoalitionsWin) {
  const auto h = ground(2);
  const auto f = weighted_voting<Rational>({h, {q(1), q(1)}, q(1)});
  MergerScenario<Rational> sc(CoinVector<Rational>::uniform(h, q(1, 2)), f, f);
  EXPECT_EQ(merger_probability(sc, Subset()), q(9, 16));
  EXPECT_EQ(merger_probability(sc, Subset(h.full_mask())), q(3, 4));
}

TEST(MergerTest, Dictator) {
  const auto h = ground(3);
  const auto f = weighted_voting<Rational>({h, {q(5), q(1), q(1)}, q(5)});
  const Rational p0 = ratio(2, 7);
  MergerScenario<Rational> sc(CoinVector<Rational>(h, {p0, q(1, 2), q(1, 3)}), f, f);
  EXPECT_EQ(merger_probability(sc, Subset()), p0 * p0);
  EXPECT_EQ(merger_probability(sc, Subset::of({0})), p0);
}

TEST(MergerTest, PropertiesAndConvolutionCrossCheck) {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const auto h = ground(uniform_index(rng, 1, 4));
    MergerScenario<Rational> sc(testing::random_coins<Rational>(rng, h), random_vote(rng, h), random_vote(rng, h));
    const auto table = merger_table(sc);
    EXPECT_EQ(table, convolve(sc.company_a(), sc.company_b(), sc.coins()));
    EXPECT_TRUE(is_increasing(table));
    const auto best = optimal_strategies(table);
    EXPECT_NE(std::find(best.begin(), best.end(), Subset(h.full_mask())), best.end());
  }
}

TEST(MergerTest, Validation) {
  const auto h = ground(2);
  const auto p = CoinVector<Rational>::uniform(h, q(1, 2));
  const auto ok = weighted_voting<Rational>({h, {q(1), q(1)}, q(1)});
  EXPECT_THROW(MergerScenario<Rational>(p, SetFunction<Rational>(h, {q(0), q(2), q(2), q(2)}), ok), Error);
  EXPECT_THROW(MergerScenario<Rational>(p, SetFunction<Rational>(h, {q(0), q(1), q(0), q(0)}), ok), Error);
  EXPECT_THROW(MergerScenario<Rational>(p, SetFunction<Rational>::constant(h, q(1)), ok), Error);
  EXPECT_THROW(MergerScenario<Rational>(p, SetFunction<Rational>::constant(h, q(0)), ok), Error);
}

TEST(WeightedVotingTest, Examples) {
  const auto h2 = ground(2);
  EXPECT_EQ(weighted_voting<Rational>({h2, {q(1), q(1)}, q(1)}), SetFunction<Rational>(h2, {q(0), q(1), q(1), q(1)}));
  EXPECT_EQ(weighted_voting<Rational>({h2, {q(1), q(1)}, q(2)}), SetFunction<Rational>(h2, {q(0), q(0), q(0), q(1)}));

  const auto h3 = ground(3);
  const auto f = weighted_voting<Rational>({h3, {q(2), q(1), q(1)}, q(3)});
  for (Mask m = 0; m < 8; ++m) {
    const bool wins = m == 0b011 || m == 0b101 || m == 0b111;
    EXPECT_EQ(f.at(m), wins ? 1 : 0) << m;
  }
}

TEST(WeightedVotingTest, Validation) {
  const auto h = ground(2);
  EXPECT_THROW(weighted_voting<Rational>({h, {q(1), q(1)}, q(0)}), Error);
  EXPECT_THROW(weighted_voting<Rational>({h, {q(1), q(1)}, q(3)}), Error);
  EXPECT_THROW(weighted_voting<Rational>({h, {q(-1), q(3)}, q(1)}), Error);
  EXPECT_THROW(weighted_voting<Rational>({h, {q(1)}, q(1)}), Error);
}

TEST(OptimalStrategiesTest, Examples) {
  const auto h = ground(2);
  EXPECT_EQ(optimal_strategies(SetFunction<Rational>::constant(h, q(2))).size(), 4U);
  const auto best = optimal_strategies(SetFunction<Rational>(h, {q(0), q(1), q(2), q(3)}));
  ASSERT_EQ(best.size(), 1U);
  EXPECT_EQ(best[0], Subset(h.full_mask()));
  EXPECT_EQ(optimal_strategies(SetFunction<double>(h, {0.0, 1.0, 3.0 - 1e-12, 3.0})).size(), 2U);
}

TEST(ScenarioCapTest, RejectsLargeGround) {
  const auto h = ground(11);
  const auto p = CoinVector<double>::uniform(h, 0.5);
  std::vector<double> amounts(11, 1.0);
  EXPECT_THROW(TwoInputProduction<double>(p, amounts, amounts, q(1), q(1)), Error);
}

}  // namespace
}  // namespace riskpool
