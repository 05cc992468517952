#include "riskpool/montecarlo.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "riskpool/convolution.hpp"
#include "test_support.hpp"

namespace riskpool {
namespace {

using testing::Rng;

GroundSet labels(std::initializer_list<const char*> names) {
  return GroundSet(std::vector<std::string>(names.begin(), names.end()));
}

GameSpec<double> two_commodity_game(double p) {
  const auto h = labels({"h"});
  const SetFunction<double> arrived(h, {0.0, 1.0});
  return GameSpec<double>::symmetric(labels({"x", "y"}), CoinVector<double>(h, {p}), {0b11}, {arrived, arrived});
}

TEST(SubstreamSeedTest, DistinctAcrossChunks) {
  EXPECT_NE(substream_seed(1, 0), substream_seed(1, 1));
  EXPECT_NE(substream_seed(1, 0), substream_seed(2, 0));
  EXPECT_EQ(substream_seed(7, 3), substream_seed(7, 3));
}

TEST(BernoulliTest, Endpoints) {
  Engine engine(5);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_FALSE(bernoulli(engine, 0.0));
    EXPECT_TRUE(bernoulli(engine, 1.0));
  }
}

TEST(SampleSuccessTest, CertainAndImpossible) {
  Rng rng(50);
  auto spec = testing::random_game<double>(rng, {3, 3}, false);
  const auto profile = testing::random_profile(rng, spec);
  Engine engine(1);
  const GameSpec<double> sure(spec.commodities(), CoinVector<double>::uniform(spec.suppliers(), 1.0),
                              {spec.supply(0), spec.supply(1), spec.supply(2)},
                              {{spec.payoff(0, 0), spec.payoff(0, 1), spec.payoff(0, 2)},
                               {spec.payoff(1, 0), spec.payoff(1, 1), spec.payoff(1, 2)},
                               {spec.payoff(2, 0), spec.payoff(2, 1), spec.payoff(2, 2)}});
  const auto tuple = sample_success(sure, profile, engine);
  for (std::size_t k = 0; k < 3; ++k) {
    Mask expected = 0;
    for (std::size_t h = 0; h < 3; ++h) {
      if ((spec.supply(h) >> k) & 1U) expected |= Mask{1} << h;
    }
    EXPECT_EQ(tuple[k], expected);
  }
  const auto never = scaled_spec(two_commodity_game(0.0), {1.0});
  EXPECT_EQ(sample_success(never, never.coarse_profile(), engine), (SuccessTuple{0, 0}));
}

TEST(SampleSuccessTest, ReplaysFromEngineState) {
  const auto spec = two_commodity_game(0.5);
  const StrategyProfile fine{PartitionStrategy(0, {0b01, 0b10})};
  Engine a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_success(spec, fine, a), sample_success(spec, fine, b));
}

TEST(EstimatePayoffTest, ConstantPayoff) {
  const auto h = labels({"h"});
  const auto one = SetFunction<double>::constant(h, 1.0);
  const auto spec = GameSpec<double>::symmetric(labels({"x"}), CoinVector<double>(h, {0.3}), {0b1}, {one});
  const auto report = estimate_payoff(spec, spec.coarse_profile(), 0, 1000, 3);
  EXPECT_EQ(report.mean, 1.0);
  EXPECT_EQ(report.std_error, 0.0);
  EXPECT_EQ(report.samples, 1000U);
  EXPECT_EQ(report.seed, 3U);
}

TEST(EstimatePayoffTest, SingleSupplierWithinFourStandardErrors) {
  const auto spec = two_commodity_game(0.5);
  const auto report = estimate_payoff(spec, spec.coarse_profile(), 0, 100000, 2024);
  EXPECT_LE(std::abs(report.mean - 0.5), 4 * report.std_error);
  // Bernoulli(1/2) has standard deviation 1/2.
  EXPECT_NEAR(report.std_error, 0.5 / std::sqrt(100000.0), 1e-4);
}

TEST(EstimatePayoffTest, ScalesExactlyWithKappa) {
  Rng rng(51);
  const auto spec = testing::random_game<double>(rng, {3, 2}, false);
  const auto profile = testing::random_profile(rng, spec);
  const auto scaled = scaled_spec(spec, {4.0, 0.25});
  for (std::size_t h = 0; h < 2; ++h) {
    const double kappa = h == 0 ? 4.0 : 0.25;
    const auto base = estimate_payoff(spec, profile, h, 5000, 17);
    const auto times = estimate_payoff(scaled, profile, h, 5000, 17);
    EXPECT_EQ(times.mean, kappa * base.mean);
    EXPECT_EQ(times.std_error, kappa * base.std_error);
  }
}

TEST(EstimatePayoffTest, ReproducibleAndSeedSensitive) {
  Rng rng(52);
  const auto spec = testing::random_game<double>(rng, {3, 3}, true);
  const auto profile = testing::random_profile(rng, spec);
  const auto a = estimate_payoff(spec, profile, 1, 20000, 8);
  const auto b = estimate_payoff(spec, profile, 1, 20000, 8);
  EXPECT_EQ(a, b);
  const auto c = estimate_payoff(spec, profile, 1, 20000, 9);
  EXPECT_NE(a.mean, c.mean);
}

TEST(EstimatePayoffTest, RejectsTooFewSamples) {
  const auto spec = two_commodity_game(0.5);
  EXPECT_THROW(estimate_payoff(spec, spec.coarse_profile(), 0, 1, 0), Error);
  EXPECT_THROW(estimate_payoff(spec, spec.coarse_profile(), 3, 100, 0), Error);
}

TEST(EstimatePayoffTest, ExactSpecSamplesInDoubles) {
  Rng rng(53);
  const auto spec = testing::random_game<Rational>(rng, {2, 2}, false);
  const auto profile = testing::random_profile(rng, spec);
  const auto report = estimate_payoff(spec, profile, 0, 100000, 5);
  const double exact = expected_payoff(spec, profile, 0).get_d();
  EXPECT_LE(std::abs(report.mean - exact), 4 * report.std_error + 1e-12);
}

TEST(EstimateConvolutionTest, Examples) {
  const auto g1 = GroundSet::indexed(1);
  const auto one = SetFunction<double>::constant(g1, 1.0);
  const CoinVector<double> half(g1, {0.5});
  const auto flat = estimate_convolution(one, one, half, Subset(), 100, 1);
  EXPECT_EQ(flat.mean, 1.0);
  EXPECT_EQ(flat.std_error, 0.0);

  const SetFunction<double> f(g1, {1.0, 2.0});
  const SetFunction<double> g(g1, {1.0, 3.0});
  const auto coupled = estimate_convolution(f, g, half, Subset::of({0}), 100000, 11);
  EXPECT_LE(std::abs(coupled.mean - 3.5), 4 * coupled.std_error);
}

TEST(EstimateConvolutionTest, EmptySharedSetEstimatesProductOfExpectations) {
  const auto h = GroundSet::indexed(5);
  const auto f = random_increasing<double>(3, h, 6);
  const auto g = random_increasing<double>(4, h, 6);
  const auto p = CoinVector<double>(h, {0.1, 0.4, 0.5, 0.7, 0.9});
  const auto report = estimate_convolution(f, g, p, Subset(), 100000, 21);
  EXPECT_LE(std::abs(report.mean - expectation(f, p) * expectation(g, p)), 4 * report.std_error + 1e-12);
}

TEST(EstimateConvolutionTest, ValidatesFastConvolveBeyondBruteForce) {
  const auto h = GroundSet::indexed(14);
  const auto f = random_increasing<double>(5, h, 12);
  const auto g = random_increasing<double>(6, h, 12);
  const auto p = CoinVector<double>::uniform(h, 0.35);
  const auto table = convolve(f, g, p);
  const Subset shared(0b10'1100'1010'0110);
  const auto report = estimate_convolution(f, g, p, shared, 100000, 31);
  EXPECT_LE(std::abs(report.mean - table(shared)), 4 * report.std_error + 1e-12);
}

}  // namespace
}  // namespace riskpool
