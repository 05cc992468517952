#pragma once

// Generators and brute-force oracles shared by the unit and acceptance suites.
// The oracles here enumerate coin outcomes directly and never call into the
// convolution or game code they are used to check.

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "riskpool/boolean_lattice.hpp"
#include "riskpool/partition_game.hpp"

namespace riskpool::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// p in {0, 1/8, ..., 1} for exact runs (endpoints included on purpose).
inline Rational random_probability_exact(Rng& rng) {
  return ratio(static_cast<long>(uniform_index(rng, 0, 8)), 8);
}

inline double random_probability_float(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

template <Scalar T>
T random_probability(Rng& rng) {
  if constexpr (std::is_same_v<T, double>) {
    return random_probability_float(rng);
  } else {
    return random_probability_exact(rng);
  }
}

template <Scalar T>
CoinVector<T> random_coins(Rng& rng, const GroundSet& ground) {
  std::vector<T> p;
  for (std::size_t i = 0; i < ground.size(); ++i) p.push_back(random_probability<T>(rng));
  return CoinVector<T>(ground, std::move(p));
}

/// Arbitrary (not necessarily monotone) function with small rational or real values.
template <Scalar T>
SetFunction<T> random_function(Rng& rng, const GroundSet& ground) {
  return SetFunction<T>::tabulate(ground, [&](Subset) {
    if constexpr (std::is_same_v<T, double>) {
      return std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
    } else {
      return ratio(static_cast<long>(uniform_index(rng, 0, 40)) - 20, static_cast<long>(uniform_index(rng, 1, 6)));
    }
  });
}

/// Expectation of f(S1) g(S2) by enumerating every coin toss of the
/// shared/independent procedure for `shared`: 2 outcomes per shared element,
/// 4 per other element.
template <Scalar T>
T coin_outcome_oracle(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p, Subset shared) {
  const std::size_t n = p.ground().size();
  T total = 0;
  std::uint64_t outcomes = 1;
  for (std::size_t h = 0; h < n; ++h) outcomes *= shared.contains(h) ? 2 : 4;
  for (std::uint64_t code = 0; code < outcomes; ++code) {
    std::uint64_t rest = code;
    Mask first = 0, second = 0;
    T probability = 1;
    for (std::size_t h = 0; h < n; ++h) {
      const T hit = p[h];
      const T miss = 1 - p[h];
      if (shared.contains(h)) {
        const bool heads = rest % 2;
        rest /= 2;
        probability *= heads ? hit : miss;
        if (heads) {
          first |= Mask{1} << h;
          second |= Mask{1} << h;
        }
      } else {
        const bool heads1 = rest % 2;
        const bool heads2 = (rest / 2) % 2;
        rest /= 4;
        probability *= heads1 ? hit : miss;
        probability *= heads2 ? hit : miss;
        if (heads1) first |= Mask{1} << h;
        if (heads2) second |= Mask{1} << h;
      }
    }
    total += probability * f.at(first) * g.at(second);
  }
  return total;
}

/// Increasing function; adding 1 + |S| makes it strictly increasing when `strict`.
template <Scalar T>
SetFunction<T> random_payoff(Rng& rng, const GroundSet& ground, bool strict) {
  auto f = random_increasing<T>(rng(), ground, uniform_index(rng, 0, 2 * ground.size() + 2));
  if (!strict) return f;
  std::vector<T> bump(ground.subset_count(), T(0));
  for (Mask m = 0; m < ground.subset_count(); ++m) {
    bump[m] = T(1) + T(static_cast<long>(std::popcount(m)));
  }
  return f + SetFunction<T>(ground, std::move(bump));
}

struct GameShape {
  std::size_t commodities;
  std::size_t suppliers;
};

/// Random game over the given K^h: p_h in {1/4, 1/2, 3/4}, increasing payoffs.
template <Scalar T>
GameSpec<T> random_game_with_supply(Rng& rng, std::size_t commodity_count, std::vector<CommodityMask> supply,
                                    bool strict, bool symmetric = false) {
  std::vector<std::string> k_labels, h_labels;
  for (std::size_t k = 0; k < commodity_count; ++k) k_labels.push_back("k" + std::to_string(k));
  for (std::size_t h = 0; h < supply.size(); ++h) h_labels.push_back("h" + std::to_string(h));
  GroundSet commodities(k_labels), suppliers(h_labels);
  std::vector<T> p;
  for (std::size_t h = 0; h < supply.size(); ++h) {
    p.push_back(NumTraits<T>::from_rational(ratio(static_cast<long>(uniform_index(rng, 1, 3)), 4)));
  }
  CoinVector<T> coins(suppliers, std::move(p));
  if (symmetric) {
    std::vector<SetFunction<T>> common;
    for (std::size_t k = 0; k < commodity_count; ++k) common.push_back(random_payoff<T>(rng, suppliers, strict));
    return GameSpec<T>::symmetric(commodities, coins, std::move(supply), std::move(common));
  }
  std::vector<std::vector<SetFunction<T>>> payoffs(supply.size());
  for (std::size_t h = 0; h < supply.size(); ++h) {
    for (std::size_t k = 0; k < commodity_count; ++k) payoffs[h].push_back(random_payoff<T>(rng, suppliers, strict));
  }
  return GameSpec<T>(commodities, coins, std::move(supply), std::move(payoffs));
}

/// Random game with each K^h drawn uniformly from the subsets of K.
template <Scalar T>
GameSpec<T> random_game(Rng& rng, GameShape shape, bool strict, bool symmetric = false) {
  std::vector<CommodityMask> supply;
  for (std::size_t h = 0; h < shape.suppliers; ++h) {
    supply.push_back(static_cast<CommodityMask>(uniform_index(rng, 0, (std::size_t{1} << shape.commodities) - 1)));
  }
  return random_game_with_supply<T>(rng, shape.commodities, std::move(supply), strict, symmetric);
}

/// Random profile: a uniformly chosen partition of each K^h.
template <Scalar T>
StrategyProfile random_profile(Rng& rng, const GameSpec<T>& spec) {
  StrategyProfile profile;
  for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
    auto options = enumerate_partitions(h, spec.supply(h));
    profile.push_back(options[uniform_index(rng, 0, options.size() - 1)]);
  }
  return profile;
}

/// Phi^h by enumerating block arrivals in the oracle's own loop.
template <Scalar T>
T payoff_oracle(const GameSpec<T>& spec, const StrategyProfile& profile, std::size_t h) {
  std::vector<std::pair<std::size_t, CommodityMask>> blocks;
  for (std::size_t g = 0; g < profile.size(); ++g) {
    for (CommodityMask b : profile[g].blocks()) blocks.emplace_back(g, b);
  }
  T total = 0;
  for (std::uint64_t atom = 0; atom < (std::uint64_t{1} << blocks.size()); ++atom) {
    T probability = 1;
    std::vector<Mask> tuple(spec.commodity_count(), 0);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& [owner, commodities] = blocks[b];
      const bool arrived = (atom >> b) & 1U;
      probability *= arrived ? spec.coins()[owner] : T(1 - spec.coins()[owner]);
      if (!arrived) continue;
      for (std::size_t k = 0; k < spec.commodity_count(); ++k) {
        if ((commodities >> k) & 1U) tuple[k] |= Mask{1} << owner;
      }
    }
    T value = spec.scale(h);
    for (std::size_t k = 0; k < spec.commodity_count(); ++k) value *= spec.payoff(h, k).at(tuple[k]);
    total += probability * value;
  }
  return total;
}

}  // namespace riskpool::testing
