#pragma once

#include <cstdint>
#include <random>

#include "riskpool/boolean_lattice.hpp"
#include "riskpool/partition_game.hpp"

namespace riskpool {

// Sampling uses std::mt19937_64, whose output sequence is fixed by the C++ standard.
// A run of N samples with seed s is split into chunks of kSampleChunk draws; chunk c
// uses its own engine seeded with substream_seed(s, c). Chunk statistics are merged
// in chunk order, so a report depends only on (seed, N), never on how many workers
// processed the chunks.
using Engine = std::mt19937_64;

inline constexpr std::uint64_t kSampleChunk = 4096;

/// SplitMix64 finalizer applied to seed + (index + 1) * golden gamma.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// True with probability p: the top 53 bits of one draw as a uniform in [0, 1), compared with p.
bool bernoulli(Engine& engine, double p);

struct EstimateReport {
  double mean = 0;
  double std_error = 0;  ///< sample standard deviation (unbiased) / sqrt(samples)
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  bool operator==(const EstimateReport&) const = default;
};

/// One draw of every shipment: an independent Bernoulli(p_h) per (supplier, block).
template <Scalar T>
SuccessTuple sample_success(const GameSpec<T>& spec, const StrategyProfile& profile, Engine& engine);

/// Mean and standard error of scale_h * prod_k F_k^h(S_k) over `samples` draws (>= 2).
template <Scalar T>
EstimateReport estimate_payoff(const GameSpec<T>& spec, const StrategyProfile& profile, std::size_t h,
                               std::uint64_t samples, std::uint64_t seed);

/// Mean and standard error of f(S1) g(S2) with (S1, S2) drawn from the coupled pair measure for `shared`.
template <Scalar T>
EstimateReport estimate_convolution(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p,
                                    Subset shared, std::uint64_t samples, std::uint64_t seed);

}  // namespace riskpool
