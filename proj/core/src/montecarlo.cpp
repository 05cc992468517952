#include "riskpool/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace riskpool {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool bernoulli(Engine& engine, double p) {
  const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return u < p;
}

namespace {

struct ChunkStats {
  std::uint64_t count = 0;
  double mean = 0;
  double m2 = 0;  // sum of squared deviations from the mean
};

template <class Draw>
ChunkStats run_chunk(std::uint64_t seed, std::uint64_t chunk, std::uint64_t count, const Draw& draw) {
  Engine engine(substream_seed(seed, chunk));
  ChunkStats s;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double x = draw(engine);
    ++s.count;
    const double delta = x - s.mean;
    s.mean += delta / static_cast<double>(s.count);
    s.m2 += delta * (x - s.mean);
  }
  return s;
}

// Draws `samples` values split into fixed chunks and merges the chunk moments in order.
template <class Draw>
EstimateReport estimate(std::uint64_t samples, std::uint64_t seed, const Draw& draw) {
  if (samples < 2) throw Error("Monte Carlo estimates need at least 2 samples");
  const std::uint64_t chunks = (samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<ChunkStats> stats(chunks);
  auto work = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t c = first; c < chunks; c += stride) {
      const std::uint64_t count = std::min(kSampleChunk, samples - c * kSampleChunk);
      stats[c] = run_chunk(seed, c, count, draw);
    }
  };
  const std::uint64_t workers =
      std::min<std::uint64_t>(chunks, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }

  ChunkStats total;
  for (const auto& s : stats) {
    if (total.count == 0) {
      total = s;
      continue;
    }
    const double n_a = static_cast<double>(total.count);
    const double n_b = static_cast<double>(s.count);
    const double n = n_a + n_b;
    const double delta = s.mean - total.mean;
    total.mean += delta * n_b / n;
    total.m2 += s.m2 + delta * delta * n_a * n_b / n;
    total.count += s.count;
  }
  const double variance = total.m2 / static_cast<double>(total.count - 1);
  EstimateReport report;
  report.mean = total.mean;
  report.std_error = std::sqrt(std::max(0.0, variance) / static_cast<double>(total.count));
  report.samples = samples;
  report.seed = seed;
  return report;
}

struct SampledBlock {
  std::size_t owner;
  CommodityMask commodities;
  double p;
};

template <Scalar T>
std::vector<SampledBlock> sampled_blocks(const GameSpec<T>& spec, const StrategyProfile& profile) {
  spec.validate(profile);
  std::vector<SampledBlock> blocks;
  for (std::size_t h = 0; h < profile.size(); ++h) {
    const double p = NumTraits<T>::to_double(spec.coins()[h]);
    for (CommodityMask b : profile[h].blocks()) blocks.push_back({h, b, p});
  }
  return blocks;
}

void draw_tuple(const std::vector<SampledBlock>& blocks, Engine& engine, SuccessTuple& tuple) {
  std::fill(tuple.begin(), tuple.end(), Mask{0});
  for (const auto& b : blocks) {
    if (!bernoulli(engine, b.p)) continue;
    for (std::size_t k = 0; k < tuple.size(); ++k) {
      if ((b.commodities >> k) & 1U) tuple[k] |= Mask{1} << b.owner;
    }
  }
}

template <Scalar T>
std::vector<double> to_doubles(std::span<const T> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const T& v : values) out.push_back(NumTraits<T>::to_double(v));
  return out;
}

}  // namespace

template <Scalar T>
SuccessTuple sample_success(const GameSpec<T>& spec, const StrategyProfile& profile, Engine& engine) {
  SuccessTuple tuple(spec.commodity_count());
  draw_tuple(sampled_blocks(spec, profile), engine, tuple);
  return tuple;
}

template <Scalar T>
EstimateReport estimate_payoff(const GameSpec<T>& spec, const StrategyProfile& profile, std::size_t h,
                               std::uint64_t samples, std::uint64_t seed) {
  if (h >= spec.supplier_count()) throw Error("estimate_payoff: unknown supplier index");
  const auto blocks = sampled_blocks(spec, profile);
  std::vector<std::vector<double>> tables;
  for (std::size_t k = 0; k < spec.commodity_count(); ++k) tables.push_back(to_doubles(spec.payoff(h, k).values()));
  const double scale = NumTraits<T>::to_double(spec.scale(h));
  const std::size_t n_k = spec.commodity_count();
  return estimate(samples, seed, [&](Engine& engine) {
    SuccessTuple tuple(n_k);
    draw_tuple(blocks, engine, tuple);
    double value = scale;
    for (std::size_t k = 0; k < n_k; ++k) value *= tables[k][tuple[k]];
    return value;
  });
}

template <Scalar T>
EstimateReport estimate_convolution(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p,
                                    Subset shared, std::uint64_t samples, std::uint64_t seed) {
  require_same_ground(f.ground(), g.ground(), "estimate_convolution");
  require_same_ground(f.ground(), p.ground(), "estimate_convolution");
  const auto f_values = to_doubles(f.values());
  const auto g_values = to_doubles(g.values());
  const auto probs = to_doubles(p.probabilities());
  const std::size_t n = probs.size();
  return estimate(samples, seed, [&](Engine& engine) {
    Mask first = 0;
    Mask second = 0;
    for (std::size_t h = 0; h < n; ++h) {
      const Mask bit = Mask{1} << h;
      if (shared.contains(h)) {
        if (bernoulli(engine, probs[h])) {
          first |= bit;
          second |= bit;
        }
      } else {
        if (bernoulli(engine, probs[h])) first |= bit;
        if (bernoulli(engine, probs[h])) second |= bit;
      }
    }
    return f_values[first] * g_values[second];
  });
}

#define RISKPOOL_INSTANTIATE(T)                                                                                 \
  template SuccessTuple sample_success<T>(const GameSpec<T>&, const StrategyProfile&, Engine&);                \
  template EstimateReport estimate_payoff<T>(const GameSpec<T>&, const StrategyProfile&, std::size_t,          \
                                             std::uint64_t, std::uint64_t);                                    \
  template EstimateReport estimate_convolution<T>(const SetFunction<T>&, const SetFunction<T>&,                \
                                                  const CoinVector<T>&, Subset, std::uint64_t, std::uint64_t);

RISKPOOL_INSTANTIATE(double)
RISKPOOL_INSTANTIATE(Rational)

#undef RISKPOOL_INSTANTIATE

}  // namespace riskpool
