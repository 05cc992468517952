#include <benchmark/benchmark.h>

#include "riskpool/convolution.hpp"

namespace {

using riskpool::CoinVector;
using riskpool::GroundSet;
using riskpool::Rational;
using riskpool::SetFunction;
using riskpool::Subset;

template <class T>
struct Instance {
  SetFunction<T> f;
  SetFunction<T> g;
  CoinVector<T> p;
};

template <class T>
Instance<T> make_instance(std::size_t n) {
  const GroundSet ground = GroundSet::indexed(n);
  std::vector<T> p;
  for (std::size_t i = 0; i < n; ++i) p.push_back(riskpool::NumTraits<T>::from_rational(riskpool::ratio(long(i % 3) + 1, 4)));
  return {riskpool::random_increasing<T>(1, ground, 2 * n), riskpool::random_increasing<T>(2, ground, 2 * n),
          CoinVector<T>(ground, std::move(p))};
}

template <class T>
void BM_Convolve(benchmark::State& state) {
  const auto in = make_instance<T>(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(riskpool::convolve(in.f, in.g, in.p));
}

/// Literal double sum at every subset, for comparison with the contraction.
template <class T>
void BM_ConvolveBruteForceTable(benchmark::State& state) {
  const auto in = make_instance<T>(static_cast<std::size_t>(state.range(0)));
  const auto count = in.p.ground().subset_count();
  for (auto _ : state) {
    for (riskpool::Mask m = 0; m < count; ++m) {
      benchmark::DoNotOptimize(riskpool::convolve_bruteforce(in.f, in.g, in.p, Subset(m)));
    }
  }
}

template <class T>
void BM_HarrisGap(benchmark::State& state) {
  const auto in = make_instance<T>(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(riskpool::harris_gap(in.f, in.g, in.p));
}

}  // namespace

BENCHMARK_TEMPLATE(BM_Convolve, double)->DenseRange(2, 14, 2);
BENCHMARK_TEMPLATE(BM_Convolve, Rational)->DenseRange(2, 10, 2);
BENCHMARK_TEMPLATE(BM_ConvolveBruteForceTable, double)->DenseRange(2, 8, 2);
BENCHMARK_TEMPLATE(BM_ConvolveBruteForceTable, Rational)->DenseRange(2, 6, 2);
BENCHMARK_TEMPLATE(BM_HarrisGap, double)->DenseRange(4, 16, 4);
