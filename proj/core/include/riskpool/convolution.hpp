#pragma once

#include <cstddef>
#include <vector>

#include "riskpool/boolean_lattice.hpp"

namespace riskpool {

inline constexpr std::size_t kMaxBruteForceGround = 10;
inline constexpr std::size_t kMaxConvolveGround = 16;

/// (f*g)(S) summed literally over the support of the pair measure for S.
/// Reference oracle; n <= 10.
template <Scalar T>
T convolve_bruteforce(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p,
                      Subset shared);

/// Full table of f*g, n <= 16.
///
/// Elements are eliminated one at a time in label order. For an element outside S
/// both functions are averaged over that coordinate independently; for an element
/// in S the pair is split into its two cofactor pairs with weights (1-p, p). At the
/// last element this is exactly the single-element rule
///   c  = [(1-p)a + pa'] [(1-p)b + pb'],   c' = (1-p)ab + pa'b'.
/// The walk is depth first, so memory stays O(2^n) while the work is O(3^n).
template <Scalar T>
SetFunction<T> convolve(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p);

/// Exp(fg) - Exp(f) Exp(g).
template <Scalar T>
T harris_gap(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p);

/// Functions over one ground set indexed by position; duplicates are allowed.
template <Scalar T>
class IndexedFamily {
 public:
  explicit IndexedFamily(std::vector<SetFunction<T>> functions);

  std::size_t size() const { return functions_.size(); }
  const SetFunction<T>& operator[](std::size_t i) const { return functions_[i]; }
  const GroundSet& ground() const { return functions_.front().ground(); }

 private:
  std::vector<SetFunction<T>> functions_;
};

/// Partition of {0, ..., index_count-1} into nonempty disjoint blocks.
class IndexPartition {
 public:
  IndexPartition(std::size_t index_count, std::vector<std::vector<std::size_t>> blocks);

  static IndexPartition single_block(std::size_t index_count);
  static IndexPartition singletons(std::size_t index_count);

  std::size_t index_count() const { return index_count_; }
  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
  std::size_t block_of(std::size_t index) const { return block_of_.at(index); }

 private:
  std::size_t index_count_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
};

/// Product over blocks of Exp(product of the block's functions).
template <Scalar T>
T partition_expectation(const IndexedFamily<T>& family, const IndexPartition& partition,
                        const CoinVector<T>& p);

/// Every block of `fine` lies inside some block of `coarse`.
bool refines(const IndexPartition& fine, const IndexPartition& coarse);

/// All partitions of {0, ..., n-1}, n <= 8.
std::vector<IndexPartition> all_index_partitions(std::size_t n);

}  // namespace riskpool
