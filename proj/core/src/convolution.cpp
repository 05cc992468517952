#include "riskpool/convolution.hpp"

#include <algorithm>
#include <span>
#include <string>

#include "riskpool/set_partitions.hpp"

namespace riskpool {

namespace {

template <Scalar T>
void check_operands(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p,
                    const char* what) {
  require_same_ground(f.ground(), g.ground(), what);
  require_same_ground(f.ground(), p.ground(), what);
}

// Enumerates every pair (S1, S2) in the support of the pair measure for `shared`,
// multiplying the coin probabilities element by element, and adds f(S1) g(S2) mu.
template <Scalar T>
class PairSum {
 public:
  PairSum(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p, Subset shared)
      : f_(f), g_(g), n_(p.ground().size()), shared_(shared), weights_(n_ + 1) {
    for (std::size_t h = 0; h < n_; ++h) {
      hit_.push_back(p[h]);
      miss_.push_back(1 - p[h]);
    }
  }

  T run() {
    total_ = 0;
    weights_[0] = 1;
    visit(0, 0, 0);
    return total_;
  }

 private:
  void visit(std::size_t h, Mask first, Mask second) {
    const T& weight = weights_[h];
    if (weight == 0) return;
    if (h == n_) {
      total_ += f_.at(first) * g_.at(second) * weight;
      return;
    }
    const Mask bit = Mask{1} << h;
    T& next = weights_[h + 1];
    if (shared_.contains(h)) {
      next = weight * miss_[h];
      visit(h + 1, first, second);
      next = weight * hit_[h];
      visit(h + 1, first | bit, second | bit);
      return;
    }
    for (int outcome = 0; outcome < 4; ++outcome) {
      const bool in1 = outcome & 1;
      const bool in2 = outcome & 2;
      next = weight * (in1 ? hit_[h] : miss_[h]);
      next *= in2 ? hit_[h] : miss_[h];
      visit(h + 1, in1 ? first | bit : first, in2 ? second | bit : second);
    }
  }

  const SetFunction<T>& f_;
  const SetFunction<T>& g_;
  std::size_t n_;
  Subset shared_;
  std::vector<T> hit_;
  std::vector<T> miss_;
  std::vector<T> weights_;  // weights_[h]: probability of the coins fixed so far
  T total_ = 0;
};

template <Scalar T>
class ConvolveWalk {
 public:
  ConvolveWalk(const CoinVector<T>& p, std::vector<T>& out) : p_(p), n_(p.ground().size()), out_(out) {
    for (std::size_t level = 1; level < n_; ++level) {
      const std::size_t len = std::size_t{1} << (n_ - level);
      f_scratch_.emplace_back(len);
      g_scratch_.emplace_back(len);
    }
  }

  // f and g are cofactor tables over elements level..n-1 (bit 0 = element `level`).
  void walk(std::size_t level, Mask shared, const T& weight, std::span<const T> f, std::span<const T> g) {
    const T& p = p_[level];
    const T q = 1 - p;
    const Mask bit = Mask{1} << level;

    if (level + 1 == n_) {
      const T& a = f[0];
      const T& a1 = f[1];
      const T& b = g[0];
      const T& b1 = g[1];
      out_[shared] += weight * ((q * a + p * a1) * (q * b + p * b1));
      out_[shared | bit] += weight * (q * a * b + p * a1 * b1);
      return;
    }

    std::vector<T>& fc = f_scratch_[level];
    std::vector<T>& gc = g_scratch_[level];
    const std::size_t half = fc.size();

    // Element outside S: independent coins, average each function separately.
    for (std::size_t i = 0; i < half; ++i) {
      fc[i] = q * f[2 * i] + p * f[2 * i + 1];
      gc[i] = q * g[2 * i] + p * g[2 * i + 1];
    }
    walk(level + 1, shared, weight, fc, gc);

    // Element inside S: one shared coin, both functions take the same cofactor.
    if (q != 0) {
      for (std::size_t i = 0; i < half; ++i) {
        fc[i] = f[2 * i];
        gc[i] = g[2 * i];
      }
      walk(level + 1, shared | bit, weight * q, fc, gc);
    }
    if (p != 0) {
      for (std::size_t i = 0; i < half; ++i) {
        fc[i] = f[2 * i + 1];
        gc[i] = g[2 * i + 1];
      }
      walk(level + 1, shared | bit, weight * p, fc, gc);
    }
  }

 private:
  const CoinVector<T>& p_;
  std::size_t n_;
  std::vector<T>& out_;
  std::vector<std::vector<T>> f_scratch_;
  std::vector<std::vector<T>> g_scratch_;
};

}  // namespace

template <Scalar T>
T convolve_bruteforce(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p,
                      Subset shared) {
  check_operands(f, g, p, "convolve_bruteforce");
  const GroundSet& ground = f.ground();
  if (ground.size() > kMaxBruteForceGround) {
    throw Error("convolve_bruteforce is limited to n <= " + std::to_string(kMaxBruteForceGround) +
                ", got n = " + std::to_string(ground.size()));
  }
  return PairSum<T>(f, g, p, shared).run();
}

template <Scalar T>
SetFunction<T> convolve(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p) {
  check_operands(f, g, p, "convolve");
  const GroundSet& ground = f.ground();
  if (ground.size() > kMaxConvolveGround) {
    throw Error("convolve is limited to n <= " + std::to_string(kMaxConvolveGround) + ", got n = " +
                std::to_string(ground.size()));
  }
  std::vector<T> out(ground.subset_count(), T(0));
  if (ground.size() == 0) {
    out[0] = f.at(0) * g.at(0);
  } else {
    ConvolveWalk<T> walk(p, out);
    walk.walk(0, 0, T(1), f.values(), g.values());
  }
  return SetFunction<T>(ground, std::move(out));
}

template <Scalar T>
T harris_gap(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p) {
  check_operands(f, g, p, "harris_gap");
  return expectation(f * g, p) - expectation(f, p) * expectation(g, p);
}

template <Scalar T>
IndexedFamily<T>::IndexedFamily(std::vector<SetFunction<T>> functions) : functions_(std::move(functions)) {
  if (functions_.empty()) throw Error("indexed family must contain at least one function");
  for (const auto& fn : functions_) require_same_ground(functions_.front().ground(), fn.ground(), "indexed family");
}

IndexPartition::IndexPartition(std::size_t index_count, std::vector<std::vector<std::size_t>> blocks)
    : index_count_(index_count), blocks_(std::move(blocks)), block_of_(index_count, index_count) {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty()) throw Error("index partition has an empty block");
    for (std::size_t i : blocks_[b]) {
      if (i >= index_count_) throw Error("index " + std::to_string(i) + " is outside the index set");
      if (block_of_[i] != index_count_) throw Error("index " + std::to_string(i) + " appears in two blocks");
      block_of_[i] = b;
    }
  }
  for (std::size_t i = 0; i < index_count_; ++i) {
    if (block_of_[i] == index_count_) throw Error("index " + std::to_string(i) + " is not covered");
  }
}

IndexPartition IndexPartition::single_block(std::size_t index_count) {
  if (index_count == 0) return IndexPartition(0, {});
  std::vector<std::size_t> all(index_count);
  for (std::size_t i = 0; i < index_count; ++i) all[i] = i;
  return IndexPartition(index_count, {all});
}

IndexPartition IndexPartition::singletons(std::size_t index_count) {
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < index_count; ++i) blocks.push_back({i});
  return IndexPartition(index_count, std::move(blocks));
}

template <Scalar T>
T partition_expectation(const IndexedFamily<T>& family, const IndexPartition& partition,
                        const CoinVector<T>& p) {
  if (family.size() != partition.index_count()) {
    throw Error("partition covers " + std::to_string(partition.index_count()) + " indices but the family has " +
                std::to_string(family.size()));
  }
  T result = 1;
  for (const auto& block : partition.blocks()) {
    SetFunction<T> product = family[block.front()];
    for (std::size_t k = 1; k < block.size(); ++k) product = product * family[block[k]];
    result *= expectation(product, p);
  }
  return result;
}

bool refines(const IndexPartition& fine, const IndexPartition& coarse) {
  if (fine.index_count() != coarse.index_count()) throw Error("refines: partitions of different index sets");
  for (const auto& block : fine.blocks()) {
    const std::size_t target = coarse.block_of(block.front());
    for (std::size_t i : block) {
      if (coarse.block_of(i) != target) return false;
    }
  }
  return true;
}

std::vector<IndexPartition> all_index_partitions(std::size_t n) {
  std::vector<IndexPartition> out;
  for (const auto& rgs : restricted_growth_strings(n)) {
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < n; ++i) {
      if (rgs[i] >= blocks.size()) blocks.resize(rgs[i] + std::size_t{1});
      blocks[rgs[i]].push_back(i);
    }
    out.emplace_back(n, std::move(blocks));
  }
  return out;
}

#define RISKPOOL_INSTANTIATE(T)                                                                         \
  template T convolve_bruteforce<T>(const SetFunction<T>&, const SetFunction<T>&, const CoinVector<T>&, \
                                    Subset);                                                            \
  template SetFunction<T> convolve<T>(const SetFunction<T>&, const SetFunction<T>&, const CoinVector<T>&); \
  template T harris_gap<T>(const SetFunction<T>&, const SetFunction<T>&, const CoinVector<T>&);         \
  template class IndexedFamily<T>;                                                                      \
  template T partition_expectation<T>(const IndexedFamily<T>&, const IndexPartition&, const CoinVector<T>&);

RISKPOOL_INSTANTIATE(double)
RISKPOOL_INSTANTIATE(Rational)

#undef RISKPOOL_INSTANTIATE

}  // namespace riskpool
