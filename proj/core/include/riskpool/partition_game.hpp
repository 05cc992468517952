#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "riskpool/boolean_lattice.hpp"

namespace riskpool {

/// Set of commodities as a bitmask over K.
using CommodityMask = std::uint32_t;

inline constexpr std::size_t kMaxCommodities = 8;
inline constexpr std::size_t kMaxSuppliers = 6;
inline constexpr std::size_t kMaxOutcomeBlocks = 22;
inline constexpr std::uint64_t kMaxProfiles = 1'000'000;

/// A supplier's shipping plan: a partition of its commodity set into shipments.
/// Blocks are kept sorted by their smallest commodity index.
class PartitionStrategy {
 public:
  PartitionStrategy() = default;
  PartitionStrategy(std::size_t owner, std::vector<CommodityMask> blocks);

  std::size_t owner() const { return owner_; }
  const std::vector<CommodityMask>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  CommodityMask support() const;
  /// Index of the block holding `commodity`, or nullopt.
  std::optional<std::size_t> block_of(std::size_t commodity) const;

  bool operator==(const PartitionStrategy&) const = default;

 private:
  std::size_t owner_ = 0;
  std::vector<CommodityMask> blocks_;
};

/// One strategy per supplier, indexed by supplier.
using StrategyProfile = std::vector<PartitionStrategy>;

/// S_k for every commodity k, as a mask over suppliers.
using SuccessTuple = std::vector<Mask>;

/// Arrival bits per supplier; bit i of entry h is block i of P^h.
using ArrivalPattern = std::vector<std::uint32_t>;

/// All partitions of `commodities` (at most 8 of them set), each exactly once.
std::vector<PartitionStrategy> enumerate_partitions(std::size_t owner, CommodityMask commodities);

/// True iff every block of `finer` lies inside a block of `coarse`.
/// Throws Error when the strategies belong to different owners or commodity sets.
bool coarser(const PartitionStrategy& coarse, const PartitionStrategy& finer);

/// The single shipment K^h (empty partition for empty K^h).
PartitionStrategy coarse_strategy(std::size_t owner, CommodityMask commodities);

/// The multi-commodity shipping game. Player h receives
///   scale_h * prod_k F_k^h(S_k)
/// where S_k is the set of suppliers whose shipment containing k arrived.
template <Scalar T>
class GameSpec {
 public:
  /// payoffs[h][k] = F_k^h over subsets of suppliers; `scale` defaults to all ones.
  GameSpec(GroundSet commodities, CoinVector<T> p, std::vector<CommodityMask> supply,
           std::vector<std::vector<SetFunction<T>>> payoffs, std::vector<T> scale = {});

  /// Every supplier shares the payoff functions `common[k]`.
  static GameSpec symmetric(GroundSet commodities, CoinVector<T> p, std::vector<CommodityMask> supply,
                            std::vector<SetFunction<T>> common);

  const GroundSet& commodities() const { return commodities_; }
  const GroundSet& suppliers() const { return p_.ground(); }
  const CoinVector<T>& coins() const { return p_; }
  std::size_t commodity_count() const { return commodities_.size(); }
  std::size_t supplier_count() const { return p_.ground().size(); }
  CommodityMask supply(std::size_t h) const { return supply_.at(h); }
  const SetFunction<T>& payoff(std::size_t h, std::size_t k) const { return payoffs_.at(h).at(k); }
  const T& scale(std::size_t h) const { return scale_.at(h); }
  /// F_k^h = F_k for all h (scales may differ).
  bool is_symmetric() const { return symmetric_; }

  /// prod_k F_k^h(S_k), without the scale factor.
  T raw_payoff(std::size_t h, const SuccessTuple& tuple) const;
  T player_payoff(std::size_t h, const SuccessTuple& tuple) const { return scale_[h] * raw_payoff(h, tuple); }

  /// Throws Error unless `profile` has one canonical partition of K^h per supplier h.
  void validate(const StrategyProfile& profile) const;

  StrategyProfile coarse_profile() const;

 private:
  GroundSet commodities_;
  CoinVector<T> p_;
  std::vector<CommodityMask> supply_;
  std::vector<std::vector<SetFunction<T>>> payoffs_;
  std::vector<T> scale_;
  bool symmetric_ = false;
};

template <Scalar T>
struct OutcomeAtom {
  ArrivalPattern arrivals;
  SuccessTuple tuple;
  T probability;
};

/// Success tuple produced by a block-arrival pattern.
SuccessTuple success_tuple(std::size_t commodity_count, const StrategyProfile& profile, const ArrivalPattern& arrivals);

/// Every block-arrival atom with its probability (at most 22 blocks in total).
template <Scalar T>
std::vector<OutcomeAtom<T>> success_distribution(const GameSpec<T>& spec, const StrategyProfile& profile);

/// Phi^h(P): expectation of scale_h * prod_k F_k^h(S_k).
template <Scalar T>
T expected_payoff(const GameSpec<T>& spec, const StrategyProfile& profile, std::size_t h);

/// Phi(P) of the principal; requires a symmetric spec.
template <Scalar T>
T expected_output(const GameSpec<T>& spec, const StrategyProfile& profile);

/// V[A] = expected payoff to h given that exactly the commodities A of K^h arrive
/// from h, averaging over the other suppliers' shipments. Indexed by commodity mask.
template <Scalar T>
std::vector<T> own_arrival_values(const GameSpec<T>& spec, const StrategyProfile& profile, std::size_t h);

/// Expected payoff of `own` against the values from own_arrival_values.
template <Scalar T>
T payoff_from_values(const std::vector<T>& values, const PartitionStrategy& own, const T& p);

template <Scalar T>
struct ConditionalPayoffs {
  T separate;  ///< pi: blocks i and j shipped separately
  T merged;    ///< pi': blocks i and j combined into one shipment
  T a0, a1;    ///< prod of F_k^h over block i, block i lost / arrived
  T b0, b1;    ///< same for block j
  T c;         ///< scale_h times prod of F_k^h over the remaining commodities
};

/// Expected payoff to h conditional on every block outcome except blocks i and j of P^h.
/// Bits of `conditioning` for those two blocks are ignored.
template <Scalar T>
ConditionalPayoffs<T> conditional_payoffs(const GameSpec<T>& spec, const StrategyProfile& profile, std::size_t h,
                                          std::size_t i, std::size_t j, const ArrivalPattern& conditioning);

template <Scalar T>
struct ExPostSweep {
  std::uint64_t realizations = 0;
  std::uint64_t merge_worse = 0;          ///< pi' < pi
  std::uint64_t identity_mismatch = 0;    ///< pi' - pi != p(1-p)(a1-a0)(b1-b0)c
  std::optional<ConditionalPayoffs<T>> first_failure;
};

/// Conditional payoffs for every player, every block pair and every conditioning realization.
template <Scalar T>
ExPostSweep<T> ex_post_sweep(const GameSpec<T>& spec, const StrategyProfile& profile);

/// All partitions of K^h maximizing h's payoff against the rest of `profile`.
template <Scalar T>
std::vector<PartitionStrategy> best_replies(const GameSpec<T>& spec, const StrategyProfile& profile, std::size_t h);

template <Scalar T>
struct DominanceViolation {
  StrategyProfile profile;  ///< opponents' strategies; entry h holds the finer strategy
  PartitionStrategy coarser;
  PartitionStrategy finer;
  T coarser_payoff;
  T finer_payoff;
};

template <Scalar T>
struct DominanceCertificate {
  std::size_t player = 0;
  bool dominant = true;                ///< P coarser than Q implies pi(P) >= pi(Q) everywhere
  bool coarse_strictly_best = true;    ///< coarse is the unique best reply to every opponent profile
  std::uint64_t opponent_profiles = 0;
  std::uint64_t comparisons = 0;
  std::optional<DominanceViolation<T>> violation;
};

/// Checks monotonicity along coarsening for player h over every opponent profile.
template <Scalar T>
DominanceCertificate<T> check_dominance(const GameSpec<T>& spec, std::size_t h);

/// Every pure profile in which each strategy is a best reply.
template <Scalar T>
std::vector<StrategyProfile> find_nash(const GameSpec<T>& spec);

/// Same game with scale_h multiplied by kappa_h > 0.
template <Scalar T>
GameSpec<T> scaled_spec(const GameSpec<T>& spec, const std::vector<T>& kappa);

/// Number of pure profiles, prod_h Bell(|K^h|).
template <Scalar T>
std::uint64_t profile_count(const GameSpec<T>& spec);

}  // namespace riskpool
