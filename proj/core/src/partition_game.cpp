#include "riskpool/partition_game.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "riskpool/set_partitions.hpp"

namespace riskpool {

// PartitionStrategy

PartitionStrategy::PartitionStrategy(std::size_t owner, std::vector<CommodityMask> blocks)
    : owner_(owner), blocks_(std::move(blocks)) {
  CommodityMask seen = 0;
  for (CommodityMask b : blocks_) {
    if (b == 0) throw Error("partition strategy has an empty shipment");
    if (b >> kMaxCommodities) throw Error("partition strategy names a commodity outside K");
    if (seen & b) throw Error("partition strategy ships a commodity twice");
    seen |= b;
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](CommodityMask x, CommodityMask y) { return std::countr_zero(x) < std::countr_zero(y); });
}

CommodityMask PartitionStrategy::support() const {
  CommodityMask all = 0;
  for (CommodityMask b : blocks_) all |= b;
  return all;
}

std::optional<std::size_t> PartitionStrategy::block_of(std::size_t commodity) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if ((blocks_[i] >> commodity) & 1U) return i;
  }
  return std::nullopt;
}

std::vector<PartitionStrategy> enumerate_partitions(std::size_t owner, CommodityMask commodities) {
  std::vector<std::size_t> members;
  for (std::size_t k = 0; k < 32; ++k) {
    if ((commodities >> k) & 1U) members.push_back(k);
  }
  if (members.size() > kMaxPartitionedSetSize) {
    throw Error("cannot enumerate partitions of " + std::to_string(members.size()) +
                " commodities; the cap is " + std::to_string(kMaxPartitionedSetSize));
  }
  std::vector<PartitionStrategy> out;
  for (const auto& rgs : restricted_growth_strings(members.size())) {
    std::vector<CommodityMask> blocks;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (rgs[i] >= blocks.size()) blocks.resize(rgs[i] + std::size_t{1}, 0);
      blocks[rgs[i]] |= CommodityMask{1} << members[i];
    }
    out.emplace_back(owner, std::move(blocks));
  }
  return out;
}

bool coarser(const PartitionStrategy& coarse, const PartitionStrategy& finer) {
  if (coarse.owner() != finer.owner()) throw Error("coarser: strategies belong to different suppliers");
  if (coarse.support() != finer.support()) throw Error("coarser: strategies partition different commodity sets");
  for (CommodityMask fb : finer.blocks()) {
    const bool inside = std::any_of(coarse.blocks().begin(), coarse.blocks().end(),
                                    [fb](CommodityMask cb) { return (fb & ~cb) == 0; });
    if (!inside) return false;
  }
  return true;
}

PartitionStrategy coarse_strategy(std::size_t owner, CommodityMask commodities) {
  if (commodities == 0) return PartitionStrategy(owner, {});
  return PartitionStrategy(owner, {commodities});
}

// GameSpec

template <Scalar T>
GameSpec<T>::GameSpec(GroundSet commodities, CoinVector<T> p, std::vector<CommodityMask> supply,
                      std::vector<std::vector<SetFunction<T>>> payoffs, std::vector<T> scale)
    : commodities_(std::move(commodities)),
      p_(std::move(p)),
      supply_(std::move(supply)),
      payoffs_(std::move(payoffs)),
      scale_(std::move(scale)) {
  const std::size_t n_k = commodities_.size();
  const std::size_t n_h = p_.ground().size();
  if (n_k > kMaxCommodities) {
    throw Error("game has " + std::to_string(n_k) + " commodities; the cap is " + std::to_string(kMaxCommodities));
  }
  if (n_h == 0 || n_h > kMaxSuppliers) {
    throw Error("game needs between 1 and " + std::to_string(kMaxSuppliers) + " suppliers, got " +
                std::to_string(n_h));
  }
  if (supply_.size() != n_h) throw Error("game: one commodity set K^h per supplier required");
  for (std::size_t h = 0; h < n_h; ++h) {
    if (supply_[h] & ~commodities_.full_mask()) {
      throw Error("game: supplier '" + suppliers().label(h) + "' supplies an unknown commodity");
    }
  }
  if (payoffs_.size() != n_h) throw Error("game: payoff functions for every supplier required");
  for (std::size_t h = 0; h < n_h; ++h) {
    if (payoffs_[h].size() != n_k) {
      throw Error("game: supplier '" + suppliers().label(h) + "' needs one payoff function per commodity");
    }
    for (std::size_t k = 0; k < n_k; ++k) {
      const auto& f = payoffs_[h][k];
      const std::string where = "F_" + commodities_.label(k) + "^" + suppliers().label(h);
      require_same_ground(f.ground(), suppliers(), where.c_str());
      for (const T& v : f.values()) {
        if (v < 0) throw Error("game: payoff " + where + " takes a negative value");
      }
      if (!is_increasing(f)) throw Error("game: payoff " + where + " is not increasing");
    }
  }
  if (scale_.empty()) scale_.assign(n_h, T(1));
  if (scale_.size() != n_h) throw Error("game: one scale factor per supplier required");
  for (T& s : scale_) {
    NumTraits<T>::normalize(s);
    if (!(s > 0)) throw Error("game: scale factors must be positive");
  }
  symmetric_ = true;
  for (std::size_t h = 1; h < n_h && symmetric_; ++h) symmetric_ = payoffs_[h] == payoffs_[0];
}

template <Scalar T>
GameSpec<T> GameSpec<T>::symmetric(GroundSet commodities, CoinVector<T> p, std::vector<CommodityMask> supply,
                                   std::vector<SetFunction<T>> common) {
  std::vector<std::vector<SetFunction<T>>> payoffs(p.ground().size(), common);
  return GameSpec(std::move(commodities), std::move(p), std::move(supply), std::move(payoffs));
}

template <Scalar T>
T GameSpec<T>::raw_payoff(std::size_t h, const SuccessTuple& tuple) const {
  T product = 1;
  for (std::size_t k = 0; k < commodities_.size(); ++k) product *= payoffs_[h][k].at(tuple[k]);
  return product;
}

template <Scalar T>
void GameSpec<T>::validate(const StrategyProfile& profile) const {
  if (profile.size() != supplier_count()) {
    throw Error("profile has " + std::to_string(profile.size()) + " strategies for " +
                std::to_string(supplier_count()) + " suppliers");
  }
  for (std::size_t h = 0; h < profile.size(); ++h) {
    if (profile[h].owner() != h) throw Error("profile entry " + std::to_string(h) + " belongs to another supplier");
    if (profile[h].support() != supply_[h]) {
      throw Error("strategy of '" + suppliers().label(h) + "' does not partition its commodity set");
    }
  }
}

template <Scalar T>
StrategyProfile GameSpec<T>::coarse_profile() const {
  StrategyProfile profile;
  for (std::size_t h = 0; h < supplier_count(); ++h) profile.push_back(coarse_strategy(h, supply_[h]));
  return profile;
}

// Outcomes

SuccessTuple success_tuple(std::size_t commodity_count, const StrategyProfile& profile, const ArrivalPattern& arrivals) {
  SuccessTuple tuple(commodity_count, 0);
  for (std::size_t h = 0; h < profile.size(); ++h) {
    const auto& blocks = profile[h].blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (!((arrivals[h] >> i) & 1U)) continue;
      for (std::size_t k = 0; k < commodity_count; ++k) {
        if ((blocks[i] >> k) & 1U) tuple[k] |= Mask{1} << h;
      }
    }
  }
  return tuple;
}

namespace {

struct BlockRef {
  std::size_t owner;
  std::size_t index;
  CommodityMask commodities;
};

std::vector<BlockRef> flatten_blocks(const StrategyProfile& profile, std::optional<std::size_t> skip_owner) {
  std::vector<BlockRef> out;
  for (std::size_t h = 0; h < profile.size(); ++h) {
    if (skip_owner && *skip_owner == h) continue;
    for (std::size_t i = 0; i < profile[h].block_count(); ++i) out.push_back({h, i, profile[h].blocks()[i]});
  }
  if (out.size() > kMaxOutcomeBlocks) {
    throw Error("profile has " + std::to_string(out.size()) + " shipments; exact enumeration is capped at " +
                std::to_string(kMaxOutcomeBlocks));
  }
  return out;
}

// Visits every arrival pattern of `blocks` with its probability and the success tuple it induces.
template <Scalar T, class Visit>
void for_each_atom(const GameSpec<T>& spec, const std::vector<BlockRef>& blocks, Visit&& visit) {
  const std::size_t n_k = spec.commodity_count();
  const std::uint64_t atoms = std::uint64_t{1} << blocks.size();
  ArrivalPattern arrivals(spec.supplier_count(), 0);
  SuccessTuple tuple(n_k, 0);
  for (std::uint64_t atom = 0; atom < atoms; ++atom) {
    std::fill(arrivals.begin(), arrivals.end(), 0U);
    std::fill(tuple.begin(), tuple.end(), Mask{0});
    T probability = 1;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const BlockRef& ref = blocks[b];
      const T& p = spec.coins()[ref.owner];
      if ((atom >> b) & 1U) {
        probability *= p;
        arrivals[ref.owner] |= std::uint32_t{1} << ref.index;
        for (std::size_t k = 0; k < n_k; ++k) {
          if ((ref.commodities >> k) & 1U) tuple[k] |= Mask{1} << ref.owner;
        }
      } else {
        probability *= 1 - p;
      }
    }
    visit(arrivals, tuple, probability);
  }
}

template <Scalar T>
std::vector<T> payoffs_of_all(const std::vector<T>& values, const std::vector<PartitionStrategy>& own, const T& p) {
  std::vector<T> out;
  out.reserve(own.size());
  for (const auto& strategy : own) out.push_back(payoff_from_values(values, strategy, p));
  return out;
}

template <Scalar T>
std::vector<char> best_of(const std::vector<T>& payoffs) {
  const T best = *std::max_element(payoffs.begin(), payoffs.end());
  std::vector<char> out(payoffs.size());
  for (std::size_t s = 0; s < payoffs.size(); ++s) out[s] = NumTraits<T>::eq(payoffs[s], best) ? 1 : 0;
  return out;
}

// Mixed-radix odometer over the strategy lists of every supplier except `skip`.
class Odometer {
 public:
  Odometer(std::vector<std::size_t> radix, std::optional<std::size_t> skip) : radix_(std::move(radix)), skip_(skip) {
    digits_.assign(radix_.size(), 0);
  }
  const std::vector<std::size_t>& digits() const { return digits_; }
  bool next() {
    for (std::size_t h = 0; h < radix_.size(); ++h) {
      if (skip_ && *skip_ == h) continue;
      if (++digits_[h] < radix_[h]) return true;
      digits_[h] = 0;
    }
    return false;
  }

 private:
  std::vector<std::size_t> radix_;
  std::optional<std::size_t> skip_;
  std::vector<std::size_t> digits_;
};

template <Scalar T>
std::vector<std::vector<PartitionStrategy>> strategy_spaces(const GameSpec<T>& spec) {
  std::vector<std::vector<PartitionStrategy>> out;
  for (std::size_t h = 0; h < spec.supplier_count(); ++h) out.push_back(enumerate_partitions(h, spec.supply(h)));
  return out;
}

template <Scalar T>
void require_profile_cap(const GameSpec<T>& spec) {
  const std::uint64_t count = profile_count(spec);
  if (count > kMaxProfiles) {
    throw Error("game has " + std::to_string(count) + " pure profiles; exhaustive analysis is capped at " +
                std::to_string(kMaxProfiles));
  }
}

}  // namespace

template <Scalar T>
std::uint64_t profile_count(const GameSpec<T>& spec) {
  std::uint64_t count = 1;
  for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
    const auto size = static_cast<std::size_t>(std::popcount(spec.supply(h)));
    count *= bell_number(size);
  }
  return count;
}

template <Scalar T>
std::vector<OutcomeAtom<T>> success_distribution(const GameSpec<T>& spec, const StrategyProfile& profile) {
  spec.validate(profile);
  std::vector<OutcomeAtom<T>> out;
  for_each_atom(spec, flatten_blocks(profile, std::nullopt),
                [&](const ArrivalPattern& arrivals, const SuccessTuple& tuple, const T& probability) {
                  out.push_back({arrivals, tuple, probability});
                });
  return out;
}

template <Scalar T>
T expected_payoff(const GameSpec<T>& spec, const StrategyProfile& profile, std::size_t h) {
  spec.validate(profile);
  if (h >= spec.supplier_count()) throw Error("expected_payoff: unknown supplier index");
  T total = 0;
  for_each_atom(spec, flatten_blocks(profile, std::nullopt),
                [&](const ArrivalPattern&, const SuccessTuple& tuple, const T& probability) {
                  if (probability != 0) total += probability * spec.player_payoff(h, tuple);
                });
  return total;
}

template <Scalar T>
T expected_output(const GameSpec<T>& spec, const StrategyProfile& profile) {
  if (!spec.is_symmetric()) throw Error("expected_output requires a symmetric game (F_k^h = F_k for every h)");
  spec.validate(profile);
  T total = 0;
  for_each_atom(spec, flatten_blocks(profile, std::nullopt),
                [&](const ArrivalPattern&, const SuccessTuple& tuple, const T& probability) {
                  if (probability != 0) total += probability * spec.raw_payoff(0, tuple);
                });
  return total;
}

template <Scalar T>
std::vector<T> own_arrival_values(const GameSpec<T>& spec, const StrategyProfile& profile, std::size_t h) {
  if (h >= spec.supplier_count()) throw Error("own_arrival_values: unknown supplier index");
  const CommodityMask own = spec.supply(h);
  const Mask bit = Mask{1} << h;
  std::vector<T> values(std::size_t{1} << spec.commodity_count(), T(0));
  SuccessTuple tuple(spec.commodity_count());
  for_each_atom(spec, flatten_blocks(profile, h),
                [&](const ArrivalPattern&, const SuccessTuple& others, const T& probability) {
                  if (probability == 0) return;
                  CommodityMask arrived = 0;
                  while (true) {
                    for (std::size_t k = 0; k < tuple.size(); ++k) {
                      tuple[k] = ((arrived >> k) & 1U) ? (others[k] | bit) : others[k];
                    }
                    values[arrived] += probability * spec.player_payoff(h, tuple);
                    if (arrived == own) break;
                    arrived = (arrived - own) & own;
                  }
                });
  return values;
}

template <Scalar T>
T payoff_from_values(const std::vector<T>& values, const PartitionStrategy& own, const T& p) {
  const auto& blocks = own.blocks();
  const std::uint32_t outcomes = std::uint32_t{1} << blocks.size();
  const T q = 1 - p;
  T total = 0;
  for (std::uint32_t bits = 0; bits < outcomes; ++bits) {
    T probability = 1;
    CommodityMask arrived = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if ((bits >> i) & 1U) {
        probability *= p;
        arrived |= blocks[i];
      } else {
        probability *= q;
      }
    }
    if (probability != 0) total += probability * values.at(arrived);
  }
  return total;
}

template <Scalar T>
ConditionalPayoffs<T> conditional_payoffs(const GameSpec<T>& spec, const StrategyProfile& profile, std::size_t h,
                                          std::size_t i, std::size_t j, const ArrivalPattern& conditioning) {
  spec.validate(profile);
  if (h >= spec.supplier_count()) throw Error("conditional_payoffs: unknown supplier index");
  const PartitionStrategy& own = profile[h];
  if (own.block_count() < 2) throw Error("conditional_payoffs: supplier needs at least two shipments");
  if (i == j || i >= own.block_count() || j >= own.block_count()) {
    throw Error("conditional_payoffs: block indices must be two distinct shipments of the supplier");
  }
  if (conditioning.size() != spec.supplier_count()) {
    throw Error("conditional_payoffs: conditioning must fix the shipments of every supplier");
  }
  for (std::size_t g = 0; g < conditioning.size(); ++g) {
    if (profile[g].block_count() < 32 && (conditioning[g] >> profile[g].block_count()) != 0) {
      throw Error("conditional_payoffs: conditioning names a shipment that does not exist");
    }
  }

  const std::uint32_t bit_i = std::uint32_t{1} << i;
  const std::uint32_t bit_j = std::uint32_t{1} << j;
  auto payoff_with = [&](bool arrived_i, bool arrived_j) {
    ArrivalPattern arrivals = conditioning;
    arrivals[h] &= ~(bit_i | bit_j);
    if (arrived_i) arrivals[h] |= bit_i;
    if (arrived_j) arrivals[h] |= bit_j;
    return success_tuple(spec.commodity_count(), profile, arrivals);
  };
  auto block_product = [&](const SuccessTuple& tuple, CommodityMask block) {
    T product = 1;
    for (std::size_t k = 0; k < spec.commodity_count(); ++k) {
      if ((block >> k) & 1U) product *= spec.payoff(h, k).at(tuple[k]);
    }
    return product;
  };

  const T& p = spec.coins()[h];
  const T q = 1 - p;
  const SuccessTuple none = payoff_with(false, false);
  const SuccessTuple only_i = payoff_with(true, false);
  const SuccessTuple only_j = payoff_with(false, true);
  const SuccessTuple both = payoff_with(true, true);

  ConditionalPayoffs<T> out;
  out.separate = q * q * spec.player_payoff(h, none) + p * q * spec.player_payoff(h, only_i) +
                 q * p * spec.player_payoff(h, only_j) + p * p * spec.player_payoff(h, both);
  out.merged = q * spec.player_payoff(h, none) + p * spec.player_payoff(h, both);

  const CommodityMask block_i = own.blocks()[i];
  const CommodityMask block_j = own.blocks()[j];
  const CommodityMask rest = ((CommodityMask{1} << spec.commodity_count()) - 1) & ~(block_i | block_j);
  out.a0 = block_product(none, block_i);
  out.a1 = block_product(only_i, block_i);
  out.b0 = block_product(none, block_j);
  out.b1 = block_product(only_j, block_j);
  out.c = spec.scale(h) * block_product(none, rest);
  return out;
}

template <Scalar T>
ExPostSweep<T> ex_post_sweep(const GameSpec<T>& spec, const StrategyProfile& profile) {
  spec.validate(profile);
  const auto blocks = flatten_blocks(profile, std::nullopt);
  ExPostSweep<T> sweep;
  for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
    const std::size_t count = profile[h].block_count();
    if (count < 2) continue;
    const T& p = spec.coins()[h];
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        for_each_atom(spec, blocks, [&](const ArrivalPattern& arrivals, const SuccessTuple&, const T&) {
          // Each realization of the other shipments once: blocks i and j of h lost.
          if ((arrivals[h] >> i) & 1U || (arrivals[h] >> j) & 1U) return;
          ++sweep.realizations;
          auto cp = conditional_payoffs(spec, profile, h, i, j, arrivals);
          const T predicted = p * (1 - p) * (cp.a1 - cp.a0) * (cp.b1 - cp.b0) * cp.c;
          const bool worse = !NumTraits<T>::geq(cp.merged, cp.separate);
          const bool mismatch = !NumTraits<T>::eq(cp.merged - cp.separate, predicted);
          if (worse) ++sweep.merge_worse;
          if (mismatch) ++sweep.identity_mismatch;
          if ((worse || mismatch) && !sweep.first_failure) sweep.first_failure = cp;
        });
      }
    }
  }
  return sweep;
}

template <Scalar T>
std::vector<PartitionStrategy> best_replies(const GameSpec<T>& spec, const StrategyProfile& profile, std::size_t h) {
  spec.validate(profile);
  if (h >= spec.supplier_count()) throw Error("best_replies: unknown supplier index");
  const auto own = enumerate_partitions(h, spec.supply(h));
  const auto payoffs = payoffs_of_all(own_arrival_values(spec, profile, h), own, spec.coins()[h]);
  const auto best = best_of(payoffs);
  std::vector<PartitionStrategy> out;
  for (std::size_t s = 0; s < own.size(); ++s) {
    if (best[s]) out.push_back(own[s]);
  }
  return out;
}

template <Scalar T>
DominanceCertificate<T> check_dominance(const GameSpec<T>& spec, std::size_t h) {
  if (h >= spec.supplier_count()) throw Error("check_dominance: unknown supplier index");
  require_profile_cap(spec);
  const auto spaces = strategy_spaces(spec);
  const auto& own = spaces[h];
  const std::size_t coarse_index = 0;  // the all-zero restricted growth string comes first

  std::vector<std::pair<std::size_t, std::size_t>> ordered_pairs;
  for (std::size_t a = 0; a < own.size(); ++a) {
    for (std::size_t b = 0; b < own.size(); ++b) {
      if (a != b && coarser(own[a], own[b])) ordered_pairs.emplace_back(a, b);
    }
  }

  std::vector<std::size_t> radix;
  for (const auto& space : spaces) radix.push_back(space.size());
  Odometer odometer(radix, h);
  DominanceCertificate<T> cert;
  cert.player = h;
  StrategyProfile profile(spec.supplier_count());
  do {
    for (std::size_t g = 0; g < spaces.size(); ++g) {
      profile[g] = g == h ? own[coarse_index] : spaces[g][odometer.digits()[g]];
    }
    ++cert.opponent_profiles;
    const auto payoffs = payoffs_of_all(own_arrival_values(spec, profile, h), own, spec.coins()[h]);
    for (const auto& [a, b] : ordered_pairs) {
      ++cert.comparisons;
      if (!NumTraits<T>::geq(payoffs[a], payoffs[b])) {
        cert.dominant = false;
        if (!cert.violation) {
          StrategyProfile witness = profile;
          witness[h] = own[b];
          cert.violation = DominanceViolation<T>{witness, own[a], own[b], payoffs[a], payoffs[b]};
        }
      }
    }
    for (std::size_t s = 0; s < own.size(); ++s) {
      if (s != coarse_index && !NumTraits<T>::gt(payoffs[coarse_index], payoffs[s])) cert.coarse_strictly_best = false;
    }
  } while (odometer.next());
  return cert;
}

template <Scalar T>
std::vector<StrategyProfile> find_nash(const GameSpec<T>& spec) {
  require_profile_cap(spec);
  const auto spaces = strategy_spaces(spec);
  const std::size_t n_h = spec.supplier_count();
  std::vector<std::size_t> radix;
  for (const auto& space : spaces) radix.push_back(space.size());

  // Index of the opponents' sub-profile, mixed radix over suppliers other than h.
  auto opponent_index = [&](const std::vector<std::size_t>& digits, std::size_t h) {
    std::size_t index = 0;
    for (std::size_t g = n_h; g-- > 0;) {
      if (g == h) continue;
      index = index * radix[g] + digits[g];
    }
    return index;
  };

  // best[h][opponent index] = best-reply indicator over h's strategies.
  std::vector<std::vector<std::vector<char>>> best(n_h);
  StrategyProfile profile(n_h);
  for (std::size_t h = 0; h < n_h; ++h) {
    std::size_t opponents = 1;
    for (std::size_t g = 0; g < n_h; ++g) {
      if (g != h) opponents *= radix[g];
    }
    best[h].resize(opponents);
    Odometer odometer(radix, h);
    do {
      for (std::size_t g = 0; g < n_h; ++g) profile[g] = g == h ? spaces[h][0] : spaces[g][odometer.digits()[g]];
      const auto payoffs = payoffs_of_all(own_arrival_values(spec, profile, h), spaces[h], spec.coins()[h]);
      best[h][opponent_index(odometer.digits(), h)] = best_of(payoffs);
    } while (odometer.next());
  }

  std::vector<StrategyProfile> equilibria;
  Odometer all(radix, std::nullopt);
  do {
    const auto& digits = all.digits();
    bool equilibrium = true;
    for (std::size_t h = 0; h < n_h && equilibrium; ++h) {
      equilibrium = best[h][opponent_index(digits, h)][digits[h]] != 0;
    }
    if (!equilibrium) continue;
    StrategyProfile found;
    for (std::size_t h = 0; h < n_h; ++h) found.push_back(spaces[h][digits[h]]);
    equilibria.push_back(std::move(found));
  } while (all.next());
  return equilibria;
}

template <Scalar T>
GameSpec<T> scaled_spec(const GameSpec<T>& spec, const std::vector<T>& kappa) {
  if (kappa.size() != spec.supplier_count()) throw Error("scaled_spec: one factor per supplier required");
  std::vector<T> scale;
  for (std::size_t h = 0; h < kappa.size(); ++h) {
    T factor = kappa[h];
    NumTraits<T>::normalize(factor);
    if (!(factor > 0)) throw Error("scaled_spec: scale factors must be positive");
    scale.push_back(spec.scale(h) * factor);
  }
  std::vector<std::vector<SetFunction<T>>> payoffs;
  for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
    std::vector<SetFunction<T>> row;
    for (std::size_t k = 0; k < spec.commodity_count(); ++k) row.push_back(spec.payoff(h, k));
    payoffs.push_back(std::move(row));
  }
  std::vector<CommodityMask> supply;
  for (std::size_t h = 0; h < spec.supplier_count(); ++h) supply.push_back(spec.supply(h));
  return GameSpec<T>(spec.commodities(), spec.coins(), std::move(supply), std::move(payoffs), std::move(scale));
}

#define RISKPOOL_INSTANTIATE(T)                                                                                \
  template class GameSpec<T>;                                                                                  \
  template std::uint64_t profile_count<T>(const GameSpec<T>&);                                                 \
  template std::vector<OutcomeAtom<T>> success_distribution<T>(const GameSpec<T>&, const StrategyProfile&);    \
  template T expected_payoff<T>(const GameSpec<T>&, const StrategyProfile&, std::size_t);                      \
  template T expected_output<T>(const GameSpec<T>&, const StrategyProfile&);                                   \
  template std::vector<T> own_arrival_values<T>(const GameSpec<T>&, const StrategyProfile&, std::size_t);      \
  template T payoff_from_values<T>(const std::vector<T>&, const PartitionStrategy&, const T&);                 \
  template ConditionalPayoffs<T> conditional_payoffs<T>(const GameSpec<T>&, const StrategyProfile&, std::size_t, \
                                                        std::size_t, std::size_t, const ArrivalPattern&);      \
  template ExPostSweep<T> ex_post_sweep<T>(const GameSpec<T>&, const StrategyProfile&);                        \
  template std::vector<PartitionStrategy> best_replies<T>(const GameSpec<T>&, const StrategyProfile&, std::size_t); \
  template DominanceCertificate<T> check_dominance<T>(const GameSpec<T>&, std::size_t);                        \
  template std::vector<StrategyProfile> find_nash<T>(const GameSpec<T>&);                                      \
  template GameSpec<T> scaled_spec<T>(const GameSpec<T>&, const std::vector<T>&);

RISKPOOL_INSTANTIATE(double)
RISKPOOL_INSTANTIATE(Rational)

#undef RISKPOOL_INSTANTIATE

}  // namespace riskpool
