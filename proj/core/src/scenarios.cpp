#include "riskpool/scenarios.hpp"

#include <algorithm>
#include <string>

namespace riskpool {

namespace {

void check_scenario_size(const GroundSet& ground, const char* what) {
  if (ground.size() > kMaxScenarioGround) {
    throw Error(std::string(what) + ": ground set of " + std::to_string(ground.size()) +
                " elements exceeds the cap of " + std::to_string(kMaxScenarioGround));
  }
}

// Runs the shipping procedure for strategy `pooled`: element h in `pooled` sends one
// shipment carrying both items, every other element sends two independent shipments.
// `visit(first, second, probability)` receives which first/second items arrived.
template <Scalar T, class Visit>
void for_each_delivery(const CoinVector<T>& p, Subset pooled, std::size_t h, Mask first, Mask second,
                       const T& probability, Visit& visit) {
  if (h == p.ground().size()) {
    visit(first, second, probability);
    return;
  }
  const T& hit = p[h];
  const T miss = 1 - hit;
  const Mask bit = Mask{1} << h;
  if (pooled.contains(h)) {
    for_each_delivery(p, pooled, h + 1, first, second, T(probability * miss), visit);
    for_each_delivery(p, pooled, h + 1, first | bit, second | bit, T(probability * hit), visit);
    return;
  }
  for_each_delivery(p, pooled, h + 1, first, second, T(probability * miss * miss), visit);
  for_each_delivery(p, pooled, h + 1, first | bit, second, T(probability * hit * miss), visit);
  for_each_delivery(p, pooled, h + 1, first, second | bit, T(probability * miss * hit), visit);
  for_each_delivery(p, pooled, h + 1, first | bit, second | bit, T(probability * hit * hit), visit);
}

template <Scalar T, class Visit>
void for_each_delivery(const CoinVector<T>& p, Subset pooled, Visit&& visit) {
  if ((pooled.mask() & ~p.ground().full_mask()) != 0) throw Error("strategy subset lies outside the ground set");
  for_each_delivery(p, pooled, 0, 0, 0, T(1), visit);
}

template <Scalar T>
T total_amount(const std::vector<T>& amounts, Mask arrived) {
  T sum = 0;
  for (std::size_t h = 0; h < amounts.size(); ++h) {
    if ((arrived >> h) & 1U) sum += amounts[h];
  }
  return sum;
}

template <Scalar T>
bool is_zero_one(const SetFunction<T>& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](const T& v) { return v == 0 || v == 1; });
}

}  // namespace

template <Scalar T>
TwoInputProduction<T>::TwoInputProduction(CoinVector<T> p, std::vector<T> x, std::vector<T> y, Rational alpha,
                                          Rational beta)
    : p_(std::move(p)), x_(std::move(x)), y_(std::move(y)), alpha_(std::move(alpha)), beta_(std::move(beta)) {
  const std::size_t n = p_.ground().size();
  if (x_.size() != n || y_.size() != n) throw Error("production: one x and one y amount per supplier required");
  alpha_.canonicalize();
  beta_.canonicalize();
  for (T& v : x_) NumTraits<T>::normalize(v);
  for (T& v : y_) NumTraits<T>::normalize(v);
  if (alpha_ <= 0 || beta_ <= 0) throw Error("production: exponents alpha and beta must be positive");
  for (std::size_t h = 0; h < n; ++h) {
    if (x_[h] < 0 || y_[h] < 0) throw Error("production: negative amount for '" + p_.ground().label(h) + "'");
  }
  check_scenario_size(p_.ground(), "production");
}

template <Scalar T>
MilitaryScenario<T>::MilitaryScenario(CoinVector<T> p, MonotoneFamily red, MonotoneFamily blue)
    : p_(std::move(p)), red_(std::move(red)), blue_(std::move(blue)) {
  require_same_ground(p_.ground(), red_.ground(), "military scenario (red network)");
  require_same_ground(p_.ground(), blue_.ground(), "military scenario (blue network)");
  check_scenario_size(p_.ground(), "military");
}

template <Scalar T>
MergerScenario<T>::MergerScenario(CoinVector<T> p, SetFunction<T> company_a, SetFunction<T> company_b)
    : p_(std::move(p)), a_(std::move(company_a)), b_(std::move(company_b)) {
  require_same_ground(p_.ground(), a_.ground(), "merger scenario (company A)");
  require_same_ground(p_.ground(), b_.ground(), "merger scenario (company B)");
  check_scenario_size(p_.ground(), "merger");
  const Mask full = p_.ground().full_mask();
  for (const auto* f : {&a_, &b_}) {
    const char* name = f == &a_ ? "company A" : "company B";
    if (!is_zero_one(*f)) throw Error(std::string("merger: voting game of ") + name + " is not 0/1 valued");
    if (!is_increasing(*f)) throw Error(std::string("merger: voting game of ") + name + " is not increasing");
    if (f->at(0) != 0) throw Error(std::string("merger: empty coalition wins in ") + name);
    if (f->at(full) != 1) throw Error(std::string("merger: grand coalition loses in ") + name);
  }
}

template <Scalar T>
std::pair<SetFunction<T>, SetFunction<T>> production_factors(const TwoInputProduction<T>& sc) {
  auto first = SetFunction<T>::tabulate(sc.ground(), [&](Subset s) {
    return NumTraits<T>::pow(total_amount(sc.x(), s.mask()), sc.alpha());
  });
  auto second = SetFunction<T>::tabulate(sc.ground(), [&](Subset s) {
    return NumTraits<T>::pow(total_amount(sc.y(), s.mask()), sc.beta());
  });
  return {std::move(first), std::move(second)};
}

template <Scalar T>
T production_payoff(const TwoInputProduction<T>& sc, Subset pooled) {
  T expected = 0;
  for_each_delivery(sc.coins(), pooled, [&](Mask x_arrived, Mask y_arrived, const T& probability) {
    if (probability == 0) return;
    expected += probability * NumTraits<T>::pow(total_amount(sc.x(), x_arrived), sc.alpha()) *
                NumTraits<T>::pow(total_amount(sc.y(), y_arrived), sc.beta());
  });
  return expected;
}

template <Scalar T>
SetFunction<T> production_table(const TwoInputProduction<T>& sc) {
  return SetFunction<T>::tabulate(sc.ground(), [&](Subset s) { return production_payoff(sc, s); });
}

template <Scalar T>
MilitaryOutcomes<T> military_outcomes(const MilitaryScenario<T>& sc, Subset joint) {
  MilitaryOutcomes<T> out{T(0), T(0), T(0)};
  for_each_delivery(sc.coins(), joint, [&](Mask red_hits, Mask blue_hits, const T& probability) {
    const bool red_down = sc.red().contains(Subset(red_hits));
    const bool blue_down = sc.blue().contains(Subset(blue_hits));
    if (red_down && blue_down) {
      out.both += probability;
    } else if (!red_down && !blue_down) {
      out.neither += probability;
    } else {
      out.exactly_one += probability;
    }
  });
  return out;
}

template <Scalar T>
MilitaryTables<T> military_tables(const MilitaryScenario<T>& sc) {
  const std::size_t count = sc.ground().subset_count();
  std::vector<T> both(count), neither(count), one(count);
  for (Mask m = 0; m < count; ++m) {
    auto o = military_outcomes(sc, Subset(m));
    both[m] = o.both;
    neither[m] = o.neither;
    one[m] = o.exactly_one;
  }
  return {SetFunction<T>(sc.ground(), std::move(both)), SetFunction<T>(sc.ground(), std::move(neither)),
          SetFunction<T>(sc.ground(), std::move(one))};
}

template <Scalar T>
T merger_probability(const MergerScenario<T>& sc, Subset joint) {
  T probability_of_merger = 0;
  for_each_delivery(sc.coins(), joint, [&](Mask yes_in_a, Mask yes_in_b, const T& probability) {
    if (sc.company_a().at(yes_in_a) == 1 && sc.company_b().at(yes_in_b) == 1) probability_of_merger += probability;
  });
  return probability_of_merger;
}

template <Scalar T>
SetFunction<T> merger_table(const MergerScenario<T>& sc) {
  return SetFunction<T>::tabulate(sc.ground(), [&](Subset s) { return merger_probability(sc, s); });
}

template <Scalar T>
SetFunction<T> weighted_voting(const WeightedVotingSpec<T>& spec) {
  if (spec.weights.size() != spec.ground.size()) throw Error("weighted voting: one weight per voter required");
  std::vector<T> weights = spec.weights;
  T quota = spec.quota;
  NumTraits<T>::normalize(quota);
  T total = 0;
  for (std::size_t h = 0; h < weights.size(); ++h) {
    NumTraits<T>::normalize(weights[h]);
    if (weights[h] < 0) throw Error("weighted voting: negative weight for '" + spec.ground.label(h) + "'");
    total += weights[h];
  }
  if (!(quota > 0) || quota > total) {
    throw Error("weighted voting: quota " + NumTraits<T>::to_string(quota) + " is outside (0, " +
                NumTraits<T>::to_string(total) + "]");
  }
  return SetFunction<T>::tabulate(spec.ground, [&](Subset s) {
    return total_amount(weights, s.mask()) >= quota ? T(1) : T(0);
  });
}

template <Scalar T>
std::vector<Subset> optimal_strategies(const SetFunction<T>& payoff) {
  const auto values = payoff.values();
  const T best = *std::max_element(values.begin(), values.end());
  std::vector<Subset> out;
  for (Mask m = 0; m < values.size(); ++m) {
    if (NumTraits<T>::eq(values[m], best)) out.emplace_back(m);
  }
  return out;
}

#define RISKPOOL_INSTANTIATE(T)                                                                        \
  template class TwoInputProduction<T>;                                                                \
  template class MilitaryScenario<T>;                                                                  \
  template class MergerScenario<T>;                                                                    \
  template std::pair<SetFunction<T>, SetFunction<T>> production_factors<T>(const TwoInputProduction<T>&); \
  template T production_payoff<T>(const TwoInputProduction<T>&, Subset);                               \
  template SetFunction<T> production_table<T>(const TwoInputProduction<T>&);                           \
  template MilitaryOutcomes<T> military_outcomes<T>(const MilitaryScenario<T>&, Subset);               \
  template MilitaryTables<T> military_tables<T>(const MilitaryScenario<T>&);                           \
  template T merger_probability<T>(const MergerScenario<T>&, Subset);                                  \
  template SetFunction<T> merger_table<T>(const MergerScenario<T>&);                                   \
  template SetFunction<T> weighted_voting<T>(const WeightedVotingSpec<T>&);                            \
  template std::vector<Subset> optimal_strategies<T>(const SetFunction<T>&);

RISKPOOL_INSTANTIATE(double)
RISKPOOL_INSTANTIATE(Rational)

#undef RISKPOOL_INSTANTIATE

}  // namespace riskpool
