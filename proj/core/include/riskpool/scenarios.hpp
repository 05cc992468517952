#pragma once

#include <utility>
#include <vector>

#include "riskpool/boolean_lattice.hpp"

namespace riskpool {

// Strategy S pools (one shared coin) for the elements of S and acts separately
// (two independent coins) elsewhere. Payoffs below are computed by enumerating
// those coin outcomes directly; ground sets are capped at this size.
inline constexpr std::size_t kMaxScenarioGround = 10;

/// Suppliers each holding x_h and y_h units of two Cobb-Douglas inputs.
template <Scalar T>
class TwoInputProduction {
 public:
  TwoInputProduction(CoinVector<T> p, std::vector<T> x, std::vector<T> y, Rational alpha, Rational beta);

  const GroundSet& ground() const { return p_.ground(); }
  const CoinVector<T>& coins() const { return p_; }
  const std::vector<T>& x() const { return x_; }
  const std::vector<T>& y() const { return y_; }
  const Rational& alpha() const { return alpha_; }
  const Rational& beta() const { return beta_; }

 private:
  CoinVector<T> p_;
  std::vector<T> x_;
  std::vector<T> y_;
  Rational alpha_;
  Rational beta_;
};

/// Two networks with up-closed critical site families over H = H_R u H_B.
template <Scalar T>
class MilitaryScenario {
 public:
  MilitaryScenario(CoinVector<T> p, MonotoneFamily red, MonotoneFamily blue);

  const GroundSet& ground() const { return p_.ground(); }
  const CoinVector<T>& coins() const { return p_; }
  const MonotoneFamily& red() const { return red_; }
  const MonotoneFamily& blue() const { return blue_; }

 private:
  CoinVector<T> p_;
  MonotoneFamily red_;
  MonotoneFamily blue_;
};

/// Two companies with increasing 0/1 voting games; the empty coalition loses and H wins.
template <Scalar T>
class MergerScenario {
 public:
  MergerScenario(CoinVector<T> p, SetFunction<T> company_a, SetFunction<T> company_b);

  const GroundSet& ground() const { return p_.ground(); }
  const CoinVector<T>& coins() const { return p_; }
  const SetFunction<T>& company_a() const { return a_; }
  const SetFunction<T>& company_b() const { return b_; }

 private:
  CoinVector<T> p_;
  SetFunction<T> a_;
  SetFunction<T> b_;
};

template <Scalar T>
struct WeightedVotingSpec {
  GroundSet ground;
  std::vector<T> weights;
  T quota;
};

template <Scalar T>
struct MilitaryOutcomes {
  T both;          ///< Pi_2: both networks disabled
  T neither;       ///< F
  T exactly_one;   ///< G
};

template <Scalar T>
struct MilitaryTables {
  SetFunction<T> both;
  SetFunction<T> neither;
  SetFunction<T> exactly_one;
};

/// F1(T) = (sum x_h)^alpha and F2(T) = (sum y_h)^beta, with 0^alpha = 0.
template <Scalar T>
std::pair<SetFunction<T>, SetFunction<T>> production_factors(const TwoInputProduction<T>& sc);

template <Scalar T>
T production_payoff(const TwoInputProduction<T>& sc, Subset pooled);

template <Scalar T>
SetFunction<T> production_table(const TwoInputProduction<T>& sc);

template <Scalar T>
MilitaryOutcomes<T> military_outcomes(const MilitaryScenario<T>& sc, Subset joint);

template <Scalar T>
MilitaryTables<T> military_tables(const MilitaryScenario<T>& sc);

template <Scalar T>
T merger_probability(const MergerScenario<T>& sc, Subset joint);

template <Scalar T>
SetFunction<T> merger_table(const MergerScenario<T>& sc);

/// f(S) = 1 iff the weights in S reach the quota.
template <Scalar T>
SetFunction<T> weighted_voting(const WeightedVotingSpec<T>& spec);

/// Every S attaining the maximum (float mode: within 1e-9 relative of it).
template <Scalar T>
std::vector<Subset> optimal_strategies(const SetFunction<T>& payoff);

}  // namespace riskpool
