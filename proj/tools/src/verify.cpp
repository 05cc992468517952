#include <algorithm>
#include <random>

#include "riskpool/convolution.hpp"
#include "riskpool/montecarlo.hpp"
#include "riskpool/scenarios.hpp"
#include "riskpool_cli/commands.hpp"

namespace riskpool::cli {

namespace {

constexpr std::size_t kVerifyConvolveCap = 10;
constexpr std::size_t kVerifyBruteForceCap = 8;
constexpr std::size_t kVerifyScenarioCap = 6;
constexpr std::size_t kVerifyCommodities = 3;
constexpr std::size_t kVerifySuppliers = 3;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_); }
  std::uint64_t raw() { return engine_(); }

  template <Scalar T>
  T probability() {
    if constexpr (NumTraits<T>::mode == NumericMode::exact) {
      return ratio(static_cast<long>(index(0, 8)), 8);
    } else {
      return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }
  }

  template <Scalar T>
  CoinVector<T> coins(const GroundSet& ground) {
    std::vector<T> p;
    for (std::size_t i = 0; i < ground.size(); ++i) p.push_back(probability<T>());
    return CoinVector<T>(ground, std::move(p));
  }

  template <Scalar T>
  SetFunction<T> increasing(const GroundSet& ground) {
    return random_increasing<T>(raw(), ground, index(0, 2 * ground.size() + 2));
  }

  template <Scalar T>
  SetFunction<T> arbitrary(const GroundSet& ground) {
    return SetFunction<T>::tabulate(ground, [&](Subset) -> T {
      if constexpr (NumTraits<T>::mode == NumericMode::exact) {
        return ratio(static_cast<long>(index(0, 40)) - 20, static_cast<long>(index(1, 6)));
      } else {
        return std::uniform_real_distribution<double>(-5.0, 5.0)(engine_);
      }
    });
  }

  Subset subset(const GroundSet& ground) { return Subset(static_cast<Mask>(index(0, ground.subset_count() - 1))); }

 private:
  Engine engine_;
};

template <Scalar T>
OrderedJson values_json(const SetFunction<T>& f) {
  OrderedJson values = OrderedJson::array();
  for (const auto& v : f.values()) values.push_back(to_json(v));
  return {{"values", values}};
}

template <Scalar T>
OrderedJson coins_json(const CoinVector<T>& p) {
  OrderedJson out = OrderedJson::array();
  for (const auto& v : p.probabilities()) out.push_back(to_json(v));
  return out;
}

/// A config that reproduces a convolution instance with `riskpool convolve`.
template <Scalar T>
OrderedJson convolution_config(const SetFunction<T>& f, const SetFunction<T>& g, const CoinVector<T>& p) {
  return {{"kind", "convolution"},
          {"mode", NumTraits<T>::mode == NumericMode::exact ? "exact" : "float"},
          {"ground", p.ground().labels()},
          {"p", coins_json(p)},
          {"f", values_json(f)},
          {"g", values_json(g)}};
}

struct Tally {
  std::string name;
  std::string detail;
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  OrderedJson counterexample = nullptr;

  template <class Make>
  void record(bool ok, Make&& make) {
    ++checked;
    if (ok) return;
    if (failed++ == 0) counterexample = make();
  }

  Verdict verdict() const {
    Verdict v{name, failed == 0, detail + "; " + std::to_string(checked) + " checks, " + std::to_string(failed) + " failures",
              counterexample};
    return v;
  }
};

template <Scalar T>
std::optional<OrderedJson> check_increasing(const SetFunction<T>& f, bool decreasing = false) {
  return monotonicity_counterexample(f, decreasing);
}

GroundSet sized_ground(Sampler& s, std::size_t cap) { return GroundSet::indexed(s.index(1, cap)); }

template <Scalar T>
void convolution_properties(Sampler& s, std::uint64_t instances, std::size_t max_ground, Report& report) {
  Tally monotone{"convolution_increasing", "f*g increasing for increasing f, g"};
  Tally harris{"harris_gap_nonnegative", "Exp(fg) >= Exp(f)Exp(g) for increasing f, g"};
  Tally endpoints{"endpoints", "(f*g)(H) = Exp(fg) and (f*g)(empty) = Exp(f)Exp(g)"};
  Tally oracle{"bruteforce_agreement", "convolve equals the literal double sum at every subset"};
  Tally identity{"single_element_identity", "c' - c = p(1-p)(a'-a)(b'-b) on one element"};
  Tally refinement{"refinement_monotone", "E_F(coarse) >= E_F(fine) for nonnegative increasing families"};

  for (std::uint64_t i = 0; i < instances; ++i) {
    {
      const GroundSet ground = sized_ground(s, std::min(max_ground, kVerifyConvolveCap));
      const auto f = s.increasing<T>(ground);
      const auto g = s.increasing<T>(ground);
      const auto p = s.coins<T>(ground);
      const auto table = convolve(f, g, p);
      auto cx = check_increasing(table);
      monotone.record(!cx, [&] { return OrderedJson{{"config", convolution_config(f, g, p)}, {"pair", *cx}}; });
      const T gap = harris_gap(f, g, p);
      harris.record(NumTraits<T>::geq(gap, T(0)), [&] {
        return OrderedJson{{"config", convolution_config(f, g, p)}, {"harris_gap", to_json(gap)}};
      });
    }
    {
      const GroundSet ground = sized_ground(s, std::min(max_ground, kVerifyBruteForceCap));
      const auto f = s.arbitrary<T>(ground);
      const auto g = s.arbitrary<T>(ground);
      const auto p = s.coins<T>(ground);
      const auto table = convolve(f, g, p);
      const T ef = expectation(f, p);
      const T eg = expectation(g, p);
      const T efg = expectation(f * g, p);
      const bool ends = NumTraits<T>::eq(table(Subset(ground.full_mask())), efg) &&
                        NumTraits<T>::eq(table(Subset()), T(ef * eg));
      endpoints.record(ends, [&] { return OrderedJson{{"config", convolution_config(f, g, p)}}; });
      const Subset at = s.subset(ground);
      const T direct = convolve_bruteforce(f, g, p, at);
      oracle.record(NumTraits<T>::eq(direct, table(at)), [&] {
        return OrderedJson{{"config", convolution_config(f, g, p)},
                           {"set", subset_json(ground, at)},
                           {"convolve", to_json(table(at))},
                           {"bruteforce", to_json(direct)}};
      });
    }
    {
      const GroundSet one = GroundSet::indexed(1);
      const auto f = s.arbitrary<T>(one);
      const auto g = s.arbitrary<T>(one);
      const auto p = s.coins<T>(one);
      const auto table = convolve(f, g, p);
      const T q = p[0];
      const T predicted = q * (1 - q) * (f.at(1) - f.at(0)) * (g.at(1) - g.at(0));
      const T actual = table.at(1) - table.at(0);
      identity.record(NumTraits<T>::eq(actual, predicted), [&] {
        return OrderedJson{{"config", convolution_config(f, g, p)},
                           {"difference", to_json(actual)},
                           {"predicted", to_json(predicted)}};
      });
    }
    {
      const GroundSet ground = sized_ground(s, std::min(max_ground, kVerifyConvolveCap));
      const auto p = s.coins<T>(ground);
      std::vector<SetFunction<T>> fns;
      for (int k = 0; k < 3; ++k) fns.push_back(s.increasing<T>(ground));
      const IndexedFamily<T> family(fns);
      const auto partitions = all_index_partitions(family.size());
      std::vector<T> values;
      for (const auto& pi : partitions) values.push_back(partition_expectation(family, pi, p));
      bool ok = true;
      std::size_t bad_fine = 0, bad_coarse = 0;
      for (std::size_t a = 0; a < partitions.size() && ok; ++a) {
        for (std::size_t b = 0; b < partitions.size() && ok; ++b) {
          if (refines(partitions[a], partitions[b]) && !NumTraits<T>::geq(values[b], values[a])) {
            ok = false;
            bad_fine = a;
            bad_coarse = b;
          }
        }
      }
      refinement.record(ok, [&] {
        OrderedJson fj = OrderedJson::array();
        for (const auto& f : fns) fj.push_back(values_json(f));
        return OrderedJson{{"ground", ground.labels()},
                           {"p", coins_json(p)},
                           {"functions", fj},
                           {"fine_blocks", partitions[bad_fine].blocks()},
                           {"coarse_blocks", partitions[bad_coarse].blocks()},
                           {"fine_value", to_json(values[bad_fine])},
                           {"coarse_value", to_json(values[bad_coarse])}};
      });
    }
  }
  for (const auto* t : {&monotone, &harris, &endpoints, &oracle, &identity, &refinement}) {
    report.add_verdict(t->verdict());
  }
}

template <Scalar T>
bool full_set_optimal(const SetFunction<T>& f) {
  const auto optimal = optimal_strategies(f);
  return std::find(optimal.begin(), optimal.end(), Subset(f.ground().full_mask())) != optimal.end();
}

template <Scalar T>
void scenario_properties(Sampler& s, std::uint64_t instances, std::size_t max_ground, Report& report) {
  Tally production{"production_increasing_and_pooled", "production payoff increasing, maximized by pooling all suppliers"};
  Tally military{"military_outcomes", "both and neither increasing, exactly_one decreasing, sum one, pooling optimal"};
  Tally merger{"merger_increasing_and_pooled", "merger probability increasing, maximized by pooling all members"};
  const std::size_t cap = std::min(max_ground, kVerifyScenarioCap);

  for (std::uint64_t i = 0; i < instances; ++i) {
    {
      const GroundSet ground = sized_ground(s, cap);
      std::vector<T> x, y;
      for (std::size_t h = 0; h < ground.size(); ++h) {
        x.push_back(T(static_cast<long>(s.index(0, 5))));
        y.push_back(T(static_cast<long>(s.index(0, 5))));
      }
      Rational alpha, beta;
      if constexpr (NumTraits<T>::mode == NumericMode::exact) {
        alpha = static_cast<long>(s.index(1, 2));
        beta = static_cast<long>(s.index(1, 2));
      } else {
        alpha = ratio(static_cast<long>(s.index(1, 20)), 10);
        beta = ratio(static_cast<long>(s.index(1, 20)), 10);
      }
      const TwoInputProduction<T> sc(s.coins<T>(ground), x, y, alpha, beta);
      const auto table = production_table(sc);
      const auto cx = check_increasing(table);
      production.record(!cx && full_set_optimal(table), [&] {
        return OrderedJson{{"ground", ground.labels()},
                           {"p", coins_json(sc.coins())},
                           {"alpha", format_rational(alpha)},
                           {"beta", format_rational(beta)},
                           {"payoff", values_json(table)}};
      });
    }
    {
      const GroundSet ground = sized_ground(s, cap);
      auto family = [&] {
        std::vector<Subset> seeds;
        const std::size_t count = s.index(0, 3);
        for (std::size_t k = 0; k < count; ++k) seeds.push_back(s.subset(ground));
        return up_closure(ground, seeds);
      };
      const MilitaryScenario<T> sc(s.coins<T>(ground), family(), family());
      const auto t = military_tables(sc);
      bool ok = !check_increasing(t.both) && !check_increasing(t.neither) && !check_increasing(t.exactly_one, true) &&
                full_set_optimal(t.both);
      for (Mask m = 0; m < ground.subset_count() && ok; ++m) {
        ok = NumTraits<T>::eq(T(t.both.at(m) + t.neither.at(m) + t.exactly_one.at(m)), T(1));
      }
      military.record(ok, [&] {
        auto minimal = [&](const MonotoneFamily& f) {
          OrderedJson out = OrderedJson::array();
          for (Subset m : f.minimal_members()) out.push_back(subset_json(ground, m));
          return out;
        };
        return OrderedJson{{"ground", ground.labels()},
                           {"p", coins_json(sc.coins())},
                           {"red_minimal_sets", minimal(sc.red())},
                           {"blue_minimal_sets", minimal(sc.blue())}};
      });
    }
    {
      const GroundSet ground = sized_ground(s, cap);
      auto vote = [&] {
        std::vector<T> weights;
        long total = 0;
        for (std::size_t h = 0; h < ground.size(); ++h) {
          const long w = static_cast<long>(s.index(1, 5));
          weights.push_back(T(w));
          total += w;
        }
        const T quota(static_cast<long>(s.index(1, static_cast<std::size_t>(total))));
        return weighted_voting(WeightedVotingSpec<T>{ground, weights, quota});
      };
      const MergerScenario<T> sc(s.coins<T>(ground), vote(), vote());
      const auto table = merger_table(sc);
      merger.record(!check_increasing(table) && full_set_optimal(table), [&] {
        return OrderedJson{{"ground", ground.labels()},
                           {"p", coins_json(sc.coins())},
                           {"company_a", values_json(sc.company_a())},
                           {"company_b", values_json(sc.company_b())}};
      });
    }
  }
  for (const auto* t : {&production, &military, &merger}) report.add_verdict(t->verdict());
}

template <Scalar T>
GameSpec<T> random_game(Sampler& s, std::size_t max_suppliers, bool strict) {
  const std::size_t nk = s.index(1, kVerifyCommodities);
  const std::size_t nh = s.index(1, max_suppliers);
  const GroundSet commodities = GroundSet::indexed(nk);
  std::vector<std::string> labels;
  for (std::size_t h = 0; h < nh; ++h) labels.push_back("s" + std::to_string(h + 1));
  const GroundSet suppliers(labels);
  std::vector<T> p;
  for (std::size_t h = 0; h < nh; ++h) {
    p.push_back(NumTraits<T>::from_rational(ratio(static_cast<long>(s.index(1, 3)), 4)));
  }
  std::vector<CommodityMask> supply;
  for (std::size_t h = 0; h < nh; ++h) supply.push_back(static_cast<CommodityMask>(s.index(0, (1U << nk) - 1)));
  std::vector<std::vector<SetFunction<T>>> payoffs(nh);
  for (std::size_t h = 0; h < nh; ++h) {
    for (std::size_t k = 0; k < nk; ++k) {
      auto f = s.increasing<T>(suppliers);
      if (strict) {
        f = f + SetFunction<T>::tabulate(suppliers, [](Subset x) { return T(1 + static_cast<long>(x.size())); });
      }
      payoffs[h].push_back(std::move(f));
    }
  }
  return GameSpec<T>(commodities, CoinVector<T>(suppliers, std::move(p)), std::move(supply), std::move(payoffs));
}

template <Scalar T>
OrderedJson game_config(const GameSpec<T>& spec) {
  OrderedJson supply = OrderedJson::object();
  OrderedJson per = OrderedJson::object();
  for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
    const std::string& label = spec.suppliers().label(h);
    supply[label] = commodity_set_json(spec.commodities(), spec.supply(h));
    OrderedJson fns = OrderedJson::object();
    for (std::size_t k = 0; k < spec.commodity_count(); ++k) {
      fns[spec.commodities().label(k)] = values_json(spec.payoff(h, k));
    }
    per[label] = std::move(fns);
  }
  return {{"kind", "game"},
          {"mode", NumTraits<T>::mode == NumericMode::exact ? "exact" : "float"},
          {"commodities", spec.commodities().labels()},
          {"suppliers", spec.suppliers().labels()},
          {"p", coins_json(spec.coins())},
          {"supply", supply},
          {"payoffs", {{"per_supplier", per}}}};
}

template <Scalar T>
void game_properties(Sampler& s, std::uint64_t instances, std::size_t max_ground, Report& report) {
  Tally dominance{"coarsening_dominance", "coarser shipping plans never pay less, for every player"};
  Tally nash{"coarse_profile_is_nash", "the all-coarse profile is a pure equilibrium"};
  Tally unique{"coarse_unique_nash", "with strictly increasing positive payoffs it is the only one"};
  Tally ex_post{"ex_post_optimality", "merging two shipments never lowers the conditional payoff; gain matches the identity"};
  Tally scaling{"scaling_invariance", "best replies and equilibria unchanged by positive payoff scaling"};
  const std::size_t max_suppliers = std::min(max_ground, kVerifySuppliers);

  for (std::uint64_t i = 0; i < instances; ++i) {
    const bool strict = i % 2 == 1;
    const auto spec = random_game<T>(s, max_suppliers, strict);
    const auto coarse = spec.coarse_profile();
    for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
      const auto cert = check_dominance(spec, h);
      dominance.record(cert.dominant, [&] {
        return OrderedJson{{"config", game_config(spec)}, {"player", spec.suppliers().label(h)}};
      });
    }
    const auto equilibria = find_nash(spec);
    const bool coarse_nash = std::find(equilibria.begin(), equilibria.end(), coarse) != equilibria.end();
    nash.record(coarse_nash, [&] { return OrderedJson{{"config", game_config(spec)}}; });
    if (strict) {
      unique.record(coarse_nash && equilibria.size() == 1, [&] {
        OrderedJson list = OrderedJson::array();
        for (const auto& e : equilibria) list.push_back(profile_json(spec, e));
        return OrderedJson{{"config", game_config(spec)}, {"equilibria", list}};
      });
    }

    StrategyProfile finest;
    for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
      std::vector<CommodityMask> blocks;
      for (std::size_t k = 0; k < spec.commodity_count(); ++k) {
        if ((spec.supply(h) >> k) & 1U) blocks.push_back(CommodityMask{1} << k);
      }
      finest.emplace_back(h, std::move(blocks));
    }
    const auto sweep = ex_post_sweep(spec, finest);
    ex_post.record(sweep.merge_worse == 0 && sweep.identity_mismatch == 0, [&] {
      return OrderedJson{{"config", game_config(spec)},
                         {"merge_worse", sweep.merge_worse},
                         {"identity_mismatch", sweep.identity_mismatch}};
    });

    std::vector<T> kappa;
    for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
      kappa.push_back(NumTraits<T>::from_rational(ratio(static_cast<long>(s.index(1, 10000)), 1000)));
    }
    const auto scaled = scaled_spec(spec, kappa);
    bool same = find_nash(scaled) == equilibria;
    for (std::size_t h = 0; h < spec.supplier_count() && same; ++h) {
      same = best_replies(scaled, coarse, h) == best_replies(spec, coarse, h);
    }
    scaling.record(same, [&] {
      OrderedJson kj = OrderedJson::array();
      for (const auto& k : kappa) kj.push_back(to_json(k));
      return OrderedJson{{"config", game_config(spec)}, {"kappa", kj}};
    });
  }
  for (const auto* t : {&dominance, &nash, &unique, &ex_post, &scaling}) report.add_verdict(t->verdict());
}

template <Scalar T>
Report verify_impl(const Options& options) {
  const std::uint64_t instances = options.samples.value_or(kDefaultVerifyInstances);
  const std::size_t max_ground = options.max_ground.value_or(kDefaultVerifyGround);
  Report report("verify", std::nullopt, NumTraits<T>::mode);
  report.set_seed(options.seed);
  report.results()["instances"] = instances;
  report.results()["max_ground"] = max_ground;
  // Independent streams per property group keep each group's instances fixed when another changes.
  Sampler convolution(substream_seed(options.seed, 0));
  Sampler scenarios(substream_seed(options.seed, 1));
  Sampler games(substream_seed(options.seed, 2));
  convolution_properties<T>(convolution, instances, max_ground, report);
  scenario_properties<T>(scenarios, instances, max_ground, report);
  game_properties<T>(games, instances, max_ground, report);
  return report;
}

}  // namespace

Report run_verify(const Options& options) {
  const NumericMode mode = options.mode.value_or(NumericMode::exact);
  return mode == NumericMode::exact ? verify_impl<Rational>(options) : verify_impl<double>(options);
}

}  // namespace riskpool::cli
