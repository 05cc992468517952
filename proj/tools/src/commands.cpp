#include "riskpool_cli/commands.hpp"

#include <algorithm>
#include <cmath>

#include "riskpool/convolution.hpp"
#include "riskpool/montecarlo.hpp"
#include "riskpool/scenarios.hpp"

namespace riskpool::cli {

namespace {

// Exhaustive conditioning sweeps are limited to profiles with at most this many shipments.
constexpr std::size_t kMaxExPostBlocks = 16;
// The literal double sum is checked alongside convolve up to this size.
constexpr std::size_t kBruteForceCheckGround = 8;

template <Scalar T>
Verdict monotone_verdict(std::string name, const SetFunction<T>& f, bool decreasing = false) {
  Verdict v{std::move(name), true, decreasing ? "decreasing on every covering pair" : "increasing on every covering pair", nullptr};
  if (auto cx = monotonicity_counterexample(f, decreasing)) {
    v.pass = false;
    v.detail = decreasing ? "increases on a covering pair" : "decreases on a covering pair";
    v.counterexample = std::move(*cx);
  }
  return v;
}

template <Scalar T>
Verdict full_pooling_verdict(const SetFunction<T>& payoff, const std::vector<Subset>& optimal) {
  const Subset full(payoff.ground().full_mask());
  Verdict v{"full_pooling_optimal", true, "the whole ground set attains the maximum", nullptr};
  if (std::find(optimal.begin(), optimal.end(), full) == optimal.end()) {
    v.pass = false;
    v.detail = "the whole ground set is not among the maximizers";
    v.counterexample = {{"full_set_value", to_json(payoff(full))},
                        {"maximizer", subset_json(payoff.ground(), optimal.front())},
                        {"maximum", to_json(payoff(optimal.front()))}};
  }
  return v;
}

template <Scalar T>
OrderedJson optimal_json(const GroundSet& ground, const std::vector<Subset>& optimal) {
  OrderedJson out = OrderedJson::array();
  for (Subset s : optimal) out.push_back(subset_json(ground, s));
  return out;
}

template <Scalar T>
Report convolve_impl(const Config& config, const Options& options) {
  const auto in = load_convolution<T>(config, limits_from(options));
  const GroundSet& ground = in.p.ground();
  Report report("convolve", "convolution", NumTraits<T>::mode);
  const auto table = convolve(in.f, in.g, in.p);
  report.add_table(Table::of<T>("convolution", {"value"}, {&table}));

  const bool f_inc = is_increasing(in.f);
  const bool g_inc = is_increasing(in.g);
  const T ef = expectation(in.f, in.p);
  const T eg = expectation(in.g, in.p);
  const T efg = expectation(in.f * in.g, in.p);
  const T gap = harris_gap(in.f, in.g, in.p);
  auto& res = report.results();
  res["ground"] = ground.labels();
  res["f_increasing"] = f_inc;
  res["g_increasing"] = g_inc;
  res["result_increasing"] = is_increasing(table);
  res["expectation_f"] = to_json(ef);
  res["expectation_g"] = to_json(eg);
  res["expectation_fg"] = to_json(efg);
  res["harris_gap"] = to_json(gap);

  const Subset full(ground.full_mask());
  Verdict endpoints{"endpoints", true, "value at the full set is Exp(fg), value at the empty set is Exp(f)Exp(g)", nullptr};
  if (!NumTraits<T>::eq(table(full), efg) || !NumTraits<T>::eq(table(Subset()), T(ef * eg))) {
    endpoints.pass = false;
    endpoints.detail = "endpoint identity fails";
    endpoints.counterexample = {{"value_full", to_json(table(full))},
                                {"expectation_fg", to_json(efg)},
                                {"value_empty", to_json(table(Subset()))},
                                {"product_of_expectations", to_json(T(ef * eg))}};
  }
  report.add_verdict(std::move(endpoints));

  if (ground.size() <= kBruteForceCheckGround) {
    Verdict oracle{"bruteforce_agreement", true, "matches the literal double sum at every subset", nullptr};
    for (Mask m = 0; m < ground.subset_count(); ++m) {
      const T direct = convolve_bruteforce(in.f, in.g, in.p, Subset(m));
      if (!NumTraits<T>::eq(direct, table.at(m))) {
        oracle.pass = false;
        oracle.detail = "disagrees with the literal double sum";
        oracle.counterexample = {{"set", subset_json(ground, Subset(m))},
                                 {"convolve", to_json(table.at(m))},
                                 {"bruteforce", to_json(direct)}};
        break;
      }
    }
    report.add_verdict(std::move(oracle));
  }

  if (f_inc && g_inc) {
    report.add_verdict(monotone_verdict("convolution_increasing", table));
    Verdict harris{"harris_gap_nonnegative", NumTraits<T>::geq(gap, T(0)), "Exp(fg) - Exp(f)Exp(g) >= 0", nullptr};
    if (!harris.pass) harris.counterexample = {{"harris_gap", to_json(gap)}};
    report.add_verdict(std::move(harris));
  } else {
    res["monotonicity_note"] = "f or g is not increasing; monotonicity verdicts do not apply";
  }
  return report;
}

template <Scalar T>
Report production_impl(const Config& config, const Options& options) {
  const auto sc = load_production<T>(config, limits_from(options));
  Report report("scenario", "production", NumTraits<T>::mode);
  const auto table = production_table(sc);
  const auto optimal = optimal_strategies(table);
  report.add_table(Table::of<T>("payoff", {"payoff"}, {&table}));
  auto& res = report.results();
  res["ground"] = sc.ground().labels();
  res["optimal"] = optimal_json<T>(sc.ground(), optimal);
  res["max_payoff"] = to_json(table(optimal.front()));
  report.add_verdict(monotone_verdict("payoff_increasing", table));
  report.add_verdict(full_pooling_verdict(table, optimal));
  return report;
}

template <Scalar T>
Report military_impl(const Config& config, const Options& options) {
  const auto sc = load_military<T>(config, limits_from(options));
  Report report("scenario", "military", NumTraits<T>::mode);
  const auto t = military_tables(sc);
  const auto optimal = optimal_strategies(t.both);
  report.add_table(Table::of<T>("outcomes", {"both", "neither", "exactly_one"}, {&t.both, &t.neither, &t.exactly_one}));
  auto& res = report.results();
  res["ground"] = sc.ground().labels();
  res["red_minimal_sets"] = OrderedJson::array();
  for (Subset s : sc.red().minimal_members()) res["red_minimal_sets"].push_back(subset_json(sc.ground(), s));
  res["blue_minimal_sets"] = OrderedJson::array();
  for (Subset s : sc.blue().minimal_members()) res["blue_minimal_sets"].push_back(subset_json(sc.ground(), s));
  res["optimal"] = optimal_json<T>(sc.ground(), optimal);
  res["max_both"] = to_json(t.both(optimal.front()));

  report.add_verdict(monotone_verdict("both_increasing", t.both));
  report.add_verdict(monotone_verdict("neither_increasing", t.neither));
  report.add_verdict(monotone_verdict("exactly_one_decreasing", t.exactly_one, true));
  Verdict total{"outcomes_sum_to_one", true, "both + neither + exactly_one = 1 at every subset", nullptr};
  for (Mask m = 0; m < sc.ground().subset_count(); ++m) {
    const T sum = t.both.at(m) + t.neither.at(m) + t.exactly_one.at(m);
    if (!NumTraits<T>::eq(sum, T(1))) {
      total.pass = false;
      total.detail = "outcome probabilities do not sum to one";
      total.counterexample = {{"set", subset_json(sc.ground(), Subset(m))}, {"sum", to_json(sum)}};
      break;
    }
  }
  report.add_verdict(std::move(total));
  report.add_verdict(full_pooling_verdict(t.both, optimal));
  return report;
}

template <Scalar T>
Report merger_impl(const Config& config, const Options& options) {
  const auto sc = load_merger<T>(config, limits_from(options));
  Report report("scenario", "merger", NumTraits<T>::mode);
  const auto table = merger_table(sc);
  const auto optimal = optimal_strategies(table);
  report.add_table(Table::of<T>("merger", {"merger_probability"}, {&table}));
  auto& res = report.results();
  res["ground"] = sc.ground().labels();
  res["optimal"] = optimal_json<T>(sc.ground(), optimal);
  res["max_probability"] = to_json(table(optimal.front()));
  report.add_verdict(monotone_verdict("merger_increasing", table));
  report.add_verdict(full_pooling_verdict(table, optimal));
  return report;
}

template <Scalar T>
bool strictly_positive_increasing(const GameSpec<T>& spec) {
  for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
    for (std::size_t k = 0; k < spec.commodity_count(); ++k) {
      const auto& f = spec.payoff(h, k);
      if (!is_strictly_increasing(f)) return false;
      if (!NumTraits<T>::gt(f.at(0), T(0))) return false;
    }
  }
  return true;
}

template <Scalar T>
StrategyProfile finest_profile(const GameSpec<T>& spec) {
  StrategyProfile out;
  for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
    std::vector<CommodityMask> blocks;
    for (std::size_t k = 0; k < spec.commodity_count(); ++k) {
      if ((spec.supply(h) >> k) & 1U) blocks.push_back(CommodityMask{1} << k);
    }
    out.emplace_back(h, std::move(blocks));
  }
  return out;
}

std::size_t total_blocks(const StrategyProfile& profile) {
  std::size_t n = 0;
  for (const auto& s : profile) n += s.block_count();
  return n;
}

template <Scalar T>
Report game_analyze_impl(const Config& config, const Options& options) {
  const auto in = load_game<T>(config, limits_from(options));
  const auto& spec = in.spec;
  Report report("game analyze", "game", NumTraits<T>::mode);
  auto& res = report.results();
  res["commodities"] = spec.commodities().labels();
  res["suppliers"] = spec.suppliers().labels();
  res["symmetric"] = spec.is_symmetric();
  res["profile_count"] = profile_count(spec);

  const StrategyProfile coarse = spec.coarse_profile();
  res["players"] = OrderedJson::array();
  for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
    const std::string& label = spec.suppliers().label(h);
    OrderedJson player;
    player["supplier"] = label;
    player["supply"] = commodity_set_json(spec.commodities(), spec.supply(h));
    const auto replies = best_replies(spec, coarse, h);
    player["strategies"] = OrderedJson::array();
    for (const auto& own : enumerate_partitions(h, spec.supply(h))) {
      StrategyProfile profile = coarse;
      profile[h] = own;
      OrderedJson row;
      row["blocks"] = strategy_json(spec.commodities(), own);
      row["payoff_against_coarse"] = to_json(expected_payoff(spec, profile, h));
      row["best_reply"] = std::find(replies.begin(), replies.end(), own) != replies.end();
      player["strategies"].push_back(std::move(row));
    }

    const auto cert = check_dominance(spec, h);
    player["dominance"] = {{"dominant", cert.dominant},
                           {"coarse_strictly_best", cert.coarse_strictly_best},
                           {"opponent_profiles", cert.opponent_profiles},
                           {"comparisons", cert.comparisons}};
    res["players"].push_back(std::move(player));

    Verdict v{"coarsening_dominance[" + label + "]", cert.dominant,
              "coarser shipping plans never pay less, against every opponent profile", nullptr};
    if (cert.violation) {
      const auto& bad = *cert.violation;
      v.counterexample = {{"profile", profile_json(spec, bad.profile)},
                          {"coarser", strategy_json(spec.commodities(), bad.coarser)},
                          {"finer", strategy_json(spec.commodities(), bad.finer)},
                          {"coarser_payoff", to_json(bad.coarser_payoff)},
                          {"finer_payoff", to_json(bad.finer_payoff)}};
    }
    report.add_verdict(std::move(v));
  }

  const auto nash = find_nash(spec);
  res["nash"] = OrderedJson::array();
  for (const auto& profile : nash) res["nash"].push_back(profile_json(spec, profile));
  const bool coarse_is_nash = std::find(nash.begin(), nash.end(), coarse) != nash.end();
  Verdict nash_verdict{"coarse_profile_is_nash", coarse_is_nash, "the all-coarse profile is a pure equilibrium", nullptr};
  if (!coarse_is_nash) nash_verdict.counterexample = {{"profile", profile_json(spec, coarse)}};
  report.add_verdict(std::move(nash_verdict));

  const bool strict = strictly_positive_increasing(spec);
  res["strictly_increasing_payoffs"] = strict;
  if (strict) {
    Verdict unique{"coarse_unique_nash", nash.size() == 1 && coarse_is_nash,
                   "with strictly increasing positive payoffs the all-coarse profile is the only pure equilibrium",
                   nullptr};
    if (!unique.pass) unique.counterexample = {{"equilibria", res["nash"]}};
    report.add_verdict(std::move(unique));
  }

  const StrategyProfile finest = finest_profile(spec);
  OrderedJson ex_post;
  ex_post["profile"] = profile_json(spec, finest);
  if (total_blocks(finest) > kMaxExPostBlocks) {
    ex_post["skipped"] = "more than " + std::to_string(kMaxExPostBlocks) + " shipments";
  } else {
    const auto sweep = ex_post_sweep(spec, finest);
    ex_post["realizations"] = sweep.realizations;
    ex_post["merge_worse"] = sweep.merge_worse;
    ex_post["identity_mismatch"] = sweep.identity_mismatch;
    Verdict v{"ex_post_optimality", sweep.merge_worse == 0 && sweep.identity_mismatch == 0,
              "merging two shipments never lowers the conditional payoff and the gain is p(1-p)(a1-a0)(b1-b0)c",
              nullptr};
    if (sweep.first_failure) {
      const auto& f = *sweep.first_failure;
      v.counterexample = {{"separate", to_json(f.separate)}, {"merged", to_json(f.merged)}, {"a0", to_json(f.a0)},
                          {"a1", to_json(f.a1)},             {"b0", to_json(f.b0)},         {"b1", to_json(f.b1)},
                          {"c", to_json(f.c)}};
    }
    report.add_verdict(std::move(v));
  }
  res["ex_post"] = std::move(ex_post);

  if (spec.is_symmetric() && total_blocks(finest) <= kMaxOutcomeBlocks) {
    const T coarse_output = expected_output(spec, coarse);
    const T finest_output = expected_output(spec, finest);
    res["principal"] = {{"coarse", to_json(coarse_output)}, {"finest", to_json(finest_output)}};
    Verdict v{"principal_prefers_coarse", NumTraits<T>::geq(coarse_output, finest_output),
              "expected output of the all-coarse profile is at least that of the finest profile", nullptr};
    if (!v.pass) v.counterexample = res["principal"];
    report.add_verdict(std::move(v));
  }
  return report;
}

template <Scalar T>
Report game_simulate_impl(const Config& config, const Options& options) {
  const auto in = load_game<T>(config, limits_from(options));
  const auto& spec = in.spec;
  const std::uint64_t samples = options.samples.value_or(kDefaultSimulationSamples);
  Report report("game simulate", "game", NumTraits<T>::mode);
  report.set_seed(options.seed);
  auto& res = report.results();
  res["profile"] = profile_json(spec, in.profile);
  res["samples"] = samples;
  const bool exact_available = total_blocks(in.profile) <= kMaxOutcomeBlocks;
  res["players"] = OrderedJson::array();
  for (std::size_t h = 0; h < spec.supplier_count(); ++h) {
    const std::string& label = spec.suppliers().label(h);
    // Each player gets its own substream family so estimates are independent of player order.
    const auto est = estimate_payoff(spec, in.profile, h, samples, substream_seed(options.seed, ~std::uint64_t{h}));
    OrderedJson row;
    row["supplier"] = label;
    row["estimate"] = est.mean;
    row["std_error"] = est.std_error;
    if (exact_available) {
      const T exact = expected_payoff(spec, in.profile, h);
      const double deviation = std::abs(est.mean - NumTraits<T>::to_double(exact));
      row["exact"] = to_json(exact);
      row["deviation"] = deviation;
      const bool ok = deviation <= 4 * est.std_error + kAbsTol;
      Verdict v{"monte_carlo_consistent[" + label + "]", ok, "|estimate - exact| <= 4 standard errors", nullptr};
      if (!ok) v.counterexample = {{"estimate", est.mean}, {"std_error", est.std_error}, {"exact", to_json(exact)}};
      report.add_verdict(std::move(v));
    } else {
      row["exact"] = nullptr;
    }
    res["players"].push_back(std::move(row));
  }
  return report;
}

}  // namespace

NumericMode resolve_mode(const Config& config, const Options& options) {
  if (options.mode) return *options.mode;
  return config.mode.value_or(NumericMode::exact);
}

LoadLimits limits_from(const Options& options) {
  LoadLimits limits;
  if (options.max_ground) limits.max_ground = *options.max_ground;
  return limits;
}

Report run_convolve(const Config& config, const Options& options) {
  if (config.kind != Kind::convolution) {
    throw ConfigError("/kind", "convolve expects kind 'convolution', found '" + std::string(kind_name(config.kind)) + "'");
  }
  return resolve_mode(config, options) == NumericMode::exact ? convolve_impl<Rational>(config, options)
                                                             : convolve_impl<double>(config, options);
}

Report run_scenario(const Config& config, const Options& options) {
  const bool exact = resolve_mode(config, options) == NumericMode::exact;
  switch (config.kind) {
    case Kind::production:
      return exact ? production_impl<Rational>(config, options) : production_impl<double>(config, options);
    case Kind::military:
      return exact ? military_impl<Rational>(config, options) : military_impl<double>(config, options);
    case Kind::merger:
      return exact ? merger_impl<Rational>(config, options) : merger_impl<double>(config, options);
    default:
      throw ConfigError("/kind", "scenario expects kind 'production', 'military' or 'merger', found '" +
                                     std::string(kind_name(config.kind)) + "'");
  }
}

Report run_game_analyze(const Config& config, const Options& options) {
  if (config.kind != Kind::game) {
    throw ConfigError("/kind", "game analyze expects kind 'game', found '" + std::string(kind_name(config.kind)) + "'");
  }
  return resolve_mode(config, options) == NumericMode::exact ? game_analyze_impl<Rational>(config, options)
                                                             : game_analyze_impl<double>(config, options);
}

Report run_game_simulate(const Config& config, const Options& options) {
  if (config.kind != Kind::game) {
    throw ConfigError("/kind", "game simulate expects kind 'game', found '" + std::string(kind_name(config.kind)) + "'");
  }
  return resolve_mode(config, options) == NumericMode::exact ? game_simulate_impl<Rational>(config, options)
                                                             : game_simulate_impl<double>(config, options);
}

}  // namespace riskpool::cli
