#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

#include "riskpool_cli/commands.hpp"

namespace riskpool::cli {

namespace {

struct RawOptions {
  std::string config;
  std::string mode;
  std::uint64_t seed = 1;
  std::uint64_t samples = 0;
  std::string out;
  std::size_t max_ground = 0;
  bool csv = false;
};

void add_options(CLI::App* sub, RawOptions& raw, bool needs_config, const char* samples_help) {
  auto* config = sub->add_option("--config", raw.config, "JSON config file")->check(CLI::ExistingFile);
  if (needs_config) config->required();
  sub->add_option("--mode", raw.mode, "numeric mode, overrides the config (default exact)")
      ->check(CLI::IsMember({"exact", "float"}));
  sub->add_option("--seed", raw.seed, "random seed")->capture_default_str();
  sub->add_option("--samples", raw.samples, samples_help)->check(CLI::PositiveNumber);
  sub->add_option("--out", raw.out, "write report.json (and CSV tables) into this directory");
  sub->add_option("--max-ground", raw.max_ground, "largest ground set accepted or generated")
      ->check(CLI::Range(std::size_t{1}, kMaxGroundSize));
  sub->add_flag("--csv", raw.csv, "also write one CSV file per table (requires --out)");
}

Options resolve(const RawOptions& raw, const CLI::App* sub) {
  Options o;
  if (!raw.config.empty()) o.config = raw.config;
  if (!raw.mode.empty()) o.mode = raw.mode == "exact" ? NumericMode::exact : NumericMode::floating;
  o.seed = raw.seed;
  if (sub->count("--samples")) o.samples = raw.samples;
  if (!raw.out.empty()) o.out = raw.out;
  if (sub->count("--max-ground")) o.max_ground = raw.max_ground;
  o.csv = raw.csv;
  return o;
}

int emit(const Report& report, const Options& options, std::ostream& out, std::ostream& err) {
  if (options.out) {
    for (const auto& path : report.write(*options.out, options.csv)) out << "wrote " << path.string() << "\n";
    out << "status: " << (report.passed() ? "pass" : "violation") << " (" << report.verdicts().size()
        << " verdicts)\n";
  } else {
    out << report.to_json().dump(2) << "\n";
  }
  for (const auto& v : report.verdicts()) {
    if (!v.pass) err << "violation: " << v.name << ": " << v.detail << "\n";
  }
  return report.exit_code();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and Monte Carlo analysis of risk pooling on Boolean lattices", "riskpool"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RISKPOOL_VERSION);
  RawOptions raw;

  auto* convolve = app.add_subcommand("convolve", "full convolution table with monotonicity verdicts");
  add_options(convolve, raw, true, "unused");
  auto* scenario = app.add_subcommand("scenario", "payoff tables and optimal pooling for production, military, merger");
  add_options(scenario, raw, true, "unused");
  auto* game = app.add_subcommand("game", "multi-commodity shipping game");
  game->require_subcommand(1);
  auto* analyze = game->add_subcommand("analyze", "payoffs, dominance certificates, equilibria, ex-post sweep");
  add_options(analyze, raw, true, "unused");
  auto* simulate = game->add_subcommand("simulate", "Monte Carlo payoff estimates against exact values");
  add_options(simulate, raw, true, "Monte Carlo samples per player (default 100000)");
  auto* verify = app.add_subcommand("verify", "randomized property suite");
  add_options(verify, raw, false, "random instances per property (default 1000)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  const CLI::App* leaf = convolve->parsed()   ? convolve
                         : scenario->parsed() ? scenario
                         : analyze->parsed()  ? analyze
                         : simulate->parsed() ? simulate
                                              : verify;
  const Options options = resolve(raw, leaf);
  if (options.csv && !options.out) {
    err << "error: --csv requires --out\n";
    return kExitUsage;
  }

  std::string source = options.config ? options.config->string() : "";
  try {
    if (leaf == verify) {
      if (options.config) {
        err << "error: verify takes no --config; use --samples, --max-ground, --seed and --mode\n";
        return kExitUsage;
      }
      return emit(run_verify(options), options, out, err);
    }
    const Config config = load_config(*options.config);
    Report report = leaf == convolve   ? run_convolve(config, options)
                    : leaf == scenario ? run_scenario(config, options)
                    : leaf == analyze  ? run_game_analyze(config, options)
                                       : run_game_simulate(config, options);
    return emit(report, options, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << source << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace riskpool::cli
