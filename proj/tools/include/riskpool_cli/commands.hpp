#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "riskpool_cli/config.hpp"
#include "riskpool_cli/report.hpp"

namespace riskpool::cli {

struct Options {
  std::optional<std::filesystem::path> config;
  /// Overrides the config's `mode`; exact when neither is given.
  std::optional<NumericMode> mode;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> samples;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> max_ground;
  bool csv = false;
};

inline constexpr std::uint64_t kDefaultSimulationSamples = 100'000;
inline constexpr std::uint64_t kDefaultVerifyInstances = 1000;
inline constexpr std::size_t kDefaultVerifyGround = 4;

NumericMode resolve_mode(const Config& config, const Options& options);
LoadLimits limits_from(const Options& options);

Report run_convolve(const Config& config, const Options& options);
Report run_scenario(const Config& config, const Options& options);
Report run_game_analyze(const Config& config, const Options& options);
Report run_game_simulate(const Config& config, const Options& options);
/// Randomized property suite over ground sets up to `max_ground` elements.
Report run_verify(const Options& options);

/// Parses the command line, runs the subcommand and returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riskpool::cli
