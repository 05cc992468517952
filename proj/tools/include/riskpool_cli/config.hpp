#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "riskpool/boolean_lattice.hpp"
#include "riskpool/partition_game.hpp"
#include "riskpool/scenarios.hpp"

namespace riskpool::cli {

using Json = nlohmann::json;

/// Invalid config. `where` is a JSON pointer into the config document, or
/// "line L, column C" for syntax errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(std::move(where)) {}

  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class Kind { production, military, merger, game, convolution };

std::string_view kind_name(Kind kind);
std::string_view mode_name(NumericMode mode);

/// Parsed top-level document: `kind`, optional `mode`, and the kind-specific fields.
struct Config {
  Kind kind;
  std::optional<NumericMode> mode;
  Json document;
  std::string source;
};

Config parse_config(std::string_view text, std::string source = "<config>");
Config load_config(const std::filesystem::path& path);

template <Scalar T>
struct ConvolutionInput {
  SetFunction<T> f;
  SetFunction<T> g;
  CoinVector<T> p;
};

template <Scalar T>
struct GameInput {
  GameSpec<T> spec;
  /// Profile named in the config, or the all-coarse profile.
  StrategyProfile profile;
};

/// Rejects ground sets with more than `max_ground` elements.
struct LoadLimits {
  std::size_t max_ground = kMaxGroundSize;
};

template <Scalar T>
TwoInputProduction<T> load_production(const Config& config, const LoadLimits& limits = {});

template <Scalar T>
MilitaryScenario<T> load_military(const Config& config, const LoadLimits& limits = {});

template <Scalar T>
MergerScenario<T> load_merger(const Config& config, const LoadLimits& limits = {});

template <Scalar T>
ConvolutionInput<T> load_convolution(const Config& config, const LoadLimits& limits = {});

template <Scalar T>
GameInput<T> load_game(const Config& config, const LoadLimits& limits = {});

}  // namespace riskpool::cli
