#include "riskpool_cli/config.hpp"

#include "riskpool/convolution.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace riskpool::cli {

namespace {

std::string child(const std::string& ptr, std::string_view key) {
  std::string out = ptr + "/";
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

std::string display(const std::string& ptr) { return ptr.empty() ? "(document root)" : ptr; }

[[noreturn]] void fail(const std::string& ptr, const std::string& message) {
  throw ConfigError(display(ptr), message);
}

/// Runs `fn`, reporting library validation errors against `ptr`.
template <class Fn>
auto at(const std::string& ptr, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    fail(ptr, e.what());
  }
}

const char* type_name(const Json& j) { return j.type_name(); }

void expect_object(const Json& j, const std::string& ptr) {
  if (!j.is_object()) fail(ptr, std::string("expected an object, found ") + type_name(j));
}

void expect_array(const Json& j, const std::string& ptr) {
  if (!j.is_array()) fail(ptr, std::string("expected an array, found ") + type_name(j));
}

std::string expect_string(const Json& j, const std::string& ptr) {
  if (!j.is_string()) fail(ptr, std::string("expected a string, found ") + type_name(j));
  return j.get<std::string>();
}

void check_keys(const Json& obj, const std::string& ptr, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) fail(child(ptr, key), "unknown field '" + key + "'");
  }
}

const Json& require(const Json& obj, const std::string& ptr, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ptr, std::string("missing required field '") + key + "'");
  return *it;
}

Rational load_rational(const Json& j, const std::string& ptr) {
  if (j.is_number()) return at(ptr, [&] { return parse_rational(j.dump()); });
  if (j.is_string()) return at(ptr, [&] { return parse_rational(j.get<std::string>()); });
  fail(ptr, std::string("expected a number or a \"num/den\" string, found ") + type_name(j));
}

template <Scalar T>
T load_number(const Json& j, const std::string& ptr) {
  return NumTraits<T>::from_rational(load_rational(j, ptr));
}

std::uint64_t load_u64(const Json& j, const std::string& ptr) {
  if (!j.is_number_unsigned()) fail(ptr, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

bool load_bool(const Json& j, const std::string& ptr) {
  if (!j.is_boolean()) fail(ptr, std::string("expected true or false, found ") + type_name(j));
  return j.get<bool>();
}

/// Labels must survive CSV export keyed by ';'-joined names.
void check_label(const std::string& label, const std::string& ptr) {
  if (label.empty()) fail(ptr, "labels must be nonempty");
  if (label.find_first_of(";,\"\n\r") != std::string::npos) {
    fail(ptr, "labels may not contain ';', ',', '\"' or line breaks");
  }
}

GroundSet load_ground(const Json& j, const std::string& ptr, std::size_t cap, const char* what) {
  std::vector<std::string> labels;
  if (j.is_number_unsigned()) {
    const auto n = j.get<std::uint64_t>();
    if (n > cap) fail(ptr, std::string(what) + " has " + std::to_string(n) + " elements; the cap is " + std::to_string(cap));
    return GroundSet::indexed(static_cast<std::size_t>(n));
  }
  expect_array(j, ptr);
  for (std::size_t i = 0; i < j.size(); ++i) {
    labels.push_back(expect_string(j[i], child(ptr, i)));
    check_label(labels.back(), child(ptr, i));
  }
  if (labels.size() > cap) {
    fail(ptr, std::string(what) + " has " + std::to_string(labels.size()) + " elements; the cap is " +
                  std::to_string(cap));
  }
  return at(ptr, [&] { return GroundSet(std::move(labels)); });
}

std::size_t load_label(const GroundSet& ground, const Json& j, const std::string& ptr) {
  const std::string label = expect_string(j, ptr);
  auto index = ground.index_of(label);
  if (!index) fail(ptr, "unknown element '" + label + "'");
  return *index;
}

Subset load_subset(const GroundSet& ground, const Json& j, const std::string& ptr) {
  expect_array(j, ptr);
  Subset s;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::size_t e = load_label(ground, j[i], child(ptr, i));
    if (s.contains(e)) fail(child(ptr, i), "element '" + ground.label(e) + "' listed twice");
    s = s.with(e);
  }
  return s;
}

/// One value per element: a scalar (same for all), an array in label order, or an object keyed by label.
template <Scalar T>
std::vector<T> load_per_element(const GroundSet& ground, const Json& j, const std::string& ptr) {
  std::vector<T> out;
  if (j.is_number() || j.is_string()) {
    out.assign(ground.size(), load_number<T>(j, ptr));
  } else if (j.is_array()) {
    if (j.size() != ground.size()) {
      fail(ptr, "expected " + std::to_string(ground.size()) + " values, found " + std::to_string(j.size()));
    }
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(load_number<T>(j[i], child(ptr, i)));
  } else if (j.is_object()) {
    std::vector<std::optional<T>> slots(ground.size());
    for (const auto& [key, value] : j.items()) {
      auto index = ground.index_of(key);
      if (!index) fail(child(ptr, key), "unknown element '" + key + "'");
      slots[*index] = load_number<T>(value, child(ptr, key));
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i]) fail(ptr, "missing value for '" + ground.label(i) + "'");
      out.push_back(*slots[i]);
    }
  } else {
    fail(ptr, std::string("expected a number, an array or an object, found ") + type_name(j));
  }
  return out;
}

template <Scalar T>
CoinVector<T> load_coins(const GroundSet& ground, const Json& j, const std::string& ptr) {
  auto p = load_per_element<T>(ground, j, ptr);
  return at(ptr, [&] { return CoinVector<T>(ground, std::move(p)); });
}

MonotoneFamily load_family(const GroundSet& ground, const Json& j, const std::string& ptr) {
  expect_object(j, ptr);
  check_keys(j, ptr, {"members", "up_close"});
  const std::string members_ptr = child(ptr, "members");
  const Json& members = require(j, ptr, "members");
  expect_array(members, members_ptr);
  std::vector<Subset> seeds;
  for (std::size_t i = 0; i < members.size(); ++i) {
    seeds.push_back(load_subset(ground, members[i], child(members_ptr, i)));
  }
  const bool close = j.contains("up_close") && load_bool(j["up_close"], child(ptr, "up_close"));
  if (close) return at(ptr, [&] { return up_closure(ground, seeds); });

  std::vector<bool> member(ground.subset_count(), false);
  for (Subset s : seeds) member[s.mask()] = true;
  for (Subset s : seeds) {
    for (std::size_t h = 0; h < ground.size(); ++h) {
      if (!s.contains(h) && !member[s.with(h).mask()]) {
        fail(members_ptr, "family is not up-closed: " + format_subset(ground, s) + " is a member but " +
                              format_subset(ground, s.with(h)) +
                              " is not; list it or set \"up_close\": true");
      }
    }
  }
  return at(ptr, [&] { return MonotoneFamily(ground, std::move(member)); });
}

template <Scalar T>
SetFunction<T> load_function(const GroundSet& ground, const Json& j, const std::string& ptr) {
  expect_object(j, ptr);
  if (j.size() != 1) {
    fail(ptr, "a function is an object with exactly one of 'values', 'table', 'constant', 'indicator', "
              "'additive_power', 'weighted_vote', 'random_increasing'");
  }
  const auto first = j.begin();
  const std::string form = first.key();
  const Json& body = first.value();
  const std::string body_ptr = child(ptr, form);

  if (form == "values") {
    expect_array(body, body_ptr);
    if (body.size() != ground.subset_count()) {
      fail(body_ptr, "expected " + std::to_string(ground.subset_count()) + " values indexed by subset mask, found " +
                         std::to_string(body.size()));
    }
    std::vector<T> values;
    for (std::size_t i = 0; i < body.size(); ++i) values.push_back(load_number<T>(body[i], child(body_ptr, i)));
    return at(ptr, [&] { return SetFunction<T>(ground, std::move(values)); });
  }
  if (form == "table") {
    expect_array(body, body_ptr);
    std::vector<std::optional<T>> slots(ground.subset_count());
    for (std::size_t i = 0; i < body.size(); ++i) {
      const std::string row_ptr = child(body_ptr, i);
      expect_object(body[i], row_ptr);
      check_keys(body[i], row_ptr, {"set", "value"});
      const Subset s = load_subset(ground, require(body[i], row_ptr, "set"), child(row_ptr, "set"));
      if (slots[s.mask()]) fail(row_ptr, "subset " + format_subset(ground, s) + " listed twice");
      slots[s.mask()] = load_number<T>(require(body[i], row_ptr, "value"), child(row_ptr, "value"));
    }
    std::vector<T> values;
    for (Mask m = 0; m < slots.size(); ++m) {
      if (!slots[m]) fail(body_ptr, "no value for subset " + format_subset(ground, Subset(m)));
      values.push_back(*slots[m]);
    }
    return at(ptr, [&] { return SetFunction<T>(ground, std::move(values)); });
  }
  if (form == "constant") {
    const T value = load_number<T>(body, body_ptr);
    return at(ptr, [&] { return SetFunction<T>::constant(ground, value); });
  }
  if (form == "indicator") {
    return indicator<T>(load_family(ground, body, body_ptr));
  }
  if (form == "additive_power") {
    expect_object(body, body_ptr);
    check_keys(body, body_ptr, {"weights", "exponent"});
    const auto weights = load_per_element<T>(ground, require(body, body_ptr, "weights"), child(body_ptr, "weights"));
    const Rational exponent = load_rational(require(body, body_ptr, "exponent"), child(body_ptr, "exponent"));
    if (exponent < 0) fail(child(body_ptr, "exponent"), "exponent must be nonnegative");
    return at(body_ptr, [&] {
      return SetFunction<T>::tabulate(ground, [&](Subset s) {
        T total = 0;
        for (std::size_t h = 0; h < ground.size(); ++h) {
          if (s.contains(h)) total += weights[h];
        }
        return NumTraits<T>::pow(total, exponent);
      });
    });
  }
  if (form == "weighted_vote") {
    expect_object(body, body_ptr);
    check_keys(body, body_ptr, {"weights", "quota"});
    WeightedVotingSpec<T> spec{ground,
                               load_per_element<T>(ground, require(body, body_ptr, "weights"), child(body_ptr, "weights")),
                               load_number<T>(require(body, body_ptr, "quota"), child(body_ptr, "quota"))};
    return at(body_ptr, [&] { return weighted_voting(spec); });
  }
  if (form == "random_increasing") {
    expect_object(body, body_ptr);
    check_keys(body, body_ptr, {"seed", "weights"});
    const auto seed = load_u64(require(body, body_ptr, "seed"), child(body_ptr, "seed"));
    const auto count = load_u64(require(body, body_ptr, "weights"), child(body_ptr, "weights"));
    if (count > 4096) fail(child(body_ptr, "weights"), "at most 4096 weights");
    return at(body_ptr, [&] { return random_increasing<T>(seed, ground, static_cast<std::size_t>(count)); });
  }
  fail(child(ptr, form), "unknown function form '" + form + "'");
}

void check_kind_keys(const Config& config, std::initializer_list<std::string_view> fields) {
  std::vector<std::string_view> allowed{"kind", "mode", "description"};
  allowed.insert(allowed.end(), fields.begin(), fields.end());
  for (const auto& [key, value] : config.document.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(child("", key), "unknown field '" + key + "' for kind '" + std::string(kind_name(config.kind)) + "'");
    }
  }
}

void expect_kind(const Config& config, Kind kind) {
  if (config.kind != kind) {
    fail("/kind", "expected kind '" + std::string(kind_name(kind)) + "', found '" +
                      std::string(kind_name(config.kind)) + "'");
  }
}

GroundSet load_scenario_ground(const Config& config, const LoadLimits& limits, std::size_t cap) {
  return load_ground(require(config.document, "", "ground"), "/ground", std::min(cap, limits.max_ground),
                     "ground set");
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::production: return "production";
    case Kind::military: return "military";
    case Kind::merger: return "merger";
    case Kind::game: return "game";
    case Kind::convolution: return "convolution";
  }
  return "unknown";
}

std::string_view mode_name(NumericMode mode) { return mode == NumericMode::exact ? "exact" : "float"; }

Config parse_config(std::string_view text, std::string source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte);
    std::string message = e.what();
    if (auto colon = message.find(": "); colon != std::string::npos) message = message.substr(colon + 2);
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column), message);
  }
  expect_object(doc, "");
  const std::string kind = expect_string(require(doc, "", "kind"), "/kind");
  Config config{Kind::production, std::nullopt, doc, std::move(source)};
  if (kind == "production") {
    config.kind = Kind::production;
  } else if (kind == "military") {
    config.kind = Kind::military;
  } else if (kind == "merger") {
    config.kind = Kind::merger;
  } else if (kind == "game") {
    config.kind = Kind::game;
  } else if (kind == "convolution") {
    config.kind = Kind::convolution;
  } else {
    fail("/kind", "unknown kind '" + kind + "'; expected production, military, merger, game or convolution");
  }
  if (doc.contains("mode")) {
    const std::string mode = expect_string(doc["mode"], "/mode");
    if (mode == "exact") {
      config.mode = NumericMode::exact;
    } else if (mode == "float") {
      config.mode = NumericMode::floating;
    } else {
      fail("/mode", "expected 'exact' or 'float', found '" + mode + "'");
    }
  }
  if (doc.contains("description")) expect_string(doc["description"], "/description");
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

template <Scalar T>
TwoInputProduction<T> load_production(const Config& config, const LoadLimits& limits) {
  expect_kind(config, Kind::production);
  check_kind_keys(config, {"ground", "p", "x", "y", "alpha", "beta"});
  const Json& doc = config.document;
  GroundSet ground = load_scenario_ground(config, limits, kMaxScenarioGround);
  auto coins = load_coins<T>(ground, require(doc, "", "p"), "/p");
  auto x = load_per_element<T>(ground, require(doc, "", "x"), "/x");
  auto y = load_per_element<T>(ground, require(doc, "", "y"), "/y");
  const Rational alpha = load_rational(require(doc, "", "alpha"), "/alpha");
  const Rational beta = load_rational(require(doc, "", "beta"), "/beta");
  return at("", [&] { return TwoInputProduction<T>(std::move(coins), std::move(x), std::move(y), alpha, beta); });
}

template <Scalar T>
MilitaryScenario<T> load_military(const Config& config, const LoadLimits& limits) {
  expect_kind(config, Kind::military);
  check_kind_keys(config, {"ground", "p", "red", "blue"});
  const Json& doc = config.document;
  GroundSet ground = load_scenario_ground(config, limits, kMaxScenarioGround);
  auto coins = load_coins<T>(ground, require(doc, "", "p"), "/p");
  auto red = load_family(ground, require(doc, "", "red"), "/red");
  auto blue = load_family(ground, require(doc, "", "blue"), "/blue");
  return at("", [&] { return MilitaryScenario<T>(std::move(coins), std::move(red), std::move(blue)); });
}

template <Scalar T>
MergerScenario<T> load_merger(const Config& config, const LoadLimits& limits) {
  expect_kind(config, Kind::merger);
  check_kind_keys(config, {"ground", "p", "company_a", "company_b"});
  const Json& doc = config.document;
  GroundSet ground = load_scenario_ground(config, limits, kMaxScenarioGround);
  auto coins = load_coins<T>(ground, require(doc, "", "p"), "/p");
  auto a = load_function<T>(ground, require(doc, "", "company_a"), "/company_a");
  auto b = load_function<T>(ground, require(doc, "", "company_b"), "/company_b");
  return at("", [&] { return MergerScenario<T>(std::move(coins), std::move(a), std::move(b)); });
}

template <Scalar T>
ConvolutionInput<T> load_convolution(const Config& config, const LoadLimits& limits) {
  expect_kind(config, Kind::convolution);
  check_kind_keys(config, {"ground", "p", "f", "g"});
  const Json& doc = config.document;
  GroundSet ground = load_scenario_ground(config, limits, kMaxConvolveGround);
  return ConvolutionInput<T>{load_function<T>(ground, require(doc, "", "f"), "/f"),
                             load_function<T>(ground, require(doc, "", "g"), "/g"),
                             load_coins<T>(ground, require(doc, "", "p"), "/p")};
}

template <Scalar T>
GameInput<T> load_game(const Config& config, const LoadLimits& limits) {
  expect_kind(config, Kind::game);
  check_kind_keys(config, {"commodities", "suppliers", "p", "supply", "payoffs", "scale", "profile"});
  const Json& doc = config.document;
  GroundSet commodities =
      load_ground(require(doc, "", "commodities"), "/commodities", kMaxCommodities, "commodity set");
  GroundSet suppliers = load_ground(require(doc, "", "suppliers"), "/suppliers",
                                    std::min(kMaxSuppliers, limits.max_ground), "supplier set");
  if (suppliers.size() == 0) fail("/suppliers", "at least one supplier required");
  auto coins = load_coins<T>(suppliers, require(doc, "", "p"), "/p");

  const Json& supply_json = require(doc, "", "supply");
  expect_object(supply_json, "/supply");
  std::vector<CommodityMask> supply(suppliers.size(), 0);
  std::vector<bool> seen(suppliers.size(), false);
  for (const auto& [key, value] : supply_json.items()) {
    const std::string ptr = child("/supply", key);
    auto h = suppliers.index_of(key);
    if (!h) fail(ptr, "unknown supplier '" + key + "'");
    supply[*h] = load_subset(commodities, value, ptr).mask();
    seen[*h] = true;
  }
  for (std::size_t h = 0; h < suppliers.size(); ++h) {
    if (!seen[h]) fail("/supply", "missing commodity set for supplier '" + suppliers.label(h) + "'");
  }

  auto load_per_commodity = [&](const Json& j, const std::string& ptr) {
    expect_object(j, ptr);
    std::vector<std::optional<SetFunction<T>>> slots(commodities.size());
    for (const auto& [key, value] : j.items()) {
      auto k = commodities.index_of(key);
      if (!k) fail(child(ptr, key), "unknown commodity '" + key + "'");
      slots[*k] = load_function<T>(suppliers, value, child(ptr, key));
    }
    std::vector<SetFunction<T>> out;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (!slots[k]) fail(ptr, "missing payoff function for commodity '" + commodities.label(k) + "'");
      out.push_back(std::move(*slots[k]));
    }
    return out;
  };

  const Json& payoffs_json = require(doc, "", "payoffs");
  expect_object(payoffs_json, "/payoffs");
  std::vector<std::vector<SetFunction<T>>> payoffs;
  if (payoffs_json.size() != 1) fail("/payoffs", "expected exactly one of 'common' or 'per_supplier'");
  if (payoffs_json.contains("common")) {
    auto common = load_per_commodity(payoffs_json["common"], "/payoffs/common");
    payoffs.assign(suppliers.size(), common);
  } else if (payoffs_json.contains("per_supplier")) {
    const Json& per = payoffs_json["per_supplier"];
    expect_object(per, "/payoffs/per_supplier");
    std::vector<std::optional<std::vector<SetFunction<T>>>> slots(suppliers.size());
    for (const auto& [key, value] : per.items()) {
      auto h = suppliers.index_of(key);
      if (!h) fail(child("/payoffs/per_supplier", key), "unknown supplier '" + key + "'");
      slots[*h] = load_per_commodity(value, child("/payoffs/per_supplier", key));
    }
    for (std::size_t h = 0; h < slots.size(); ++h) {
      if (!slots[h]) fail("/payoffs/per_supplier", "missing payoffs for supplier '" + suppliers.label(h) + "'");
      payoffs.push_back(std::move(*slots[h]));
    }
  } else {
    fail("/payoffs", "expected exactly one of 'common' or 'per_supplier'");
  }

  std::vector<T> scale;
  if (doc.contains("scale")) scale = load_per_element<T>(suppliers, doc["scale"], "/scale");

  GameSpec<T> spec = at("", [&] {
    return GameSpec<T>(commodities, std::move(coins), std::move(supply), std::move(payoffs), std::move(scale));
  });

  StrategyProfile profile = spec.coarse_profile();
  if (doc.contains("profile")) {
    const Json& pj = doc["profile"];
    expect_object(pj, "/profile");
    for (const auto& [key, value] : pj.items()) {
      const std::string ptr = child("/profile", key);
      auto h = suppliers.index_of(key);
      if (!h) fail(ptr, "unknown supplier '" + key + "'");
      expect_array(value, ptr);
      std::vector<CommodityMask> blocks;
      for (std::size_t i = 0; i < value.size(); ++i) {
        blocks.push_back(load_subset(commodities, value[i], child(ptr, i)).mask());
      }
      profile[*h] = at(ptr, [&] { return PartitionStrategy(*h, std::move(blocks)); });
      at(ptr, [&] {
        spec.validate(profile);
        return 0;
      });
    }
  }
  return GameInput<T>{std::move(spec), std::move(profile)};
}

#define RISKPOOL_CLI_INSTANTIATE(T)                                                        \
  template TwoInputProduction<T> load_production<T>(const Config&, const LoadLimits&);     \
  template MilitaryScenario<T> load_military<T>(const Config&, const LoadLimits&);         \
  template MergerScenario<T> load_merger<T>(const Config&, const LoadLimits&);             \
  template ConvolutionInput<T> load_convolution<T>(const Config&, const LoadLimits&);      \
  template GameInput<T> load_game<T>(const Config&, const LoadLimits&);

RISKPOOL_CLI_INSTANTIATE(double)
RISKPOOL_CLI_INSTANTIATE(Rational)

#undef RISKPOOL_CLI_INSTANTIATE

}  // namespace riskpool::cli
