#include "riskpool_cli/report.hpp"

#include <algorithm>
#include <fstream>

#ifndef RISKPOOL_VERSION
#define RISKPOOL_VERSION "0.0.0"
#endif

namespace riskpool::cli {

std::vector<std::string> sorted_labels(const GroundSet& ground, Subset s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ground.size(); ++i) {
    if (s.contains(i)) out.push_back(ground.label(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

OrderedJson subset_json(const GroundSet& ground, Subset s) { return sorted_labels(ground, s); }

OrderedJson commodity_set_json(const GroundSet& commodities, CommodityMask s) {
  return sorted_labels(commodities, Subset(s));
}

OrderedJson strategy_json(const GroundSet& commodities, const PartitionStrategy& strategy) {
  std::vector<std::vector<std::string>> blocks;
  for (CommodityMask b : strategy.blocks()) blocks.push_back(sorted_labels(commodities, Subset(b)));
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

template <Scalar T>
OrderedJson profile_json(const GameSpec<T>& spec, const StrategyProfile& profile) {
  OrderedJson out = OrderedJson::object();
  for (std::size_t h = 0; h < profile.size(); ++h) {
    out[spec.suppliers().label(h)] = strategy_json(spec.commodities(), profile[h]);
  }
  return out;
}

template OrderedJson profile_json<double>(const GameSpec<double>&, const StrategyProfile&);
template OrderedJson profile_json<Rational>(const GameSpec<Rational>&, const StrategyProfile&);

std::vector<Mask> Table::row_order() const {
  std::vector<std::pair<std::vector<std::string>, Mask>> keyed;
  for (Mask m = 0; m < rows.size(); ++m) keyed.emplace_back(sorted_labels(ground, Subset(m)), m);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::vector<Mask> out;
  for (const auto& [labels, m] : keyed) out.push_back(m);
  return out;
}

OrderedJson Table::to_json() const {
  OrderedJson out;
  out["columns"] = columns;
  out["rows"] = OrderedJson::array();
  for (Mask m : row_order()) {
    OrderedJson row;
    row["set"] = subset_json(ground, Subset(m));
    for (std::size_t c = 0; c < columns.size(); ++c) row[columns[c]] = rows[m][c];
    out["rows"].push_back(std::move(row));
  }
  return out;
}

std::string Table::to_csv() const {
  std::string out = "set";
  for (const auto& c : columns) out += "," + c;
  out += "\n";
  for (Mask m : row_order()) {
    std::string key;
    for (const auto& label : sorted_labels(ground, Subset(m))) key += (key.empty() ? "" : ";") + label;
    out += key;
    for (const auto& v : rows[m]) out += "," + (v.is_string() ? v.get<std::string>() : v.dump());
    out += "\n";
  }
  return out;
}

Report::Report(std::string command, std::optional<std::string> kind, NumericMode mode)
    : command_(std::move(command)), kind_(std::move(kind)), mode_(mode) {}

bool Report::passed() const {
  return std::all_of(verdicts_.begin(), verdicts_.end(), [](const Verdict& v) { return v.pass; });
}

OrderedJson Report::to_json() const {
  OrderedJson out;
  out["tool"] = "riskpool";
  out["version"] = RISKPOOL_VERSION;
  out["command"] = command_;
  out["kind"] = kind_ ? OrderedJson(*kind_) : OrderedJson(nullptr);
  out["mode"] = mode_ == NumericMode::exact ? "exact" : "float";
  out["seed"] = seed_ ? OrderedJson(*seed_) : OrderedJson(nullptr);
  out["status"] = passed() ? "pass" : "violation";
  out["verdicts"] = OrderedJson::array();
  for (const auto& v : verdicts_) {
    OrderedJson j;
    j["name"] = v.name;
    j["pass"] = v.pass;
    j["detail"] = v.detail;
    j["counterexample"] = v.counterexample;
    out["verdicts"].push_back(std::move(j));
  }
  out["tables"] = OrderedJson::object();
  for (const auto& t : tables_) out["tables"][t.name] = t.to_json();
  out["results"] = results_;
  return out;
}

std::vector<std::filesystem::path> Report::write(const std::filesystem::path& dir, bool csv) const {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
    written.push_back(path);
  };
  emit(dir / "report.json", to_json().dump(2) + "\n");
  if (csv) {
    for (const auto& t : tables_) emit(dir / (t.name + ".csv"), t.to_csv());
  }
  return written;
}

template <Scalar T>
std::optional<OrderedJson> monotonicity_counterexample(const SetFunction<T>& f, bool decreasing) {
  const GroundSet& ground = f.ground();
  for (Mask m = 0; m < ground.subset_count(); ++m) {
    for (std::size_t h = 0; h < ground.size(); ++h) {
      if ((m >> h) & 1U) continue;
      const Mask up = m | (Mask{1} << h);
      const bool ok = decreasing ? NumTraits<T>::geq(f.at(m), f.at(up)) : NumTraits<T>::geq(f.at(up), f.at(m));
      if (!ok) {
        OrderedJson cx;
        cx["set"] = subset_json(ground, Subset(m));
        cx["added"] = ground.label(h);
        cx["value_at_set"] = to_json(f.at(m));
        cx["value_with_added"] = to_json(f.at(up));
        return cx;
      }
    }
  }
  return std::nullopt;
}

template std::optional<OrderedJson> monotonicity_counterexample<double>(const SetFunction<double>&, bool);
template std::optional<OrderedJson> monotonicity_counterexample<Rational>(const SetFunction<Rational>&, bool);

}  // namespace riskpool::cli
