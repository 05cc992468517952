#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskpool/boolean_lattice.hpp"
#include "riskpool/partition_game.hpp"

namespace riskpool::cli {

/// Reports keep insertion order so identical runs serialize byte for byte.
using OrderedJson = nlohmann::ordered_json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Exact values become "num/den" strings, float values JSON numbers.
inline OrderedJson to_json(const Rational& q) { return format_rational(q); }
inline OrderedJson to_json(double x) { return x; }

/// Element names of `s`, sorted by name so keys do not depend on label order.
std::vector<std::string> sorted_labels(const GroundSet& ground, Subset s);
OrderedJson subset_json(const GroundSet& ground, Subset s);
OrderedJson commodity_set_json(const GroundSet& commodities, CommodityMask s);
OrderedJson strategy_json(const GroundSet& commodities, const PartitionStrategy& strategy);
/// Object keyed by supplier label.
template <Scalar T>
OrderedJson profile_json(const GameSpec<T>& spec, const StrategyProfile& profile);

/// Subset-indexed table with one or more value columns.
struct Table {
  std::string name;
  GroundSet ground;
  std::vector<std::string> columns;
  /// rows[mask][column]
  std::vector<std::vector<OrderedJson>> rows;

  template <Scalar T>
  static Table of(std::string name, std::vector<std::string> columns, const std::vector<const SetFunction<T>*>& fns) {
    Table t{std::move(name), fns.front()->ground(), std::move(columns), {}};
    for (Mask m = 0; m < t.ground.subset_count(); ++m) {
      std::vector<OrderedJson> row;
      for (const auto* f : fns) row.push_back(cli::to_json(f->at(m)));
      t.rows.push_back(std::move(row));
    }
    return t;
  }

  /// Masks ordered by size, then by sorted label list.
  std::vector<Mask> row_order() const;
  OrderedJson to_json() const;
  std::string to_csv() const;
};

struct Verdict {
  std::string name;
  bool pass = true;
  std::string detail;
  OrderedJson counterexample;  ///< null when passing
};

class Report {
 public:
  Report(std::string command, std::optional<std::string> kind, NumericMode mode);

  void add_verdict(Verdict verdict) { verdicts_.push_back(std::move(verdict)); }
  void add_table(Table table) { tables_.push_back(std::move(table)); }
  OrderedJson& results() { return results_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  const std::vector<Verdict>& verdicts() const { return verdicts_; }
  const std::vector<Table>& tables() const { return tables_; }
  bool passed() const;
  int exit_code() const { return passed() ? kExitPass : kExitViolation; }

  OrderedJson to_json() const;
  /// report.json plus, when `csv`, one <table>.csv per table.
  std::vector<std::filesystem::path> write(const std::filesystem::path& dir, bool csv) const;

 private:
  std::string command_;
  std::optional<std::string> kind_;
  NumericMode mode_;
  std::optional<std::uint64_t> seed_;
  std::vector<Verdict> verdicts_;
  std::vector<Table> tables_;
  OrderedJson results_ = OrderedJson::object();
};

/// First covering pair (S, S + h) on which f fails to increase (or decrease), as a certificate.
template <Scalar T>
std::optional<OrderedJson> monotonicity_counterexample(const SetFunction<T>& f, bool decreasing = false);

}  // namespace riskpool::cli
