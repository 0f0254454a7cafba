#pragma once

#include "spooftrack/metrics.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace stb {

/// Fixed-point text of x with `decimals` digits, rounding half away from zero
/// on the shortest round-trip decimal form of x (so 76.195 -> "76.20").
[[nodiscard]] std::string format_fixed(double x, int decimals);
[[nodiscard]] double round_decimal(double x, int decimals);

struct ComparisonCell {
  TrackerKind tracker = TrackerKind::Gnn;
  SpoofType spoof_type = SpoofType::Clean;
  double drift_m = 0.0;
  double impact_pct = 0.0;
  int runs = 0;
};

struct GroupRow {
  std::string label;
  double drift_m = 0.0;
  double impact_pct = 0.0;
};

struct MissingCell {
  TrackerKind tracker = TrackerKind::Gnn;
  SpoofType spoof_type = SpoofType::Clean;
};

/// Drift and normalised impact per (tracker, spoof type), plus per-tracker and
/// per-spoof-type averages.
struct ComparisonTable {
  std::vector<ComparisonCell> cells;
  std::vector<GroupRow> groups;
  std::vector<MissingCell> missing;
};

/// "Average (GNN)", ..., "Average (drift spoof)", ...: unweighted means of the
/// member cells' drift and impact, trackers first, both in first-seen order.
[[nodiscard]] std::vector<GroupRow> group_averages(const std::vector<ComparisonCell>& cells);

/// Averages runs over seeds. Every (tracker, spoof) pair in the grid without a
/// run is listed in `missing`.
[[nodiscard]] ComparisonTable aggregate(const std::vector<RunReport>& reports,
                                        const std::vector<TrackerKind>& trackers,
                                        const std::vector<SpoofType>& spoofs, double d_norm_m = 500.0);

/// tracker,spoof_type,drift_m,impact_pct,runs with two-decimal values; group
/// rows use "-" as spoof type, missing cells "NA".
[[nodiscard]] std::string comparison_csv(const ComparisonTable& table);

[[nodiscard]] nlohmann::ordered_json to_json(const RunReport& report);
[[nodiscard]] RunReport run_report_from_json(const nlohmann::json& j);

}  // namespace stb
