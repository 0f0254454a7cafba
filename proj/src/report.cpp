#include "spooftrack/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace stb {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_fixed(double x, int decimals) {
  if (!std::isfinite(x)) return "NA";
  char buf[512];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed);
  std::string s(buf, end);
  const bool negative = !s.empty() && s.front() == '-';
  if (negative) s.erase(0, 1);

  const auto dot = s.find('.');
  std::string int_part = dot == std::string::npos ? s : s.substr(0, dot);
  std::string frac = dot == std::string::npos ? std::string() : s.substr(dot + 1);
  const auto keep = static_cast<std::size_t>(decimals);

  bool round_up = false;
  if (frac.size() > keep) {
    round_up = frac[keep] >= '5';
    frac.resize(keep);
  }
  frac.append(keep - frac.size(), '0');

  std::string digits = int_part + frac;
  if (round_up) {
    std::size_t i = digits.size();
    while (i > 0) {
      --i;
      if (digits[i] == '9') {
        digits[i] = '0';
        continue;
      }
      ++digits[i];
      break;
    }
    if (i == 0 && digits[0] == '0') digits.insert(digits.begin(), '1');
  }
  const std::size_t int_len = digits.size() - keep;
  std::string out = digits.substr(0, int_len);
  if (keep > 0) out += "." + digits.substr(int_len);
  const bool is_zero = std::all_of(digits.begin(), digits.end(), [](char c) { return c == '0'; });
  return (negative && !is_zero ? "-" : "") + out;
}

double round_decimal(double x, int decimals) {
  if (!std::isfinite(x)) return x;
  const std::string s = format_fixed(x, decimals);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

}  // namespace

std::vector<GroupRow> group_averages(const std::vector<ComparisonCell>& cells) {
  std::vector<TrackerKind> trackers;
  std::vector<SpoofType> spoofs;
  for (const auto& c : cells) {
    if (std::find(trackers.begin(), trackers.end(), c.tracker) == trackers.end()) trackers.push_back(c.tracker);
    if (std::find(spoofs.begin(), spoofs.end(), c.spoof_type) == spoofs.end()) spoofs.push_back(c.spoof_type);
  }

  std::vector<GroupRow> rows;
  auto average = [&](const std::string& label, auto&& member) {
    GroupRow row{label, 0.0, 0.0};
    int n = 0;
    for (const auto& c : cells) {
      if (!member(c)) continue;
      row.drift_m += c.drift_m;
      row.impact_pct += c.impact_pct;
      ++n;
    }
    if (n == 0) return;
    row.drift_m /= n;
    row.impact_pct /= n;
    rows.push_back(row);
  };
  for (TrackerKind t : trackers) {
    average("Average (" + upper(to_string(t)) + ")", [t](const ComparisonCell& c) { return c.tracker == t; });
  }
  for (SpoofType s : spoofs) {
    average("Average (" + to_string(s) + " spoof)", [s](const ComparisonCell& c) { return c.spoof_type == s; });
  }
  return rows;
}

ComparisonTable aggregate(const std::vector<RunReport>& reports, const std::vector<TrackerKind>& trackers,
                          const std::vector<SpoofType>& spoofs, double d_norm_m) {
  ComparisonTable table;
  for (TrackerKind t : trackers) {
    for (SpoofType s : spoofs) {
      ComparisonCell cell{t, s, 0.0, 0.0, 0};
      for (const auto& r : reports) {
        if (r.tracker != t || r.spoof_type != s) continue;
        cell.drift_m += r.drift.mean_m;
        ++cell.runs;
      }
      if (cell.runs == 0) {
        table.missing.push_back({t, s});
        continue;
      }
      cell.drift_m /= cell.runs;
      cell.impact_pct = normalized_impact(cell.drift_m, d_norm_m);
      table.cells.push_back(cell);
    }
  }
  table.groups = group_averages(table.cells);
  return table;
}

std::string comparison_csv(const ComparisonTable& table) {
  std::ostringstream out;
  out << "tracker,spoof_type,drift_m,impact_pct,runs\n";
  for (const auto& c : table.cells) {
    out << upper(to_string(c.tracker)) << ',' << to_string(c.spoof_type) << ',' << format_fixed(c.drift_m, 2)
        << ',' << format_fixed(c.impact_pct, 2) << ',' << c.runs << '\n';
  }
  for (const auto& m : table.missing) {
    out << upper(to_string(m.tracker)) << ',' << to_string(m.spoof_type) << ",NA,NA,0\n";
  }
  for (const auto& g : table.groups) {
    out << g.label << ",-," << format_fixed(g.drift_m, 2) << ',' << format_fixed(g.impact_pct, 2) << ",\n";
  }
  return out.str();
}

namespace {

ordered_json number_or_null(double v) { return std::isnan(v) ? ordered_json(nullptr) : ordered_json(v); }

double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

ordered_json to_json(const RunReport& r) {
  ordered_json j;
  j["run_id"] = r.run_id;
  j["tracker"] = to_string(r.tracker);
  j["spoof_type"] = to_string(r.spoof_type);
  j["seed"] = r.seed;
  j["config_digest"] = r.config_digest;
  j["injection_window"] = r.has_window ? ordered_json::array({r.window.start, r.window.end}) : ordered_json(nullptr);
  j["mean_drift_m"] = r.drift.mean_m;
  j["max_drift_m"] = r.drift.max_m;
  j["drift_empty"] = r.drift.empty;
  j["normalized_impact_pct"] = r.normalized_impact_pct;
  j["switch_count"] = r.divergence.switch_count;
  j["spoof_inclusion_rate"] = r.spoof.inclusion;
  j["recovery_rate"] = r.spoof.recovery;
  j["false_association_ratio"] = r.spoof.false_attribution;
  j["purity_updates"] = r.purity.updates;
  j["spoof_majority_updates"] = r.purity.spoof_majority_updates;

  ordered_json platforms = ordered_json::array();
  for (std::size_t p = 0; p < r.drift.per_platform.size(); ++p) {
    const auto& pd = r.drift.per_platform[p];
    ordered_json e;
    e["platform_id"] = pd.platform_id;
    e["mean_drift_m"] = pd.mean_m;
    e["max_drift_m"] = pd.max_m;
    e["matched_steps"] = pd.matched_steps;
    e["gap_steps"] = pd.gap_steps;
    e["switches"] = p < r.divergence.switches_per_platform.size() ? r.divergence.switches_per_platform[p] : 0;
    platforms.push_back(std::move(e));
  }
  j["platforms"] = std::move(platforms);

  ordered_json matrix = ordered_json::array();
  for (const auto& row : r.drift.error_matrix) {
    ordered_json jr = ordered_json::array();
    for (double v : row) jr.push_back(number_or_null(v));
    matrix.push_back(std::move(jr));
  }
  j["drift_matrix"] = std::move(matrix);

  ordered_json events = ordered_json::array();
  for (const auto& e : r.divergence.events) {
    events.push_back({{"t", e.t}, {"platform_id", e.platform_id}, {"from_track", e.from_track}, {"to_track", e.to_track}});
  }
  j["switch_events"] = std::move(events);

  ordered_json confusion;
  confusion["columns"] = r.divergence.columns;
  ordered_json rows = ordered_json::array();
  for (std::size_t p = 0; p < r.divergence.confusion.size(); ++p) {
    ordered_json row;
    row["platform_id"] = p < r.drift.per_platform.size() ? r.drift.per_platform[p].platform_id : static_cast<int>(p);
    row["has_data"] = static_cast<bool>(r.divergence.row_has_data[p]);
    row["values"] = r.divergence.confusion[p];
    rows.push_back(std::move(row));
  }
  confusion["rows"] = std::move(rows);
  j["confusion"] = std::move(confusion);

  ordered_json timeline = ordered_json::array();
  for (const auto& v : r.purity.timeline) timeline.push_back(v ? ordered_json(*v) : ordered_json(nullptr));
  j["purity_timeline"] = std::move(timeline);
  return j;
}

RunReport run_report_from_json(const json& j) {
  RunReport r;
  r.run_id = j.at("run_id").get<std::string>();
  r.tracker = parse_tracker_kind(j.at("tracker").get<std::string>());
  r.spoof_type = parse_spoof_type(j.at("spoof_type").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config_digest = j.at("config_digest").get<std::string>();
  if (!j.at("injection_window").is_null()) {
    r.has_window = true;
    r.window = {j["injection_window"][0].get<int>(), j["injection_window"][1].get<int>()};
  }
  r.drift.mean_m = j.at("mean_drift_m").get<double>();
  r.drift.max_m = j.at("max_drift_m").get<double>();
  r.drift.empty = j.at("drift_empty").get<bool>();
  r.normalized_impact_pct = j.at("normalized_impact_pct").get<double>();
  r.divergence.switch_count = j.at("switch_count").get<int>();
  r.spoof.inclusion = j.at("spoof_inclusion_rate").get<double>();
  r.spoof.recovery = j.at("recovery_rate").get<double>();
  r.spoof.false_attribution = j.at("false_association_ratio").get<double>();
  r.purity.updates = j.at("purity_updates").get<int>();
  r.purity.spoof_majority_updates = j.at("spoof_majority_updates").get<int>();

  for (const auto& e : j.at("platforms")) {
    r.drift.per_platform.push_back({e.at("platform_id").get<int>(), e.at("mean_drift_m").get<double>(),
                                    e.at("max_drift_m").get<double>(), e.at("matched_steps").get<int>(),
                                    e.at("gap_steps").get<int>()});
    r.divergence.switches_per_platform.push_back(e.at("switches").get<int>());
  }
  for (const auto& row : j.at("drift_matrix")) {
    auto& out = r.drift.error_matrix.emplace_back();
    for (const auto& v : row) out.push_back(number_or_nan(v));
  }
  for (const auto& e : j.at("switch_events")) {
    r.divergence.events.push_back({e.at("t").get<int>(), e.at("platform_id").get<int>(),
                                   e.at("from_track").get<int>(), e.at("to_track").get<int>()});
  }
  const auto& confusion = j.at("confusion");
  r.divergence.columns = confusion.at("columns").get<std::vector<std::string>>();
  for (const auto& row : confusion.at("rows")) {
    r.divergence.row_has_data.push_back(row.at("has_data").get<bool>());
    r.divergence.confusion.push_back(row.at("values").get<std::vector<double>>());
  }
  for (const auto& v : j.at("purity_timeline")) {
    r.purity.timeline.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
  }
  return r;
}

}  // namespace stb
