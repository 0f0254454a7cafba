#pragma once

#include "spooftrack/metrics.hpp"
#include "spooftrack/scenario.hpp"
#include "spooftrack/sensing.hpp"
#include "spooftrack/spoofing.hpp"
#include "spooftrack/tracking.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace stb {

/// Full description of a benchmark campaign. Every run is a pure function of it.
struct BenchmarkConfig {
  ScenarioConfig scenario;
  SensorConfig sensor;
  /// Templates; SpoofType::Clean is the no-attack baseline.
  std::vector<SpoofConfig> spoof_grid;
  std::vector<TrackerKind> trackers;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "spooftrack_out";
  TrackerParams tracker;
  MetricsParams metrics;
};

/// Each parser rejects unknown keys and wrong types with ConfigError.
[[nodiscard]] ScenarioConfig scenario_from_json(const nlohmann::json& j);
[[nodiscard]] SensorConfig sensor_from_json(const nlohmann::json& j);
[[nodiscard]] SpoofConfig spoof_from_json(const nlohmann::json& j);
[[nodiscard]] MetricsParams metrics_from_json(const nlohmann::json& j);
/// Tracker p_detect and clutter_density default to the sensor's values.
[[nodiscard]] TrackerParams tracker_from_json(const nlohmann::json& j, const SensorConfig& sensor);
[[nodiscard]] BenchmarkConfig benchmark_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::ordered_json to_json(const ScenarioConfig& c);
[[nodiscard]] nlohmann::ordered_json to_json(const SensorConfig& c);
[[nodiscard]] nlohmann::ordered_json to_json(const SpoofConfig& c);
[[nodiscard]] nlohmann::ordered_json to_json(const TrackerParams& c);
[[nodiscard]] nlohmann::ordered_json to_json(const MetricsParams& c);
[[nodiscard]] nlohmann::ordered_json to_json(const BenchmarkConfig& c);

/// Throws IoError if unreadable, ConfigError if malformed or invalid.
[[nodiscard]] BenchmarkConfig load_benchmark_config(const std::filesystem::path& path);

void validate(const BenchmarkConfig& config);

/// SHA-256 (hex) of the canonical JSON of the resolved config.
[[nodiscard]] std::string config_digest(const BenchmarkConfig& config);

[[nodiscard]] std::string sha256_hex(std::string_view data);

/// The shipped default campaign: default scenario, drift/ghost/mirror/clean
/// templates, both trackers, seeds 1..10.
[[nodiscard]] BenchmarkConfig default_benchmark();

}  // namespace stb
