#include "spooftrack/config.hpp"

#include "spooftrack/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <set>
#include <string_view>

namespace stb {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, std::string_view where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + "." + key + ": " + e.what());
  }
}

Box box_from_json(const json& j, std::string_view where) {
  check_keys(j, {"x_min", "x_max", "y_min", "y_max"}, where);
  Box b;
  read(j, "x_min", b.x_min, where);
  read(j, "x_max", b.x_max, where);
  read(j, "y_min", b.y_min, where);
  read(j, "y_max", b.y_max, where);
  return b;
}

ordered_json to_json(const Box& b) {
  return {{"x_min", b.x_min}, {"x_max", b.x_max}, {"y_min", b.y_min}, {"y_max", b.y_max}};
}

Vec2 vec2_from_json(const json& j, std::string_view where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(std::string(where) + ": expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

ScenarioConfig scenario_from_json(const json& j) {
  constexpr std::string_view where = "scenario";
  check_keys(j, {"duration_s", "dt_s", "platforms", "seed", "region", "platform_dims_m"}, where);
  ScenarioConfig c = default_scenario();
  read(j, "duration_s", c.duration_s, where);
  read(j, "dt_s", c.dt_s, where);
  read(j, "seed", c.seed, where);
  if (j.contains("region")) c.region = box_from_json(j["region"], "scenario.region");
  if (j.contains("platform_dims_m")) {
    const auto& d = j["platform_dims_m"];
    if (!d.is_array() || d.size() != 3) throw ConfigError("scenario.platform_dims_m: expected [l, w, h]");
    c.platform_dims_m = {d[0].get<double>(), d[1].get<double>(), d[2].get<double>()};
  }
  if (j.contains("platforms")) {
    if (!j["platforms"].is_array()) throw ConfigError("scenario.platforms: expected an array");
    c.platforms.clear();
    for (const auto& pj : j["platforms"]) {
      constexpr std::string_view pw = "scenario.platforms[]";
      check_keys(pj, {"id", "class_id", "waypoints", "stationary"}, pw);
      PlatformSpec p;
      read(pj, "id", p.id, pw);
      read(pj, "class_id", p.class_id, pw);
      read(pj, "stationary", p.stationary, pw);
      if (!pj.contains("waypoints") || !pj["waypoints"].is_array()) {
        throw ConfigError("scenario.platforms[].waypoints: required array");
      }
      for (const auto& wj : pj["waypoints"]) {
        constexpr std::string_view ww = "scenario.platforms[].waypoints[]";
        check_keys(wj, {"t_s", "x", "y"}, ww);
        Waypoint w;
        double x = 0.0, y = 0.0;
        read(wj, "t_s", w.t_s, ww);
        read(wj, "x", x, ww);
        read(wj, "y", y, ww);
        w.position = Vec2(x, y);
        p.waypoints.push_back(w);
      }
      c.platforms.push_back(std::move(p));
    }
  }
  return c;
}

ordered_json to_json(const ScenarioConfig& c) {
  ordered_json j;
  j["duration_s"] = c.duration_s;
  j["dt_s"] = c.dt_s;
  j["seed"] = c.seed;
  j["region"] = to_json(c.region);
  j["platform_dims_m"] = {c.platform_dims_m.x(), c.platform_dims_m.y(), c.platform_dims_m.z()};
  ordered_json platforms = ordered_json::array();
  for (const auto& p : c.platforms) {
    ordered_json pj;
    pj["id"] = p.id;
    pj["class_id"] = p.class_id;
    pj["stationary"] = p.stationary;
    ordered_json wps = ordered_json::array();
    for (const auto& w : p.waypoints) wps.push_back({{"t_s", w.t_s}, {"x", w.position.x()}, {"y", w.position.y()}});
    pj["waypoints"] = std::move(wps);
    platforms.push_back(std::move(pj));
  }
  j["platforms"] = std::move(platforms);
  return j;
}

SensorConfig sensor_from_json(const json& j) {
  constexpr std::string_view where = "sensor";
  check_keys(j, {"p_detect", "noise_sigma_m", "clutter_rate", "fov", "seed_stream_tag"}, where);
  SensorConfig c;
  read(j, "p_detect", c.p_detect, where);
  read(j, "noise_sigma_m", c.noise_sigma_m, where);
  read(j, "clutter_rate", c.clutter_rate, where);
  read(j, "seed_stream_tag", c.seed_stream_tag, where);
  if (j.contains("fov")) c.fov = box_from_json(j["fov"], "sensor.fov");
  return c;
}

ordered_json to_json(const SensorConfig& c) {
  ordered_json j;
  j["p_detect"] = c.p_detect;
  j["noise_sigma_m"] = c.noise_sigma_m;
  j["clutter_rate"] = c.clutter_rate;
  j["fov"] = to_json(c.fov);
  j["seed_stream_tag"] = c.seed_stream_tag;
  return j;
}

SpoofConfig spoof_from_json(const json& j) {
  constexpr std::string_view where = "spoof";
  check_keys(j,
             {"spoof_type", "alpha", "drift_dir", "mirror_x0", "ghost_rate", "ghost_placement",
              "ghost_inner_radius_m", "ghost_radius_m", "injection_window", "target_platform_ids", "seed"},
             where);
  SpoofConfig c;
  std::string type = "clean";
  read(j, "spoof_type", type, where);
  c.spoof_type = parse_spoof_type(type);
  read(j, "alpha", c.alpha, where);
  if (j.contains("drift_dir")) c.drift_dir = vec2_from_json(j["drift_dir"], "spoof.drift_dir");
  read(j, "mirror_x0", c.mirror_x0, where);
  read(j, "ghost_rate", c.ghost_rate, where);
  std::string placement = "fov";
  read(j, "ghost_placement", placement, where);
  if (placement == "fov") c.ghost_placement = GhostPlacement::Fov;
  else if (placement == "near_track") c.ghost_placement = GhostPlacement::NearTrack;
  else throw ConfigError("spoof.ghost_placement: expected 'fov' or 'near_track'");
  read(j, "ghost_inner_radius_m", c.ghost_inner_radius_m, where);
  read(j, "ghost_radius_m", c.ghost_radius_m, where);
  if (j.contains("injection_window")) {
    const auto& w = j["injection_window"];
    if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer()) {
      throw ConfigError("spoof.injection_window: expected [t_start, t_end]");
    }
    c.window = {w[0].get<int>(), w[1].get<int>()};
  }
  std::vector<PlatformId> targets;
  read(j, "target_platform_ids", targets, where);
  c.target_platform_ids = std::set<PlatformId>(targets.begin(), targets.end());
  read(j, "seed", c.seed, where);
  return c;
}

ordered_json to_json(const SpoofConfig& c) {
  ordered_json j;
  j["spoof_type"] = to_string(c.spoof_type);
  j["alpha"] = c.alpha;
  j["drift_dir"] = {c.drift_dir.x(), c.drift_dir.y()};
  j["mirror_x0"] = c.mirror_x0;
  j["ghost_rate"] = c.ghost_rate;
  j["ghost_placement"] = c.ghost_placement == GhostPlacement::Fov ? "fov" : "near_track";
  j["ghost_inner_radius_m"] = c.ghost_inner_radius_m;
  j["ghost_radius_m"] = c.ghost_radius_m;
  j["injection_window"] = {c.window.start, c.window.end};
  j["target_platform_ids"] = std::vector<PlatformId>(c.target_platform_ids.begin(), c.target_platform_ids.end());
  j["seed"] = c.seed;
  return j;
}

TrackerParams tracker_from_json(const json& j, const SensorConfig& sensor) {
  constexpr std::string_view where = "tracker";
  check_keys(j,
             {"gamma", "q", "v_max", "p_birth", "hit_threshold", "p_detect", "clutter_density", "confirm_m",
              "confirm_n", "delete_k"},
             where);
  TrackerParams c;
  c.p_detect = sensor.p_detect;
  c.clutter_density = sensor.clutter_rate / sensor.fov.area();
  read(j, "gamma", c.gamma, where);
  read(j, "q", c.q, where);
  read(j, "v_max", c.v_max, where);
  read(j, "p_birth", c.p_birth, where);
  read(j, "hit_threshold", c.hit_threshold, where);
  read(j, "p_detect", c.p_detect, where);
  read(j, "clutter_density", c.clutter_density, where);
  read(j, "confirm_m", c.lifecycle.confirm_m, where);
  read(j, "confirm_n", c.lifecycle.confirm_n, where);
  read(j, "delete_k", c.lifecycle.delete_k, where);
  return c;
}

ordered_json to_json(const TrackerParams& c) {
  ordered_json j;
  j["gamma"] = c.gamma;
  j["q"] = c.q;
  j["v_max"] = c.v_max;
  j["p_birth"] = c.p_birth;
  j["hit_threshold"] = c.hit_threshold;
  j["p_detect"] = c.p_detect;
  j["clutter_density"] = c.clutter_density;
  j["confirm_m"] = c.lifecycle.confirm_m;
  j["confirm_n"] = c.lifecycle.confirm_n;
  j["delete_k"] = c.lifecycle.delete_k;
  return j;
}

MetricsParams metrics_from_json(const json& j) {
  constexpr std::string_view where = "metrics";
  check_keys(j, {"match_cutoff_m", "d_norm_m", "recovery_sigma_mult", "recovery_steps"}, where);
  MetricsParams c;
  read(j, "match_cutoff_m", c.match_cutoff_m, where);
  read(j, "d_norm_m", c.d_norm_m, where);
  read(j, "recovery_sigma_mult", c.recovery_sigma_mult, where);
  read(j, "recovery_steps", c.recovery_steps, where);
  return c;
}

ordered_json to_json(const MetricsParams& c) {
  ordered_json j;
  j["match_cutoff_m"] = c.match_cutoff_m;
  j["d_norm_m"] = c.d_norm_m;
  j["recovery_sigma_mult"] = c.recovery_sigma_mult;
  j["recovery_steps"] = c.recovery_steps;
  return j;
}

BenchmarkConfig benchmark_from_json(const json& j) {
  constexpr std::string_view where = "config";
  check_keys(j, {"scenario", "sensor", "spoof_grid", "trackers", "seeds", "output_dir", "tracker", "metrics"}, where);
  BenchmarkConfig c = default_benchmark();
  if (j.contains("scenario")) c.scenario = scenario_from_json(j["scenario"]);
  if (j.contains("sensor")) {
    c.sensor = sensor_from_json(j["sensor"]);
    if (!j["sensor"].contains("fov")) c.sensor.fov = c.scenario.region;
  } else {
    c.sensor.fov = c.scenario.region;
  }
  c.tracker = tracker_from_json(j.contains("tracker") ? j["tracker"] : json::object(), c.sensor);
  if (j.contains("metrics")) c.metrics = metrics_from_json(j["metrics"]);
  if (j.contains("spoof_grid")) {
    if (!j["spoof_grid"].is_array()) throw ConfigError("spoof_grid: expected an array");
    c.spoof_grid.clear();
    for (const auto& sj : j["spoof_grid"]) c.spoof_grid.push_back(spoof_from_json(sj));
  }
  if (j.contains("trackers")) {
    std::vector<std::string> names;
    read(j, "trackers", names, where);
    c.trackers.clear();
    for (const auto& n : names) c.trackers.push_back(parse_tracker_kind(n));
  }
  if (j.contains("seeds")) {
    const auto& s = j["seeds"];
    c.seeds.clear();
    if (s.is_array()) {
      read(j, "seeds", c.seeds, where);
    } else if (s.is_object()) {
      check_keys(s, {"base_seed", "count"}, "seeds");
      std::uint64_t base = 0;
      int count = 0;
      read(s, "base_seed", base, "seeds");
      read(s, "count", count, "seeds");
      if (count < 0) throw ConfigError("seeds.count must be non-negative");
      for (int i = 0; i < count; ++i) c.seeds.push_back(base + static_cast<std::uint64_t>(i));
    } else {
      throw ConfigError("seeds: expected a list or {base_seed, count}");
    }
  }
  std::string out = c.output_dir.string();
  read(j, "output_dir", out, where);
  c.output_dir = out;
  return c;
}

ordered_json to_json(const BenchmarkConfig& c) {
  ordered_json j;
  j["scenario"] = to_json(c.scenario);
  j["sensor"] = to_json(c.sensor);
  ordered_json grid = ordered_json::array();
  for (const auto& s : c.spoof_grid) grid.push_back(to_json(s));
  j["spoof_grid"] = std::move(grid);
  ordered_json trackers = ordered_json::array();
  for (auto t : c.trackers) trackers.push_back(to_string(t));
  j["trackers"] = std::move(trackers);
  j["seeds"] = c.seeds;
  j["output_dir"] = c.output_dir.string();
  j["tracker"] = to_json(c.tracker);
  j["metrics"] = to_json(c.metrics);
  return j;
}

void validate(const BenchmarkConfig& c) {
  validate(c.scenario);
  validate(c.sensor);
  validate(c.tracker);
  if (c.trackers.empty()) throw ConfigError("trackers must not be empty");
  if (c.seeds.empty()) throw ConfigError("seeds must not be empty");
  if (c.spoof_grid.empty()) throw ConfigError("spoof_grid must not be empty");
  const int steps = c.scenario.num_steps();
  for (const auto& s : c.spoof_grid) {
    validate(s);
    if (s.spoof_type != SpoofType::Clean && s.window.end >= steps) {
      throw ConfigError("injection window end " + std::to_string(s.window.end) + " outside the scenario horizon");
    }
    for (PlatformId id : s.target_platform_ids) {
      const bool known = std::any_of(c.scenario.platforms.begin(), c.scenario.platforms.end(),
                                     [id](const PlatformSpec& p) { return p.id == id; });
      if (!known) throw ConfigError("spoof targets unknown platform " + std::to_string(id));
    }
  }
  if (!(c.metrics.match_cutoff_m > 0.0) || !(c.metrics.d_norm_m > 0.0) || c.metrics.recovery_steps < 1) {
    throw ConfigError("metrics parameters must be positive");
  }
}

BenchmarkConfig load_benchmark_config(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  BenchmarkConfig c = benchmark_from_json(j);
  validate(c);
  return c;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string config_digest(const BenchmarkConfig& config) {
  ordered_json j = to_json(config);
  // Where results land does not change what they are.
  j.erase("output_dir");
  return sha256_hex(j.dump());
}

BenchmarkConfig default_benchmark() {
  BenchmarkConfig c;
  c.scenario = default_scenario();
  c.sensor.fov = c.scenario.region;
  c.tracker.p_detect = c.sensor.p_detect;
  c.tracker.clutter_density = c.sensor.clutter_rate / c.sensor.fov.area();

  SpoofConfig drift;
  drift.spoof_type = SpoofType::Drift;
  drift.alpha = 1.0;
  drift.drift_dir = Vec2(0.0, 1.0);
  drift.window = {30, 60};
  drift.target_platform_ids = {1};

  SpoofConfig ghost;
  ghost.spoof_type = SpoofType::Ghost;
  ghost.ghost_rate = 2.0;
  ghost.ghost_placement = GhostPlacement::NearTrack;
  ghost.ghost_radius_m = 50.0;
  ghost.window = {30, 60};

  SpoofConfig mirror;
  mirror.spoof_type = SpoofType::Mirror;
  mirror.mirror_x0 = -250.0;
  mirror.window = {30, 60};
  mirror.target_platform_ids = {1};

  SpoofConfig clean;
  clean.spoof_type = SpoofType::Clean;

  c.spoof_grid = {drift, ghost, mirror, clean};
  c.trackers = {TrackerKind::Gnn, TrackerKind::Jpda};
  for (std::uint64_t s = 1; s <= 10; ++s) c.seeds.push_back(s);
  return c;
}

}  // namespace stb
