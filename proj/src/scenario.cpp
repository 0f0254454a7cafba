#include "spooftrack/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace stb {

int ScenarioConfig::num_steps() const {
  if (!(dt_s > 0.0)) return 0;
  return static_cast<int>(std::floor(duration_s / dt_s + 1e-9));
}

GroundTruth::GroundTruth(double dt_s, std::vector<PlatformId> ids,
                         std::vector<std::vector<KinematicState>> states)
    : dt_s_(dt_s), ids_(std::move(ids)), states_(std::move(states)) {
  num_steps_ = states_.empty() ? 0 : static_cast<int>(states_.front().size());
}

bool GroundTruth::has_platform(PlatformId id) const {
  return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
}

std::size_t GroundTruth::index_of(PlatformId id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) throw std::out_of_range("unknown platform id " + std::to_string(id));
  return static_cast<std::size_t>(it - ids_.begin());
}

void validate(const ScenarioConfig& config) {
  if (!(config.dt_s > 0.0)) throw ConfigError("dt_s must be positive");
  if (config.dt_s < 0.1 || config.dt_s > 5.0) throw ConfigError("dt_s must lie in [0.1, 5.0]");
  if (!(config.duration_s >= config.dt_s)) throw ConfigError("duration_s must be >= dt_s");
  if (config.num_steps() < 2) throw ConfigError("scenario needs at least 2 timesteps");
  if (!config.region.valid()) throw ConfigError("region must have positive extent");
  if (config.platforms.empty()) throw ConfigError("scenario needs at least one platform");

  std::set<PlatformId> seen;
  for (const auto& p : config.platforms) {
    const std::string who = "platform " + std::to_string(p.id);
    if (!seen.insert(p.id).second) throw ConfigError(who + ": duplicate id");
    if (p.waypoints.empty()) throw ConfigError(who + ": no waypoints");
    if (p.waypoints.front().t_s != 0.0) throw ConfigError(who + ": first waypoint must be at t=0");
    for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
      if (!(p.waypoints[i].t_s > p.waypoints[i - 1].t_s)) {
        throw ConfigError(who + ": waypoint times must be strictly increasing");
      }
    }
    if (p.waypoints.back().t_s < config.duration_s) {
      throw ConfigError(who + ": last waypoint must be at or after duration_s");
    }
    for (const auto& w : p.waypoints) {
      if (!w.position.allFinite()) throw ConfigError(who + ": non-finite waypoint");
      if (p.stationary && w.position != p.waypoints.front().position) {
        throw ConfigError(who + ": stationary platform with moving waypoints");
      }
    }
  }
}

namespace {

KinematicState interpolate(const std::vector<Waypoint>& wps, double t) {
  if (wps.size() == 1) return {wps.front().position, Vec2::Zero()};
  // Leg i spans [t_i, t_{i+1}); a time exactly on a waypoint belongs to the outgoing leg.
  std::size_t leg = 0;
  while (leg + 2 < wps.size() && t >= wps[leg + 1].t_s) ++leg;
  const Waypoint& a = wps[leg];
  const Waypoint& b = wps[leg + 1];
  const Vec2 velocity = (b.position - a.position) / (b.t_s - a.t_s);
  return {a.position + velocity * (t - a.t_s), velocity};
}

}  // namespace

GroundTruth build_scenario(const ScenarioConfig& config) {
  validate(config);
  const int steps = config.num_steps();
  std::vector<PlatformId> ids;
  std::vector<std::vector<KinematicState>> states;
  ids.reserve(config.platforms.size());
  states.reserve(config.platforms.size());
  for (const auto& p : config.platforms) {
    ids.push_back(p.id);
    auto& track = states.emplace_back();
    track.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
      KinematicState s = interpolate(p.waypoints, k * config.dt_s);
      if (p.stationary) s.velocity.setZero();
      track.push_back(s);
    }
  }
  return GroundTruth(config.dt_s, std::move(ids), std::move(states));
}

KinematicState truth_state_at(const GroundTruth& truth, PlatformId platform_id, Timestep k) {
  const std::size_t idx = truth.index_of(platform_id);
  if (k < 0 || k >= truth.num_steps()) {
    throw std::out_of_range("timestep " + std::to_string(k) + " outside [0, " +
                            std::to_string(truth.num_steps()) + ")");
  }
  return truth.states(idx)[static_cast<std::size_t>(k)];
}

ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  cfg.duration_s = 100.0;
  cfg.dt_s = 1.0;
  cfg.seed = 1;
  cfg.region = Box{-600.0, 600.0, -600.0, 600.0};
  cfg.platforms = {
      {1, 1, {{0.0, {-600.0, -300.0}}, {100.0, {0.0, -300.0}}}, false},
      {2, 2, {{0.0, {-400.0, 350.0}}, {50.0, {0.0, 450.0}}, {100.0, {400.0, 300.0}}}, false},
      {3, 3, {{0.0, {500.0, -500.0}}, {60.0, {350.0, -50.0}}, {100.0, {450.0, 100.0}}}, false},
      {4, 4, {{0.0, {0.0, 50.0}}, {100.0, {0.0, 50.0}}}, true},
  };
  return cfg;
}

}  // namespace stb
