#pragma once

#include "spooftrack/types.hpp"

#include <cstdint>
#include <vector>

namespace stb {

struct Waypoint {
  double t_s = 0.0;
  Vec2 position = Vec2::Zero();
};

struct PlatformSpec {
  PlatformId id = 0;
  int class_id = 0;
  std::vector<Waypoint> waypoints;
  bool stationary = false;
};

struct ScenarioConfig {
  double duration_s = 100.0;
  double dt_s = 1.0;
  std::vector<PlatformSpec> platforms;
  std::uint64_t seed = 0;
  Box region;
  /// Platform body size (length, width, height) in meters. Metadata only.
  Eigen::Vector3d platform_dims_m{40.0, 30.0, 10.0};

  /// floor(duration / dt), tolerant to representation error in the ratio.
  [[nodiscard]] int num_steps() const;
};

struct KinematicState {
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();

  friend bool operator==(const KinematicState& a, const KinematicState& b) {
    return a.position == b.position && a.velocity == b.velocity;
  }
};

/// True platform trajectories sampled on the scenario clock.
class GroundTruth {
 public:
  GroundTruth() = default;
  GroundTruth(double dt_s, std::vector<PlatformId> ids,
              std::vector<std::vector<KinematicState>> states);

  [[nodiscard]] int num_steps() const { return num_steps_; }
  [[nodiscard]] double dt_s() const { return dt_s_; }
  [[nodiscard]] double time_of(Timestep k) const { return k * dt_s_; }
  [[nodiscard]] const std::vector<PlatformId>& platform_ids() const { return ids_; }
  [[nodiscard]] std::size_t num_platforms() const { return ids_.size(); }
  [[nodiscard]] bool has_platform(PlatformId id) const;
  /// Position of `id` in platform_ids(); throws std::out_of_range if unknown.
  [[nodiscard]] std::size_t index_of(PlatformId id) const;
  [[nodiscard]] const std::vector<KinematicState>& states(std::size_t platform_index) const {
    return states_.at(platform_index);
  }

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;

 private:
  double dt_s_ = 1.0;
  int num_steps_ = 0;
  std::vector<PlatformId> ids_;
  std::vector<std::vector<KinematicState>> states_;
};

/// Throws ConfigError describing the first violated invariant.
void validate(const ScenarioConfig& config);

/// Piecewise constant-velocity interpolation of every platform's waypoints.
[[nodiscard]] GroundTruth build_scenario(const ScenarioConfig& config);

/// Throws std::out_of_range for an unknown platform or index.
[[nodiscard]] KinematicState truth_state_at(const GroundTruth& truth, PlatformId platform_id,
                                            Timestep k);

/// Three moving platforms and one stationary platform in a 1200 m square
/// centred on the origin, dt = 1 s, 100 s.
[[nodiscard]] ScenarioConfig default_scenario();

}  // namespace stb
