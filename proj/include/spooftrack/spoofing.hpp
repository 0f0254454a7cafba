#pragma once

#include "spooftrack/rng.hpp"
#include "spooftrack/scenario.hpp"
#include "spooftrack/sensing.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace stb {

enum class GhostPlacement {
  /// Uniform over the sensor field of view.
  Fov,
  /// Uniform over an annulus [inner, outer] around a randomly chosen target platform.
  NearTrack,
};

struct InjectionWindow {
  Timestep start = 0;
  Timestep end = 0;

  [[nodiscard]] bool contains(Timestep t) const { return t >= start && t <= end; }
};

struct SpoofConfig {
  SpoofType spoof_type = SpoofType::Clean;
  /// Drift rate, m/s.
  double alpha = 0.0;
  Vec2 drift_dir = Vec2(1.0, 0.0);
  /// Reflection axis x = mirror_x0.
  double mirror_x0 = 0.0;
  /// Poisson mean of ghost detections per frame.
  double ghost_rate = 0.0;
  GhostPlacement ghost_placement = GhostPlacement::Fov;
  double ghost_inner_radius_m = 0.0;
  double ghost_radius_m = 50.0;
  InjectionWindow window;
  /// Empty means every platform is targeted.
  std::set<PlatformId> target_platform_ids;
  std::uint64_t seed = 0;

  [[nodiscard]] bool targets(PlatformId id) const {
    return target_platform_ids.empty() || target_platform_ids.count(id) > 0;
  }
};

/// Throws ConfigError. Horizon checks happen in apply_spoof.
void validate(const SpoofConfig& config);

struct SpoofLogEntry {
  Timestep t = 0;
  DetectionId detection_id = 0;
  SpoofType spoof_type = SpoofType::Clean;
  std::optional<Vec2> original_position;

  friend bool operator==(const SpoofLogEntry&, const SpoofLogEntry&) = default;
};

struct SpoofedRun {
  DetectionRun clean_frames;
  DetectionRun spoofed_frames;
  std::vector<SpoofLogEntry> spoof_log;
  std::uint64_t seed = 0;

  friend bool operator==(const SpoofedRun&, const SpoofedRun&) = default;
};

/// Inputs apply_spoof needs beyond the clean run itself.
struct SpoofContext {
  /// Required for NearTrack ghost placement.
  const GroundTruth* truth = nullptr;
  double dt_s = 1.0;
  Box fov;
  /// Covariance attached to ghost detections.
  Mat2 ghost_R = 25.0 * Mat2::Identity();
};

[[nodiscard]] Vec2 reflect_across_x(const Vec2& p, double x0);

/// Replaces targeted clean detections by x + alpha * t_rel * v_hat.
/// Frames outside the injection window are returned unchanged.
[[nodiscard]] DetectionFrame inject_drift(const DetectionFrame& frame, const SpoofConfig& cfg,
                                          double t_rel_s, std::vector<SpoofLogEntry>* log = nullptr);

/// Appends Poisson(ghost_rate) unlabelled-origin detections. `anchors` are the
/// positions NearTrack placement centres on; ids are taken from `next_id`.
[[nodiscard]] DetectionFrame inject_ghost(const DetectionFrame& frame, const SpoofConfig& cfg,
                                          CounterRng& rng, const Box& fov,
                                          std::span<const Vec2> anchors, const Mat2& R,
                                          DetectionId& next_id,
                                          std::vector<SpoofLogEntry>* log = nullptr);

/// Appends a reflected echo of every targeted clean detection; originals are kept.
[[nodiscard]] DetectionFrame inject_mirror(const DetectionFrame& frame, const SpoofConfig& cfg,
                                           DetectionId& next_id,
                                           std::vector<SpoofLogEntry>* log = nullptr);

/// Runs the configured injection over the whole clean run.
///
/// A window that starts after the last frame is a no-op; a window that starts
/// inside the run but ends past it is rejected.
[[nodiscard]] SpoofedRun apply_spoof(const DetectionRun& clean_run, const SpoofConfig& cfg,
                                     const SpoofContext& ctx);

}  // namespace stb
