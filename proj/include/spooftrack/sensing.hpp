#pragma once

#include "spooftrack/scenario.hpp"
#include "spooftrack/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace stb {

struct SensorConfig {
  double p_detect = 0.9;
  double noise_sigma_m = 5.0;
  /// Poisson mean of false alarms per frame.
  double clutter_rate = 2.0;
  Box fov;
  std::uint64_t seed_stream_tag = 1;

  [[nodiscard]] Mat2 measurement_covariance() const {
    return noise_sigma_m * noise_sigma_m * Mat2::Identity();
  }
};

void validate(const SensorConfig& config);

/// Ground-truth provenance of a detection. Trackers never read it.
struct Label {
  enum class Kind { Clean, Spoof, Clutter };

  Kind kind = Kind::Clutter;
  std::optional<PlatformId> truth_id;
  SpoofType spoof_type = SpoofType::Clean;

  static Label clean(PlatformId id) { return {Kind::Clean, id, SpoofType::Clean}; }
  static Label clutter() { return {Kind::Clutter, std::nullopt, SpoofType::Clean}; }
  static Label spoof(SpoofType type, std::optional<PlatformId> source) {
    return {Kind::Spoof, source, type};
  }

  [[nodiscard]] bool is_clean() const { return kind == Kind::Clean; }
  [[nodiscard]] bool is_spoof() const { return kind == Kind::Spoof; }
  [[nodiscard]] bool is_clutter() const { return kind == Kind::Clutter; }

  friend bool operator==(const Label&, const Label&) = default;
};

/// "clean", "clutter", "spoof:drift", "spoof:ghost", "spoof:mirror".
[[nodiscard]] std::string to_string(const Label& label);

struct Detection {
  Timestep t = 0;
  Vec2 z = Vec2::Zero();
  Mat2 R = Mat2::Identity();
  Label label;
  DetectionId detection_id = 0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct DetectionFrame {
  Timestep t = 0;
  std::vector<Detection> detections;

  friend bool operator==(const DetectionFrame&, const DetectionFrame&) = default;
};

using DetectionRun = std::vector<DetectionFrame>;

/// Simulates the sensor over every timestep of `truth`.
///
/// Platform p at step t draws from the stream (seed, tag, t, p); clutter at
/// step t draws from (seed, tag, t, kClutterIndex). Detection ids are
/// assigned sequentially in (t, platform order, clutter order).
[[nodiscard]] DetectionRun generate_clean_run(const GroundTruth& truth, const SensorConfig& cfg,
                                              std::uint64_t seed);

/// Largest detection id in the run, or -1 for an empty run.
[[nodiscard]] DetectionId max_detection_id(const DetectionRun& run);

}  // namespace stb
