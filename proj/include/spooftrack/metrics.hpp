#pragma once

#include "spooftrack/scenario.hpp"
#include "spooftrack/sensing.hpp"
#include "spooftrack/spoofing.hpp"
#include "spooftrack/tracking.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace stb {

/// Detection id -> provenance label, built from the frames a tracker consumed.
class Provenance {
 public:
  Provenance() = default;
  explicit Provenance(const DetectionRun& frames);

  [[nodiscard]] const Label* find(DetectionId id) const;

 private:
  std::unordered_map<DetectionId, Label> labels_;
};

/// Origin categories: one per platform (in truth order), then clutter, then spoof.
class SourceColumns {
 public:
  explicit SourceColumns(const GroundTruth& truth);

  [[nodiscard]] std::size_t size() const { return num_platforms_ + 2; }
  [[nodiscard]] std::size_t clutter() const { return num_platforms_; }
  [[nodiscard]] std::size_t spoof() const { return num_platforms_ + 1; }
  /// Unknown ids and unlabelled detections count as clutter.
  [[nodiscard]] std::size_t column_of(const Label* label) const;
  [[nodiscard]] std::vector<std::string> names() const;

 private:
  std::size_t num_platforms_;
  std::map<PlatformId, std::size_t> platform_column_;
  std::vector<PlatformId> ids_;
};

/// Per-timestep one-to-one mapping of confirmed tracks to platforms.
struct TruthCorrespondence {
  std::vector<std::map<TrackId, PlatformId>> per_step;

  [[nodiscard]] std::optional<PlatformId> platform_of(Timestep t, TrackId track) const;
  [[nodiscard]] std::optional<TrackId> track_of(Timestep t, PlatformId platform) const;
};

struct MetricsParams {
  double match_cutoff_m = 100.0;
  /// Normalisation distance for the impact percentage.
  double d_norm_m = 500.0;
  /// Recovery radius as a multiple of the sensor noise sigma.
  double recovery_sigma_mult = 3.0;
  int recovery_steps = 5;
};

/// Min-cost Euclidean matching of confirmed track positions to platform
/// positions at every step; pairs farther than the cutoff stay unmatched.
[[nodiscard]] TruthCorrespondence match_tracks_to_truth(const std::vector<StepResult>& steps,
                                                        const GroundTruth& truth,
                                                        double cutoff_m = 100.0);

struct PlatformDrift {
  PlatformId platform_id = 0;
  double mean_m = 0.0;
  double max_m = 0.0;
  int matched_steps = 0;
  int gap_steps = 0;
};

struct DriftStats {
  std::vector<PlatformDrift> per_platform;
  double mean_m = 0.0;
  double max_m = 0.0;
  /// No matched (track, platform, t) triple at all.
  bool empty = true;
  /// platforms x timesteps; NaN marks a coverage gap.
  std::vector<std::vector<double>> error_matrix;
};

[[nodiscard]] DriftStats drift_from_truth(const std::vector<StepResult>& steps,
                                          const TruthCorrespondence& correspondence,
                                          const GroundTruth& truth);

struct SwitchEvent {
  Timestep t = 0;
  PlatformId platform_id = 0;
  TrackId from_track = 0;
  TrackId to_track = 0;
};

struct DivergenceStats {
  int switch_count = 0;
  std::vector<int> switches_per_platform;
  std::vector<SwitchEvent> events;
  /// platforms x sources; each row with data sums to 1.
  std::vector<std::vector<double>> confusion;
  std::vector<bool> row_has_data;
  std::vector<std::string> columns;
};

[[nodiscard]] DivergenceStats assignment_divergence(const std::vector<StepResult>& steps,
                                                    const TruthCorrespondence& correspondence,
                                                    const Provenance& provenance,
                                                    const GroundTruth& truth);

struct UpdatePurity {
  double purity = 1.0;
  std::size_t majority_column = 0;
  bool spoof_majority = false;
};

/// nullopt when nothing was consumed.
[[nodiscard]] std::optional<UpdatePurity> update_purity(const std::vector<ConsumedDetection>& consumed,
                                                        const Provenance& provenance,
                                                        const SourceColumns& columns);

struct PurityStats {
  /// Mean purity over confirmed tracks updated at each step; nullopt if none.
  std::vector<std::optional<double>> timeline;
  int updates = 0;
  int spoof_majority_updates = 0;
};

[[nodiscard]] PurityStats cluster_purity(const std::vector<StepResult>& steps,
                                         const Provenance& provenance, const GroundTruth& truth);

struct SpoofStats {
  double inclusion = 0.0;
  double recovery = 1.0;
  double false_attribution = 0.0;
};

[[nodiscard]] SpoofStats spoof_stats(const std::vector<StepResult>& steps,
                                     const std::vector<SpoofLogEntry>& spoof_log,
                                     const SpoofConfig& spoof, const TruthCorrespondence& correspondence,
                                     const GroundTruth& truth, const Provenance& provenance,
                                     double noise_sigma_m, const MetricsParams& params = {});

[[nodiscard]] double normalized_impact(double mean_drift_m, double d_norm_m = 500.0);

/// Metric bundle of one (tracker, spoof, seed) run.
struct RunReport {
  std::string run_id;
  TrackerKind tracker = TrackerKind::Gnn;
  SpoofType spoof_type = SpoofType::Clean;
  std::uint64_t seed = 0;
  std::string config_digest;
  InjectionWindow window;
  bool has_window = false;

  DriftStats drift;
  double normalized_impact_pct = 0.0;
  DivergenceStats divergence;
  PurityStats purity;
  SpoofStats spoof;
};

struct RunInputs {
  const GroundTruth& truth;
  const SpoofedRun& spoofed;
  const SpoofConfig& spoof;
  const std::vector<StepResult>& steps;
  double noise_sigma_m = 5.0;
};

[[nodiscard]] RunReport evaluate_run(const RunInputs& inputs, const MetricsParams& params = {});

}  // namespace stb
