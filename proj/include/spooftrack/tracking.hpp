#pragma once

#include "spooftrack/estimation.hpp"
#include "spooftrack/sensing.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stb {

enum class TrackStatus { Tentative, Confirmed, Deleted };

[[nodiscard]] std::string to_string(TrackStatus status);
[[nodiscard]] TrackStatus parse_track_status(const std::string& name);

struct LifecycleParams {
  /// Confirm after confirm_m hits within the last confirm_n steps.
  int confirm_m = 2;
  int confirm_n = 3;
  /// Delete after delete_k consecutive misses.
  int delete_k = 5;
};

struct TrackerParams {
  /// Chi-square gate; 9.21 is the 99% point for 2 degrees of freedom.
  double gamma = 9.21;
  double q = 1.0;
  double v_max = 50.0;
  double p_birth = 1.0;
  /// JPDA: a step counts as a hit when 1 - beta_0 reaches this.
  double hit_threshold = 0.5;
  double p_detect = 0.9;
  /// Clutter density per square meter; the JPDA miss mass is
  /// clutter_density * (1 - p_detect) / p_detect.
  double clutter_density = 2.0 / (1200.0 * 1200.0);
  LifecycleParams lifecycle;
};

void validate(const TrackerParams& params);

struct AssignmentEntry {
  Timestep t = 0;
  /// nullopt records a MISS.
  std::optional<DetectionId> detection_id;
  double score = 0.0;
};

struct Track {
  TrackId track_id = 0;
  KinematicEstimate estimate;
  TrackStatus status = TrackStatus::Tentative;
  /// Most recent confirm_n hit flags, oldest first.
  std::deque<bool> hit_history;
  int miss_streak = 0;
  std::vector<AssignmentEntry> assignment_history;
  Timestep birth_t = 0;
};

/// M-of-N confirmation and K-miss deletion. Throws std::logic_error on a Deleted track.
[[nodiscard]] Track lifecycle_update(Track track, bool hit, const LifecycleParams& params);

/// Spawns a Tentative track from each detection with probability p_birth.
/// The draw for detection d uses the stream (birth_seed, kBirth, t, d.detection_id).
[[nodiscard]] std::vector<Track> birth_tracks(std::span<const Detection> unassigned,
                                              const TrackerParams& params, TrackId& next_id,
                                              std::uint64_t birth_seed);

/// Weight a track drew from one detection: 1 for GNN, beta for JPDA.
struct ConsumedDetection {
  DetectionId detection_id = 0;
  double weight = 0.0;

  friend bool operator==(const ConsumedDetection&, const ConsumedDetection&) = default;
};

/// One track's state after a step, as logged for evaluation.
struct TrackSnapshot {
  Timestep t = 0;
  TrackId track_id = 0;
  TrackStatus status = TrackStatus::Tentative;
  Vec4 x = Vec4::Zero();
  /// GNN: the assigned detection. JPDA: the highest-beta detection.
  std::optional<DetectionId> detection_id;
  /// GNN: squared Mahalanobis cost. JPDA: beta of detection_id.
  std::optional<double> score;
  std::vector<ConsumedDetection> consumed;
  /// JPDA only.
  std::optional<double> beta0;
  bool born = false;

  friend bool operator==(const TrackSnapshot&, const TrackSnapshot&) = default;
};

struct StepResult {
  Timestep t = 0;
  std::vector<TrackSnapshot> tracks;
  std::vector<TrackId> births;
  std::vector<TrackId> deletions;
};

/// Live tracks of one tracker run plus the clock they were last predicted to.
class TrackSet {
 public:
  TrackSet(double dt_s, std::uint64_t birth_seed) : dt_s_(dt_s), birth_seed_(birth_seed) {}

  [[nodiscard]] const std::vector<Track>& tracks() const { return tracks_; }
  std::vector<Track>& tracks() { return tracks_; }

  /// Propagates every live track to timestep t.
  void predict_to(Timestep t, double q);

  /// Appends births for `unassigned` and returns their ids.
  std::vector<TrackId> spawn(std::span<const Detection> unassigned, const TrackerParams& params);

  /// Records a snapshot for each track in `births`, consuming its seed detection.
  void append_birth_snapshots(const std::vector<TrackId>& births, Timestep t,
                              std::vector<TrackSnapshot>& snapshots) const;

  /// Publishes the step's snapshots, then drops Deleted tracks.
  void finish_step(StepResult& result, std::vector<TrackSnapshot> snapshots);

 private:
  double dt_s_;
  std::uint64_t birth_seed_;
  std::optional<Timestep> clock_;
  TrackId next_id_ = 1;
  std::vector<Track> tracks_;
};

[[nodiscard]] TrackSnapshot snapshot_of(const Track& track, Timestep t);

enum class TrackerKind { Gnn, Jpda };

[[nodiscard]] std::string to_string(TrackerKind kind);
[[nodiscard]] TrackerKind parse_tracker_kind(const std::string& name);

/// Runs one tracker over a whole detection run.
[[nodiscard]] std::vector<StepResult> run_tracker(TrackerKind kind, const DetectionRun& frames,
                                                  const TrackerParams& params, double dt_s,
                                                  std::uint64_t birth_seed);

}  // namespace stb
