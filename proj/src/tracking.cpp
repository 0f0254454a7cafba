#include "spooftrack/tracking.hpp"

#include "spooftrack/gnn.hpp"
#include "spooftrack/jpda.hpp"
#include "spooftrack/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace stb {

std::string to_string(TrackStatus status) {
  switch (status) {
    case TrackStatus::Tentative: return "tentative";
    case TrackStatus::Confirmed: return "confirmed";
    case TrackStatus::Deleted: return "deleted";
  }
  return "unknown";
}

TrackStatus parse_track_status(const std::string& name) {
  if (name == "tentative") return TrackStatus::Tentative;
  if (name == "confirmed") return TrackStatus::Confirmed;
  if (name == "deleted") return TrackStatus::Deleted;
  throw std::invalid_argument("unknown track status '" + name + "'");
}

std::string to_string(TrackerKind kind) { return kind == TrackerKind::Gnn ? "gnn" : "jpda"; }

TrackerKind parse_tracker_kind(const std::string& name) {
  if (name == "gnn" || name == "GNN") return TrackerKind::Gnn;
  if (name == "jpda" || name == "JPDA") return TrackerKind::Jpda;
  throw ConfigError("unknown tracker '" + name + "'");
}

void validate(const TrackerParams& params) {
  if (!(params.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(params.q >= 0.0)) throw ConfigError("q must be non-negative");
  if (!(params.v_max > 0.0)) throw ConfigError("v_max must be positive");
  if (!(params.p_birth >= 0.0 && params.p_birth <= 1.0)) throw ConfigError("p_birth must lie in [0, 1]");
  if (!(params.hit_threshold >= 0.0 && params.hit_threshold <= 1.0)) {
    throw ConfigError("hit_threshold must lie in [0, 1]");
  }
  if (!(params.p_detect > 0.0 && params.p_detect <= 1.0)) {
    throw ConfigError("tracker p_detect must lie in (0, 1]");
  }
  if (!(params.clutter_density >= 0.0)) throw ConfigError("clutter_density must be non-negative");
  const auto& lc = params.lifecycle;
  if (lc.confirm_n < 1 || lc.confirm_m < 1 || lc.confirm_m > lc.confirm_n) {
    throw ConfigError("confirmation needs 1 <= M <= N");
  }
  if (lc.delete_k < 1) throw ConfigError("delete_k must be >= 1");
}

Track lifecycle_update(Track track, bool hit, const LifecycleParams& params) {
  if (track.status == TrackStatus::Deleted) {
    throw std::logic_error("lifecycle_update on deleted track " + std::to_string(track.track_id));
  }
  track.hit_history.push_back(hit);
  while (track.hit_history.size() > static_cast<std::size_t>(params.confirm_n)) {
    track.hit_history.pop_front();
  }
  track.miss_streak = hit ? 0 : track.miss_streak + 1;
  if (track.miss_streak >= params.delete_k) {
    track.status = TrackStatus::Deleted;
  } else if (track.status == TrackStatus::Tentative) {
    const auto hits = std::count(track.hit_history.begin(), track.hit_history.end(), true);
    if (hits >= params.confirm_m) track.status = TrackStatus::Confirmed;
  }
  return track;
}

std::vector<Track> birth_tracks(std::span<const Detection> unassigned, const TrackerParams& params,
                                TrackId& next_id, std::uint64_t birth_seed) {
  std::vector<Track> born;
  for (const Detection& d : unassigned) {
    if (params.p_birth < 1.0) {
      CounterRng rng(birth_seed, stream::kBirth, static_cast<std::uint64_t>(d.t),
                     static_cast<std::uint64_t>(d.detection_id));
      if (!rng.bernoulli(params.p_birth)) continue;
    }
    Track track;
    track.track_id = next_id++;
    track.estimate = initiate_estimate(d.z, d.R, params.v_max);
    track.status = TrackStatus::Tentative;
    track.hit_history.push_back(true);
    track.birth_t = d.t;
    track.assignment_history.push_back({d.t, d.detection_id, 0.0});
    born.push_back(std::move(track));
  }
  return born;
}

void TrackSet::predict_to(Timestep t, double q) {
  if (clock_ && t <= *clock_) {
    throw std::logic_error("TrackSet clock must advance: " + std::to_string(t));
  }
  if (clock_) {
    const double dt = (t - *clock_) * dt_s_;
    for (auto& track : tracks_) track.estimate = kf_predict(track.estimate, dt, q);
  }
  clock_ = t;
}

std::vector<TrackId> TrackSet::spawn(std::span<const Detection> unassigned,
                                     const TrackerParams& params) {
  std::vector<TrackId> ids;
  for (auto& track : birth_tracks(unassigned, params, next_id_, birth_seed_)) {
    ids.push_back(track.track_id);
    tracks_.push_back(std::move(track));
  }
  return ids;
}

TrackSnapshot snapshot_of(const Track& track, Timestep t) {
  TrackSnapshot s;
  s.t = t;
  s.track_id = track.track_id;
  s.status = track.status;
  s.x = track.estimate.x;
  return s;
}

void TrackSet::append_birth_snapshots(const std::vector<TrackId>& births, Timestep t,
                                      std::vector<TrackSnapshot>& snapshots) const {
  for (const Track& track : tracks_) {
    if (std::find(births.begin(), births.end(), track.track_id) == births.end()) continue;
    TrackSnapshot s = snapshot_of(track, t);
    s.born = true;
    s.detection_id = track.assignment_history.front().detection_id;
    s.consumed.push_back({*s.detection_id, 1.0});
    snapshots.push_back(std::move(s));
  }
}

void TrackSet::finish_step(StepResult& result, std::vector<TrackSnapshot> snapshots) {
  std::sort(snapshots.begin(), snapshots.end(),
            [](const TrackSnapshot& a, const TrackSnapshot& b) { return a.track_id < b.track_id; });
  result.tracks = std::move(snapshots);
  for (const auto& track : tracks_) {
    if (track.status == TrackStatus::Deleted) result.deletions.push_back(track.track_id);
  }
  std::erase_if(tracks_, [](const Track& tr) { return tr.status == TrackStatus::Deleted; });
}

std::vector<StepResult> run_tracker(TrackerKind kind, const DetectionRun& frames,
                                    const TrackerParams& params, double dt_s,
                                    std::uint64_t birth_seed) {
  validate(params);
  TrackSet set(dt_s, birth_seed);
  std::vector<StepResult> steps;
  steps.reserve(frames.size());
  for (const auto& frame : frames) {
    steps.push_back(kind == TrackerKind::Gnn ? gnn_step(set, frame, params)
                                             : jpda_step(set, frame, params));
  }
  return steps;
}

}  // namespace stb
