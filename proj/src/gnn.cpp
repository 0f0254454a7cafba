#include "spooftrack/gnn.hpp"

#include <algorithm>
#include <map>

namespace stb {

GnnCostMatrix build_cost_matrix(const std::vector<Track>& tracks, const DetectionFrame& frame,
                                double gamma) {
  std::vector<GateResult> gates;
  gates.reserve(tracks.size());
  // detection id -> frame index, ordered by id.
  std::map<DetectionId, std::size_t> gated;
  for (const auto& track : tracks) {
    gates.push_back(gate(frame, track.estimate, gamma, track.track_id));
    for (const auto& pair : gates.back().pairs) gated.emplace(pair.detection_id, pair.detection_index);
  }

  GnnCostMatrix out;
  std::map<DetectionId, std::size_t> column_of;
  for (const auto& [id, index] : gated) {
    column_of.emplace(id, out.column_detection.size());
    out.column_detection.push_back(index);
  }
  out.costs = CostMatrix(tracks.size(), out.column_detection.size());
  for (std::size_t r = 0; r < gates.size(); ++r) {
    for (const auto& pair : gates[r].pairs) out.costs(r, column_of.at(pair.detection_id)) = pair.d2;
  }
  return out;
}

Assignment staged_assignment(const std::vector<Track>& tracks, const CostMatrix& costs, double miss_cost) {
  Assignment out;
  out.row_to_col.assign(tracks.size(), std::nullopt);
  std::vector<bool> taken(costs.cols(), false);
  for (const bool confirmed_pass : {true, false}) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < tracks.size(); ++r) {
      if ((tracks[r].status == TrackStatus::Confirmed) == confirmed_pass) rows.push_back(r);
    }
    if (rows.empty()) continue;
    CostMatrix sub(rows.size(), costs.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t c = 0; c < costs.cols(); ++c) {
        if (!taken[c]) sub(i, c) = costs(rows[i], c);
      }
    }
    const Assignment a = hungarian(sub, miss_cost);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!a.row_to_col[i]) continue;
      out.row_to_col[rows[i]] = a.row_to_col[i];
      taken[*a.row_to_col[i]] = true;
    }
  }
  return out;
}

StepResult gnn_step(TrackSet& tracks, const DetectionFrame& frame, const TrackerParams& params) {
  tracks.predict_to(frame.t, params.q);
  StepResult result;
  result.t = frame.t;

  auto& live = tracks.tracks();
  const GnnCostMatrix cm = build_cost_matrix(live, frame, params.gamma);
  const Assignment assignment = staged_assignment(live, cm.costs, params.gamma);

  std::vector<bool> consumed(frame.detections.size(), false);
  std::vector<TrackSnapshot> snapshots;
  snapshots.reserve(live.size());
  for (std::size_t r = 0; r < live.size(); ++r) {
    Track& track = live[r];
    const auto& col = assignment.row_to_col[r];
    if (col) {
      const std::size_t di = cm.column_detection[*col];
      const Detection& det = frame.detections[di];
      const double cost = cm.costs(r, *col);
      consumed[di] = true;
      track.estimate = kf_update(track.estimate, det.z, det.R).estimate;
      track.assignment_history.push_back({frame.t, det.detection_id, cost});
      track = lifecycle_update(std::move(track), true, params.lifecycle);
      TrackSnapshot s = snapshot_of(track, frame.t);
      s.detection_id = det.detection_id;
      s.score = cost;
      s.consumed.push_back({det.detection_id, 1.0});
      snapshots.push_back(std::move(s));
    } else {
      track.assignment_history.push_back({frame.t, std::nullopt, 0.0});
      track = lifecycle_update(std::move(track), false, params.lifecycle);
      snapshots.push_back(snapshot_of(track, frame.t));
    }
  }

  std::vector<Detection> unassigned;
  for (std::size_t i = 0; i < frame.detections.size(); ++i) {
    if (!consumed[i]) unassigned.push_back(frame.detections[i]);
  }
  result.births = tracks.spawn(unassigned, params);
  tracks.append_birth_snapshots(result.births, frame.t, snapshots);
  tracks.finish_step(result, std::move(snapshots));
  return result;
}

}  // namespace stb
