#pragma once

#include "spooftrack/assignment.hpp"
#include "spooftrack/tracking.hpp"

#include <vector>

namespace stb {

/// Tracks x gated detections, squared Mahalanobis costs, kForbidden outside gates.
struct GnnCostMatrix {
  CostMatrix costs;
  /// Column -> index into the frame's detection list.
  std::vector<std::size_t> column_detection;
};

/// Rows follow `tracks` order; columns are detections gated by at least one
/// track, in detection-id order.
[[nodiscard]] GnnCostMatrix build_cost_matrix(const std::vector<Track>& tracks,
                                              const DetectionFrame& frame, double gamma);

/// Confirmed tracks are assigned first; tentative tracks then compete for the
/// columns left over. A fresh track's wide gate would otherwise let it steal
/// an established track's detection.
[[nodiscard]] Assignment staged_assignment(const std::vector<Track>& tracks, const CostMatrix& costs,
                                           double miss_cost);

/// Global Nearest Neighbor step: predict, gate, optimal one-to-one assignment
/// (unassigned tracks cost gamma), Kalman update, lifecycle, births from
/// every detection left unassigned.
[[nodiscard]] StepResult gnn_step(TrackSet& tracks, const DetectionFrame& frame,
                                  const TrackerParams& params);

}  // namespace stb
