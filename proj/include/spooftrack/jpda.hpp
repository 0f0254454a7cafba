#pragma once

#include "spooftrack/tracking.hpp"

#include <vector>

namespace stb {

/// Association weights of one track: beta_0 for "no detection is mine" and
/// one beta per gated detection, in gate order.
struct BetaVector {
  double beta0 = 1.0;
  std::vector<DetectionId> detection_ids;
  std::vector<double> betas;

  [[nodiscard]] double sum() const;
};

/// C = clutter_density * (1 - p_detect) / p_detect.
[[nodiscard]] double miss_mass(const TrackerParams& params);

/// Gaussian measurement likelihood exp(-d2 / 2) / (2 pi sqrt(det S)).
[[nodiscard]] double gaussian_likelihood(double d2, const Mat2& S);

/// beta_i = L_i / (C + sum_k L_k), beta_0 = C / (C + sum_k L_k), normalised
/// per track. An empty gate gives beta_0 = 1.
[[nodiscard]] BetaVector association_probabilities(const GateResult& gated, double miss_mass);

/// Moment-matched mixture of the per-detection Kalman posteriors and the
/// prior, weighted by beta; the covariance includes the spread of means.
[[nodiscard]] KinematicEstimate composite_update(const KinematicEstimate& prior,
                                                 const DetectionFrame& frame,
                                                 const GateResult& gated, const BetaVector& beta);

/// Per-track JPDA step. A track scores a hit when 1 - beta_0 >= hit_threshold;
/// detections outside every gate seed new tracks.
[[nodiscard]] StepResult jpda_step(TrackSet& tracks, const DetectionFrame& frame,
                                   const TrackerParams& params);

}  // namespace stb
