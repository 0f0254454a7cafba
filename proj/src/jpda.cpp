#include "spooftrack/jpda.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stb {

double BetaVector::sum() const {
  double s = beta0;
  for (double b : betas) s += b;
  return s;
}

double miss_mass(const TrackerParams& params) {
  return params.clutter_density * (1.0 - params.p_detect) / params.p_detect;
}

double gaussian_likelihood(double d2, const Mat2& S) {
  return std::exp(-0.5 * d2) / (2.0 * std::numbers::pi * std::sqrt(S.determinant()));
}

BetaVector association_probabilities(const GateResult& gated, double miss_mass) {
  BetaVector beta;
  if (gated.pairs.empty()) return beta;

  std::vector<double> likelihood;
  likelihood.reserve(gated.pairs.size());
  double total = miss_mass;
  for (const auto& pair : gated.pairs) {
    likelihood.push_back(gaussian_likelihood(pair.d2, pair.S));
    total += likelihood.back();
  }
  if (!(total > 0.0)) return beta;

  beta.beta0 = miss_mass / total;
  for (std::size_t i = 0; i < gated.pairs.size(); ++i) {
    beta.detection_ids.push_back(gated.pairs[i].detection_id);
    beta.betas.push_back(likelihood[i] / total);
  }
  return beta;
}

KinematicEstimate composite_update(const KinematicEstimate& prior, const DetectionFrame& frame,
                                   const GateResult& gated, const BetaVector& beta) {
  if (gated.pairs.empty()) return prior;

  std::vector<KinematicEstimate> posteriors;
  posteriors.reserve(gated.pairs.size());
  KinematicEstimate out;
  out.x = beta.beta0 * prior.x;
  for (std::size_t i = 0; i < gated.pairs.size(); ++i) {
    const Detection& d = frame.detections[gated.pairs[i].detection_index];
    posteriors.push_back(kf_update(prior, d.z, d.R).estimate);
    out.x += beta.betas[i] * posteriors.back().x;
  }

  Vec4 spread = prior.x - out.x;
  out.P = beta.beta0 * (prior.P + spread * spread.transpose());
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    spread = posteriors[i].x - out.x;
    out.P += beta.betas[i] * (posteriors[i].P + spread * spread.transpose());
  }
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  return out;
}

StepResult jpda_step(TrackSet& tracks, const DetectionFrame& frame, const TrackerParams& params) {
  tracks.predict_to(frame.t, params.q);
  StepResult result;
  result.t = frame.t;
  const double clutter_mass = miss_mass(params);

  auto& live = tracks.tracks();
  std::vector<bool> in_any_gate(frame.detections.size(), false);
  std::vector<TrackSnapshot> snapshots;
  snapshots.reserve(live.size());
  for (Track& track : live) {
    const GateResult gated = gate(frame, track.estimate, params.gamma, track.track_id);
    const BetaVector beta = association_probabilities(gated, clutter_mass);
    for (const auto& pair : gated.pairs) in_any_gate[pair.detection_index] = true;

    track.estimate = composite_update(track.estimate, frame, gated, beta);
    const bool hit = 1.0 - beta.beta0 >= params.hit_threshold;

    TrackSnapshot s;
    if (!beta.betas.empty()) {
      const auto best = static_cast<std::size_t>(
          std::max_element(beta.betas.begin(), beta.betas.end()) - beta.betas.begin());
      s.detection_id = beta.detection_ids[best];
      s.score = beta.betas[best];
      track.assignment_history.push_back({frame.t, beta.detection_ids[best], beta.betas[best]});
    } else {
      track.assignment_history.push_back({frame.t, std::nullopt, 0.0});
    }
    track = lifecycle_update(std::move(track), hit, params.lifecycle);

    const TrackSnapshot base = snapshot_of(track, frame.t);
    s.t = base.t;
    s.track_id = base.track_id;
    s.status = base.status;
    s.x = base.x;
    s.beta0 = beta.beta0;
    for (std::size_t i = 0; i < beta.betas.size(); ++i) {
      s.consumed.push_back({beta.detection_ids[i], beta.betas[i]});
    }
    snapshots.push_back(std::move(s));
  }

  std::vector<Detection> ungated;
  for (std::size_t i = 0; i < frame.detections.size(); ++i) {
    if (!in_any_gate[i]) ungated.push_back(frame.detections[i]);
  }
  result.births = tracks.spawn(ungated, params);
  tracks.append_birth_snapshots(result.births, frame.t, snapshots);
  tracks.finish_step(result, std::move(snapshots));
  return result;
}

}  // namespace stb
