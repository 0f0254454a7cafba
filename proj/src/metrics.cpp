#include "spooftrack/metrics.hpp"

#include "spooftrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stb {

Provenance::Provenance(const DetectionRun& frames) {
  for (const auto& frame : frames) {
    for (const auto& d : frame.detections) labels_.emplace(d.detection_id, d.label);
  }
}

const Label* Provenance::find(DetectionId id) const {
  const auto it = labels_.find(id);
  return it == labels_.end() ? nullptr : &it->second;
}

SourceColumns::SourceColumns(const GroundTruth& truth)
    : num_platforms_(truth.num_platforms()), ids_(truth.platform_ids()) {
  for (std::size_t i = 0; i < ids_.size(); ++i) platform_column_.emplace(ids_[i], i);
}

std::size_t SourceColumns::column_of(const Label* label) const {
  if (label == nullptr) return clutter();
  switch (label->kind) {
    case Label::Kind::Spoof: return spoof();
    case Label::Kind::Clutter: return clutter();
    case Label::Kind::Clean: {
      const auto it = platform_column_.find(*label->truth_id);
      return it == platform_column_.end() ? clutter() : it->second;
    }
  }
  return clutter();
}

std::vector<std::string> SourceColumns::names() const {
  std::vector<std::string> out;
  for (PlatformId id : ids_) out.push_back("platform_" + std::to_string(id));
  out.emplace_back("clutter");
  out.emplace_back("spoof");
  return out;
}

std::optional<PlatformId> TruthCorrespondence::platform_of(Timestep t, TrackId track) const {
  if (t < 0 || static_cast<std::size_t>(t) >= per_step.size()) return std::nullopt;
  const auto& m = per_step[static_cast<std::size_t>(t)];
  const auto it = m.find(track);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::optional<TrackId> TruthCorrespondence::track_of(Timestep t, PlatformId platform) const {
  if (t < 0 || static_cast<std::size_t>(t) >= per_step.size()) return std::nullopt;
  for (const auto& [track, p] : per_step[static_cast<std::size_t>(t)]) {
    if (p == platform) return track;
  }
  return std::nullopt;
}

namespace {

bool is_confirmed(const TrackSnapshot& s) { return s.status == TrackStatus::Confirmed; }

bool is_update(const TrackSnapshot& s) {
  return is_confirmed(s) && !s.born && !s.consumed.empty();
}

const TrackSnapshot* find_snapshot(const StepResult& step, TrackId id) {
  for (const auto& s : step.tracks) {
    if (s.track_id == id) return &s;
  }
  return nullptr;
}

}  // namespace

TruthCorrespondence match_tracks_to_truth(const std::vector<StepResult>& steps,
                                          const GroundTruth& truth, double cutoff_m) {
  TruthCorrespondence out;
  out.per_step.resize(static_cast<std::size_t>(truth.num_steps()));
  for (const auto& step : steps) {
    if (step.t < 0 || step.t >= truth.num_steps()) continue;
    std::vector<const TrackSnapshot*> rows;
    for (const auto& s : step.tracks) {
      if (is_confirmed(s)) rows.push_back(&s);
    }
    if (rows.empty()) continue;
    CostMatrix costs(rows.size(), truth.num_platforms());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t p = 0; p < truth.num_platforms(); ++p) {
        const Vec2& pos = truth.states(p)[static_cast<std::size_t>(step.t)].position;
        const double d = (rows[r]->x.head<2>() - pos).norm();
        if (d <= cutoff_m) costs(r, p) = d;
      }
    }
    const Assignment a = hungarian(costs, cutoff_m);
    auto& m = out.per_step[static_cast<std::size_t>(step.t)];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (a.row_to_col[r]) m.emplace(rows[r]->track_id, truth.platform_ids()[*a.row_to_col[r]]);
    }
  }
  return out;
}

DriftStats drift_from_truth(const std::vector<StepResult>& steps,
                            const TruthCorrespondence& correspondence, const GroundTruth& truth) {
  const std::size_t P = truth.num_platforms();
  const auto T = static_cast<std::size_t>(truth.num_steps());
  DriftStats out;
  out.error_matrix.assign(P, std::vector<double>(T, std::numeric_limits<double>::quiet_NaN()));

  for (const auto& step : steps) {
    if (step.t < 0 || static_cast<std::size_t>(step.t) >= T) continue;
    const auto k = static_cast<std::size_t>(step.t);
    for (const auto& [track, platform] : correspondence.per_step[k]) {
      const TrackSnapshot* s = find_snapshot(step, track);
      if (s == nullptr) continue;
      const std::size_t p = truth.index_of(platform);
      out.error_matrix[p][k] = (s->x.head<2>() - truth.states(p)[k].position).norm();
    }
  }

  double total = 0.0;
  int count = 0;
  for (std::size_t p = 0; p < P; ++p) {
    PlatformDrift pd;
    pd.platform_id = truth.platform_ids()[p];
    double sum = 0.0;
    for (double e : out.error_matrix[p]) {
      if (std::isnan(e)) {
        ++pd.gap_steps;
        continue;
      }
      sum += e;
      pd.max_m = std::max(pd.max_m, e);
      ++pd.matched_steps;
    }
    if (pd.matched_steps > 0) pd.mean_m = sum / pd.matched_steps;
    total += sum;
    count += pd.matched_steps;
    out.max_m = std::max(out.max_m, pd.max_m);
    out.per_platform.push_back(pd);
  }
  out.empty = count == 0;
  if (count > 0) out.mean_m = total / count;
  return out;
}

DivergenceStats assignment_divergence(const std::vector<StepResult>& steps,
                                      const TruthCorrespondence& correspondence,
                                      const Provenance& provenance, const GroundTruth& truth) {
  const SourceColumns columns(truth);
  const std::size_t P = truth.num_platforms();
  DivergenceStats out;
  out.columns = columns.names();
  out.switches_per_platform.assign(P, 0);
  out.confusion.assign(P, std::vector<double>(columns.size(), 0.0));
  out.row_has_data.assign(P, false);

  std::vector<std::optional<TrackId>> last(P);
  for (Timestep t = 0; t < static_cast<Timestep>(correspondence.per_step.size()); ++t) {
    for (std::size_t p = 0; p < P; ++p) {
      const auto track = correspondence.track_of(t, truth.platform_ids()[p]);
      if (!track) continue;
      if (last[p] && *last[p] != *track) {
        ++out.switches_per_platform[p];
        out.events.push_back({t, truth.platform_ids()[p], *last[p], *track});
      }
      last[p] = track;
    }
  }
  for (int n : out.switches_per_platform) out.switch_count += n;

  for (const auto& step : steps) {
    for (const auto& s : step.tracks) {
      if (!is_update(s)) continue;
      const auto platform = correspondence.platform_of(step.t, s.track_id);
      if (!platform) continue;
      auto& row = out.confusion[truth.index_of(*platform)];
      for (const auto& c : s.consumed) row[columns.column_of(provenance.find(c.detection_id))] += c.weight;
    }
  }
  for (std::size_t p = 0; p < P; ++p) {
    double sum = 0.0;
    for (double v : out.confusion[p]) sum += v;
    if (sum <= 0.0) continue;
    out.row_has_data[p] = true;
    for (double& v : out.confusion[p]) v /= sum;
  }
  return out;
}

std::optional<UpdatePurity> update_purity(const std::vector<ConsumedDetection>& consumed,
                                          const Provenance& provenance, const SourceColumns& columns) {
  std::vector<double> weight(columns.size(), 0.0);
  double total = 0.0;
  for (const auto& c : consumed) {
    weight[columns.column_of(provenance.find(c.detection_id))] += c.weight;
    total += c.weight;
  }
  if (!(total > 0.0)) return std::nullopt;
  const auto best = static_cast<std::size_t>(std::max_element(weight.begin(), weight.end()) - weight.begin());
  return UpdatePurity{weight[best] / total, best, best == columns.spoof()};
}

PurityStats cluster_purity(const std::vector<StepResult>& steps, const Provenance& provenance,
                           const GroundTruth& truth) {
  const SourceColumns columns(truth);
  PurityStats out;
  out.timeline.assign(static_cast<std::size_t>(truth.num_steps()), std::nullopt);
  for (const auto& step : steps) {
    if (step.t < 0 || step.t >= truth.num_steps()) continue;
    double sum = 0.0;
    int n = 0;
    for (const auto& s : step.tracks) {
      if (!is_update(s)) continue;
      const auto purity = update_purity(s.consumed, provenance, columns);
      if (!purity) continue;
      sum += purity->purity;
      ++n;
      ++out.updates;
      if (purity->spoof_majority) ++out.spoof_majority_updates;
    }
    if (n > 0) out.timeline[static_cast<std::size_t>(step.t)] = sum / n;
  }
  return out;
}

SpoofStats spoof_stats(const std::vector<StepResult>& steps, const std::vector<SpoofLogEntry>& spoof_log,
                       const SpoofConfig& spoof, const TruthCorrespondence& correspondence,
                       const GroundTruth& truth, const Provenance& provenance, double noise_sigma_m,
                       const MetricsParams& params) {
  SpoofStats out;

  int updates = 0;
  int spoof_dominated = 0;
  double clean_weight = 0.0;
  double misattributed = 0.0;
  for (const auto& step : steps) {
    for (const auto& s : step.tracks) {
      if (!is_update(s)) continue;
      ++updates;
      double spoof_weight = 0.0;
      const auto platform = correspondence.platform_of(step.t, s.track_id);
      for (const auto& c : s.consumed) {
        const Label* label = provenance.find(c.detection_id);
        if (label == nullptr) continue;
        if (label->is_spoof()) spoof_weight += c.weight;
        if (label->is_clean() && platform) {
          clean_weight += c.weight;
          if (*label->truth_id != *platform) misattributed += c.weight;
        }
      }
      if (spoof_weight > 0.5) ++spoof_dominated;
    }
  }
  if (updates > 0) out.inclusion = static_cast<double>(spoof_dominated) / updates;
  if (clean_weight > 0.0) out.false_attribution = misattributed / clean_weight;

  if (spoof_log.empty() || spoof.spoof_type == SpoofType::Clean) {
    out.recovery = 1.0;
    return out;
  }
  const double eps = params.recovery_sigma_mult * noise_sigma_m;
  std::vector<const StepResult*> step_at(static_cast<std::size_t>(truth.num_steps()), nullptr);
  for (const auto& step : steps) {
    if (step.t >= 0 && step.t < truth.num_steps()) step_at[static_cast<std::size_t>(step.t)] = &step;
  }
  int affected = 0;
  int recovered = 0;
  for (std::size_t p = 0; p < truth.num_platforms(); ++p) {
    const PlatformId id = truth.platform_ids()[p];
    if (!spoof.targets(id)) continue;
    ++affected;
    int streak = 0;
    bool ok = false;
    for (Timestep t = spoof.window.end + 1; t < truth.num_steps() && !ok; ++t) {
      const auto track = correspondence.track_of(t, id);
      const StepResult* step = step_at[static_cast<std::size_t>(t)];
      const TrackSnapshot* s = track && step ? find_snapshot(*step, *track) : nullptr;
      const bool close =
          s != nullptr && (s->x.head<2>() - truth.states(p)[static_cast<std::size_t>(t)].position).norm() <= eps;
      streak = close ? streak + 1 : 0;
      ok = streak >= params.recovery_steps;
    }
    if (ok) ++recovered;
  }
  out.recovery = affected == 0 ? 1.0 : static_cast<double>(recovered) / affected;
  return out;
}

double normalized_impact(double mean_drift_m, double d_norm_m) { return 100.0 * mean_drift_m / d_norm_m; }

RunReport evaluate_run(const RunInputs& in, const MetricsParams& params) {
  const Provenance provenance(in.spoofed.spoofed_frames);
  const TruthCorrespondence corr = match_tracks_to_truth(in.steps, in.truth, params.match_cutoff_m);

  RunReport report;
  report.spoof_type = in.spoof.spoof_type;
  report.seed = in.spoofed.seed;
  report.has_window = in.spoof.spoof_type != SpoofType::Clean;
  report.window = in.spoof.window;
  report.drift = drift_from_truth(in.steps, corr, in.truth);
  report.normalized_impact_pct = normalized_impact(report.drift.mean_m, params.d_norm_m);
  report.divergence = assignment_divergence(in.steps, corr, provenance, in.truth);
  report.purity = cluster_purity(in.steps, provenance, in.truth);
  report.spoof = spoof_stats(in.steps, in.spoofed.spoof_log, in.spoof, corr, in.truth, provenance,
                             in.noise_sigma_m, params);
  return report;
}

}  // namespace stb
