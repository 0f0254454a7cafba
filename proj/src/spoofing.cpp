#include "spooftrack/spoofing.hpp"

#include <cmath>
#include <numbers>

namespace stb {

void validate(const SpoofConfig& config) {
  if (config.spoof_type == SpoofType::Drift) {
    if (!(config.alpha >= 0.0)) throw ConfigError("alpha must be non-negative");
    if (std::abs(config.drift_dir.norm() - 1.0) > 1e-9) {
      throw ConfigError("drift_dir must be a unit vector");
    }
  }
  if (!(config.ghost_rate >= 0.0) || config.ghost_rate > 700.0) {
    throw ConfigError("ghost_rate must lie in [0, 700]");
  }
  if (config.ghost_placement == GhostPlacement::NearTrack &&
      !(config.ghost_inner_radius_m >= 0.0 && config.ghost_radius_m > config.ghost_inner_radius_m)) {
    throw ConfigError("ghost radii must satisfy 0 <= inner < outer");
  }
  if (config.window.start < 0 || config.window.start > config.window.end) {
    throw ConfigError("injection window must satisfy 0 <= t_start <= t_end");
  }
  if (!std::isfinite(config.mirror_x0)) throw ConfigError("mirror_x0 must be finite");
}

Vec2 reflect_across_x(const Vec2& p, double x0) { return {2.0 * x0 - p.x(), p.y()}; }

DetectionFrame inject_drift(const DetectionFrame& frame, const SpoofConfig& cfg, double t_rel_s,
                            std::vector<SpoofLogEntry>* log) {
  DetectionFrame out = frame;
  if (!cfg.window.contains(frame.t)) return out;
  const Vec2 offset = cfg.alpha * t_rel_s * cfg.drift_dir;
  for (auto& d : out.detections) {
    if (!d.label.is_clean() || !cfg.targets(*d.label.truth_id)) continue;
    if (log) log->push_back({frame.t, d.detection_id, SpoofType::Drift, d.z});
    d.z = d.z + offset;
    d.label = Label::spoof(SpoofType::Drift, d.label.truth_id);
  }
  return out;
}

DetectionFrame inject_ghost(const DetectionFrame& frame, const SpoofConfig& cfg, CounterRng& rng,
                            const Box& fov, std::span<const Vec2> anchors, const Mat2& R,
                            DetectionId& next_id, std::vector<SpoofLogEntry>* log) {
  DetectionFrame out = frame;
  if (!cfg.window.contains(frame.t)) return out;
  const int count = rng.poisson(cfg.ghost_rate);
  for (int i = 0; i < count; ++i) {
    Vec2 z;
    if (cfg.ghost_placement == GhostPlacement::NearTrack && !anchors.empty()) {
      const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(anchors.size()));
      const Vec2& centre = anchors[std::min(pick, anchors.size() - 1)];
      const double r_in2 = cfg.ghost_inner_radius_m * cfg.ghost_inner_radius_m;
      const double r_out2 = cfg.ghost_radius_m * cfg.ghost_radius_m;
      const double r = std::sqrt(r_in2 + rng.uniform() * (r_out2 - r_in2));
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      z = centre + r * Vec2(std::cos(theta), std::sin(theta));
    } else {
      const double x = rng.uniform(fov.x_min, fov.x_max);
      const double y = rng.uniform(fov.y_min, fov.y_max);
      z = Vec2(x, y);
    }
    const DetectionId id = next_id++;
    out.detections.push_back({frame.t, z, R, Label::spoof(SpoofType::Ghost, std::nullopt), id});
    if (log) log->push_back({frame.t, id, SpoofType::Ghost, std::nullopt});
  }
  return out;
}

DetectionFrame inject_mirror(const DetectionFrame& frame, const SpoofConfig& cfg,
                             DetectionId& next_id, std::vector<SpoofLogEntry>* log) {
  DetectionFrame out = frame;
  if (!cfg.window.contains(frame.t)) return out;
  for (const auto& d : frame.detections) {
    if (!d.label.is_clean() || !cfg.targets(*d.label.truth_id)) continue;
    const DetectionId id = next_id++;
    out.detections.push_back({frame.t, reflect_across_x(d.z, cfg.mirror_x0), d.R,
                              Label::spoof(SpoofType::Mirror, d.label.truth_id), id});
    if (log) log->push_back({frame.t, id, SpoofType::Mirror, d.z});
  }
  return out;
}

SpoofedRun apply_spoof(const DetectionRun& clean_run, const SpoofConfig& cfg,
                       const SpoofContext& ctx) {
  validate(cfg);
  SpoofedRun result;
  result.clean_frames = clean_run;
  result.seed = cfg.seed;

  const Timestep last = clean_run.empty() ? -1 : clean_run.back().t;
  if (cfg.spoof_type == SpoofType::Clean || cfg.window.start > last) {
    result.spoofed_frames = clean_run;
    return result;
  }
  if (cfg.window.end > last) {
    throw ConfigError("injection window [" + std::to_string(cfg.window.start) + ", " +
                      std::to_string(cfg.window.end) + "] extends past the last timestep " +
                      std::to_string(last));
  }
  if (cfg.spoof_type == SpoofType::Ghost && cfg.ghost_placement == GhostPlacement::NearTrack &&
      ctx.truth == nullptr) {
    throw ConfigError("near-track ghost placement needs ground truth");
  }

  DetectionId next_id = max_detection_id(clean_run) + 1;
  result.spoofed_frames.reserve(clean_run.size());
  std::vector<Vec2> anchors;
  for (const auto& frame : clean_run) {
    switch (cfg.spoof_type) {
      case SpoofType::Drift: {
        const double t_rel = (frame.t - cfg.window.start) * ctx.dt_s;
        result.spoofed_frames.push_back(inject_drift(frame, cfg, t_rel, &result.spoof_log));
        break;
      }
      case SpoofType::Ghost: {
        anchors.clear();
        if (ctx.truth != nullptr && frame.t < ctx.truth->num_steps()) {
          for (std::size_t p = 0; p < ctx.truth->num_platforms(); ++p) {
            if (cfg.targets(ctx.truth->platform_ids()[p])) {
              anchors.push_back(ctx.truth->states(p)[static_cast<std::size_t>(frame.t)].position);
            }
          }
        }
        CounterRng rng(cfg.seed, stream::kSpoof, static_cast<std::uint64_t>(frame.t), 0);
        result.spoofed_frames.push_back(
            inject_ghost(frame, cfg, rng, ctx.fov, anchors, ctx.ghost_R, next_id, &result.spoof_log));
        break;
      }
      case SpoofType::Mirror:
        result.spoofed_frames.push_back(inject_mirror(frame, cfg, next_id, &result.spoof_log));
        break;
      case SpoofType::Clean:
        result.spoofed_frames.push_back(frame);
        break;
    }
  }
  return result;
}

}  // namespace stb
