#include "spooftrack/sensing.hpp"

#include "spooftrack/rng.hpp"

#include <algorithm>
#include <cctype>

namespace stb {

std::string to_string(SpoofType type) {
  switch (type) {
    case SpoofType::Clean: return "clean";
    case SpoofType::Drift: return "drift";
    case SpoofType::Ghost: return "ghost";
    case SpoofType::Mirror: return "mirror";
  }
  return "unknown";
}

SpoofType parse_spoof_type(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "clean") return SpoofType::Clean;
  if (lower == "drift") return SpoofType::Drift;
  if (lower == "ghost") return SpoofType::Ghost;
  if (lower == "mirror") return SpoofType::Mirror;
  throw ConfigError("unknown spoof type '" + name + "'");
}

std::string to_string(const Label& label) {
  switch (label.kind) {
    case Label::Kind::Clean: return "clean";
    case Label::Kind::Clutter: return "clutter";
    case Label::Kind::Spoof: return "spoof:" + to_string(label.spoof_type);
  }
  return "unknown";
}

void validate(const SensorConfig& config) {
  if (!(config.p_detect >= 0.0 && config.p_detect <= 1.0)) {
    throw ConfigError("p_detect must lie in [0, 1]");
  }
  if (!(config.noise_sigma_m > 0.0)) throw ConfigError("noise_sigma_m must be positive");
  if (!(config.clutter_rate >= 0.0) || config.clutter_rate > 700.0) {
    throw ConfigError("clutter_rate must lie in [0, 700]");
  }
  if (!config.fov.valid()) throw ConfigError("fov must have positive extent");
}

DetectionRun generate_clean_run(const GroundTruth& truth, const SensorConfig& cfg,
                                std::uint64_t seed) {
  validate(cfg);
  const Mat2 R = cfg.measurement_covariance();
  DetectionRun run;
  run.reserve(static_cast<std::size_t>(truth.num_steps()));
  DetectionId next_id = 0;

  for (Timestep t = 0; t < truth.num_steps(); ++t) {
    DetectionFrame frame{t, {}};
    const auto step = static_cast<std::uint64_t>(t);
    for (std::size_t p = 0; p < truth.num_platforms(); ++p) {
      const Vec2& pos = truth.states(p)[static_cast<std::size_t>(t)].position;
      if (!cfg.fov.contains(pos)) continue;
      CounterRng rng(seed, cfg.seed_stream_tag, step, p);
      if (!rng.bernoulli(cfg.p_detect)) continue;
      const double nx = rng.normal();
      const double ny = rng.normal();
      const Vec2 z = pos + cfg.noise_sigma_m * Vec2(nx, ny);
      frame.detections.push_back({t, z, R, Label::clean(truth.platform_ids()[p]), next_id++});
    }

    CounterRng clutter(seed, cfg.seed_stream_tag, step, stream::kClutterIndex);
    const int n_clutter = clutter.poisson(cfg.clutter_rate);
    for (int i = 0; i < n_clutter; ++i) {
      const double x = clutter.uniform(cfg.fov.x_min, cfg.fov.x_max);
      const double y = clutter.uniform(cfg.fov.y_min, cfg.fov.y_max);
      frame.detections.push_back({t, Vec2(x, y), R, Label::clutter(), next_id++});
    }
    run.push_back(std::move(frame));
  }
  return run;
}

DetectionId max_detection_id(const DetectionRun& run) {
  DetectionId best = -1;
  for (const auto& f : run) {
    for (const auto& d : f.detections) best = std::max(best, d.detection_id);
  }
  return best;
}

}  // namespace stb
