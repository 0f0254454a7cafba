#pragma once

#include "spooftrack/scenario.hpp"
#include "spooftrack/sensing.hpp"
#include "spooftrack/spoofing.hpp"
#include "spooftrack/tracking.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stb {

/// Shortest round-trip decimal text of x.
[[nodiscard]] std::string format_number(double x);

/// run_id,t,detection_id,x,y,r_xx,r_xy,r_yy,label,truth_id
[[nodiscard]] std::string detections_csv(const DetectionRun& run, std::string_view run_id);
[[nodiscard]] DetectionRun parse_detections_csv(std::string_view text);

/// t,detection_id,spoof_type,orig_x,orig_y (orig_* empty for ghosts)
[[nodiscard]] std::string spoof_log_csv(const std::vector<SpoofLogEntry>& log);

/// t,platform_id,x,y,vx,vy
[[nodiscard]] std::string truth_csv(const GroundTruth& truth);
[[nodiscard]] GroundTruth parse_truth_csv(std::string_view text, double dt_s);

/// One JSON object per line:
/// t, track_id, status, x, y, vx, vy, detection_id, score, consumed, [beta0], born.
[[nodiscard]] std::string snapshots_jsonl(const std::vector<StepResult>& steps);
[[nodiscard]] std::vector<TrackSnapshot> parse_snapshots_jsonl(std::string_view text);

[[nodiscard]] Label parse_label(std::string_view text, std::string_view truth_id);

/// Throw IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view text);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);

}  // namespace stb
