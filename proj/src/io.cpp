#include "spooftrack/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace stb {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_number(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

template <typename T>
T parse_value(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError("malformed number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Label parse_label(std::string_view text, std::string_view truth_id) {
  std::optional<PlatformId> id;
  if (!truth_id.empty()) id = parse_value<int>(truth_id);
  if (text == "clean") {
    if (!id) throw IoError("clean detection without truth_id");
    return Label::clean(*id);
  }
  if (text == "clutter") return Label::clutter();
  if (text.starts_with("spoof:")) return Label::spoof(parse_spoof_type(std::string(text.substr(6))), id);
  throw IoError("unknown label '" + std::string(text) + "'");
}

std::string detections_csv(const DetectionRun& run, std::string_view run_id) {
  std::ostringstream out;
  out << "run_id,t,detection_id,x,y,r_xx,r_xy,r_yy,label,truth_id\n";
  for (const auto& frame : run) {
    for (const auto& d : frame.detections) {
      out << run_id << ',' << d.t << ',' << d.detection_id << ',' << format_number(d.z.x()) << ','
          << format_number(d.z.y()) << ',' << format_number(d.R(0, 0)) << ',' << format_number(d.R(0, 1)) << ','
          << format_number(d.R(1, 1)) << ',' << to_string(d.label) << ',';
      if (d.label.truth_id) out << *d.label.truth_id;
      out << '\n';
    }
  }
  return out.str();
}

DetectionRun parse_detections_csv(std::string_view text) {
  DetectionRun run;
  const auto lines = lines_of(text);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 10) throw IoError("detection row needs 10 fields");
    Detection d;
    d.t = parse_value<int>(f[1]);
    d.detection_id = parse_value<DetectionId>(f[2]);
    d.z = Vec2(parse_value<double>(f[3]), parse_value<double>(f[4]));
    d.R << parse_value<double>(f[5]), parse_value<double>(f[6]), parse_value<double>(f[6]), parse_value<double>(f[7]);
    d.label = parse_label(f[8], f[9]);
    if (run.empty() || run.back().t != d.t) run.push_back({d.t, {}});
    run.back().detections.push_back(d);
  }
  return run;
}

std::string spoof_log_csv(const std::vector<SpoofLogEntry>& log) {
  std::ostringstream out;
  out << "t,detection_id,spoof_type,orig_x,orig_y\n";
  for (const auto& e : log) {
    out << e.t << ',' << e.detection_id << ',' << to_string(e.spoof_type) << ',';
    if (e.original_position) out << format_number(e.original_position->x()) << ',' << format_number(e.original_position->y());
    else out << ',';
    out << '\n';
  }
  return out.str();
}

std::string truth_csv(const GroundTruth& truth) {
  std::ostringstream out;
  out << "t,platform_id,x,y,vx,vy\n";
  for (int k = 0; k < truth.num_steps(); ++k) {
    for (std::size_t p = 0; p < truth.num_platforms(); ++p) {
      const auto& s = truth.states(p)[static_cast<std::size_t>(k)];
      out << k << ',' << truth.platform_ids()[p] << ',' << format_number(s.position.x()) << ','
          << format_number(s.position.y()) << ',' << format_number(s.velocity.x()) << ','
          << format_number(s.velocity.y()) << '\n';
    }
  }
  return out.str();
}

GroundTruth parse_truth_csv(std::string_view text, double dt_s) {
  std::vector<PlatformId> ids;
  std::map<PlatformId, std::vector<KinematicState>> states;
  const auto lines = lines_of(text);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 6) throw IoError("truth row needs 6 fields");
    const auto id = parse_value<PlatformId>(f[1]);
    if (!states.count(id)) ids.push_back(id);
    states[id].push_back({Vec2(parse_value<double>(f[2]), parse_value<double>(f[3])),
                          Vec2(parse_value<double>(f[4]), parse_value<double>(f[5]))});
  }
  std::vector<std::vector<KinematicState>> ordered;
  for (PlatformId id : ids) ordered.push_back(std::move(states[id]));
  return GroundTruth(dt_s, std::move(ids), std::move(ordered));
}

std::string snapshots_jsonl(const std::vector<StepResult>& steps) {
  std::string out;
  for (const auto& step : steps) {
    for (const auto& s : step.tracks) {
      ordered_json j;
      j["t"] = s.t;
      j["track_id"] = s.track_id;
      j["status"] = to_string(s.status);
      j["x"] = s.x(0);
      j["y"] = s.x(1);
      j["vx"] = s.x(2);
      j["vy"] = s.x(3);
      j["detection_id"] = s.detection_id ? ordered_json(*s.detection_id) : ordered_json(nullptr);
      j["score"] = s.score ? ordered_json(*s.score) : ordered_json(nullptr);
      ordered_json consumed = ordered_json::array();
      for (const auto& c : s.consumed) consumed.push_back({{"detection_id", c.detection_id}, {"weight", c.weight}});
      j["consumed"] = std::move(consumed);
      if (s.beta0) j["beta0"] = *s.beta0;
      j["born"] = s.born;
      out += j.dump();
      out += '\n';
    }
  }
  return out;
}

std::vector<TrackSnapshot> parse_snapshots_jsonl(std::string_view text) {
  std::vector<TrackSnapshot> out;
  for (const auto line : lines_of(text)) {
    const json j = json::parse(line);
    TrackSnapshot s;
    s.t = j.at("t").get<int>();
    s.track_id = j.at("track_id").get<int>();
    s.status = parse_track_status(j.at("status").get<std::string>());
    s.x << j.at("x").get<double>(), j.at("y").get<double>(), j.at("vx").get<double>(), j.at("vy").get<double>();
    if (!j.at("detection_id").is_null()) s.detection_id = j["detection_id"].get<DetectionId>();
    if (!j.at("score").is_null()) s.score = j["score"].get<double>();
    for (const auto& c : j.at("consumed")) {
      s.consumed.push_back({c.at("detection_id").get<DetectionId>(), c.at("weight").get<double>()});
    }
    if (j.contains("beta0")) s.beta0 = j["beta0"].get<double>();
    s.born = j.at("born").get<bool>();
    out.push_back(std::move(s));
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace stb
