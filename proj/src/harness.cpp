#include "spooftrack/harness.hpp"

#include "spooftrack/io.hpp"
#include "spooftrack/rng.hpp"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace stb {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string clean_stream_id(std::uint64_t seed) { return "seed" + std::to_string(seed); }

std::vector<RunSpec> plan_runs(const BenchmarkConfig& config) {
  std::vector<RunSpec> runs;
  for (std::size_t si = 0; si < config.spoof_grid.size(); ++si) {
    for (std::size_t ti = 0; ti < config.trackers.size(); ++ti) {
      for (std::size_t ki = 0; ki < config.seeds.size(); ++ki) {
        RunSpec r;
        r.spoof_index = si;
        r.tracker_index = ti;
        r.seed_index = ki;
        r.tracker = config.trackers[ti];
        r.seed = config.seeds[ki];
        r.spoof = config.spoof_grid[si];
        r.spoof.seed = derive_key(r.seed, stream::kSpoof, si, config.spoof_grid[si].seed);
        r.birth_seed = derive_key(r.seed, stream::kBirth, si, static_cast<std::uint64_t>(r.tracker));
        std::string idx = std::to_string(si);
        if (idx.size() < 2) idx.insert(0, "0");
        r.run_id = idx + "_" + to_string(r.spoof.spoof_type) + "_" + to_string(r.tracker) + "_seed" +
                   std::to_string(r.seed);
        runs.push_back(std::move(r));
      }
    }
  }
  return runs;
}

RunArtifacts execute_run(const BenchmarkConfig& config, const GroundTruth& truth, const RunSpec& spec,
                         const std::string& digest) {
  RunArtifacts out;
  out.spec = spec;
  const DetectionRun clean = generate_clean_run(truth, config.sensor, spec.seed);
  SpoofContext ctx;
  ctx.truth = &truth;
  ctx.dt_s = config.scenario.dt_s;
  ctx.fov = config.sensor.fov;
  ctx.ghost_R = config.sensor.measurement_covariance();
  out.spoofed = apply_spoof(clean, spec.spoof, ctx);
  out.steps = run_tracker(spec.tracker, out.spoofed.spoofed_frames, config.tracker, config.scenario.dt_s,
                          spec.birth_seed);
  out.report = evaluate_run({truth, out.spoofed, spec.spoof, out.steps, config.sensor.noise_sigma_m}, config.metrics);
  out.report.run_id = spec.run_id;
  out.report.tracker = spec.tracker;
  out.report.seed = spec.seed;
  out.report.config_digest = digest;
  return out;
}

void write_run(const fs::path& dir, const BenchmarkConfig& config, const GroundTruth& truth, const RunArtifacts& run,
               const std::string& digest) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  ordered_json manifest;
  manifest["run_id"] = run.spec.run_id;
  manifest["seed"] = run.spec.seed;
  manifest["spoof_seed"] = run.spec.spoof.seed;
  manifest["birth_seed"] = run.spec.birth_seed;
  manifest["tracker"] = to_string(run.spec.tracker);
  manifest["spoof"] = to_json(run.spec.spoof);
  manifest["clean_stream_id"] = clean_stream_id(run.spec.seed);
  manifest["dt_s"] = config.scenario.dt_s;
  manifest["config_digest"] = digest;

  write_text(dir / "run_manifest.json", manifest.dump(2) + "\n");
  write_text(dir / "truth.csv", truth_csv(truth));
  write_text(dir / "clean.csv", detections_csv(run.spoofed.clean_frames, clean_stream_id(run.spec.seed)));
  write_text(dir / "spoofed.csv", detections_csv(run.spoofed.spoofed_frames, run.spec.run_id));
  write_text(dir / "spoof_log.csv", spoof_log_csv(run.spoofed.spoof_log));
  write_text(dir / "snapshots.jsonl", snapshots_jsonl(run.steps));
  write_text(dir / "report.json", to_json(run.report).dump(2) + "\n");
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<SpoofType> spoof_types_of(const BenchmarkConfig& config) {
  std::vector<SpoofType> out;
  for (const auto& s : config.spoof_grid) {
    if (std::find(out.begin(), out.end(), s.spoof_type) == out.end()) out.push_back(s.spoof_type);
  }
  return out;
}

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".write_probe";
  write_text(probe, "");
  fs::remove(probe, ec);
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& config, int jobs) {
  validate(config);
  ensure_writable(config.output_dir);

  const std::string digest = config_digest(config);
  const GroundTruth truth = build_scenario(config.scenario);
  const std::vector<RunSpec> plan = plan_runs(config);

  std::vector<RunReport> reports(plan.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.size()) return;
      try {
        const RunArtifacts run = execute_run(config, truth, plan[i], digest);
        write_run(config.output_dir / "runs" / plan[i].run_id, config, truth, run, digest);
        reports[i] = run.report;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(plan.size());
      }
    }
  };
  const auto n_workers = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(n_workers, plan.size()); ++w) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);

  ordered_json manifest;
  manifest["created_at"] = utc_timestamp();
  manifest["config_digest"] = digest;
  manifest["config"] = to_json(config);
  ordered_json runs = ordered_json::array();
  for (const auto& r : plan) {
    ordered_json e;
    e["run_id"] = r.run_id;
    e["folder"] = "runs/" + r.run_id;
    e["spoof_index"] = r.spoof_index;
    e["spoof_type"] = to_string(r.spoof.spoof_type);
    e["tracker"] = to_string(r.tracker);
    e["seed"] = r.seed;
    e["spoof_seed"] = r.spoof.seed;
    e["birth_seed"] = r.birth_seed;
    runs.push_back(std::move(e));
  }
  manifest["runs"] = std::move(runs);
  write_text(config.output_dir / "manifest.json", manifest.dump(2) + "\n");

  BenchmarkResult result;
  result.output_dir = config.output_dir;
  result.table = aggregate(reports, config.trackers, spoof_types_of(config), config.metrics.d_norm_m);
  write_text(config.output_dir / "comparison.csv", comparison_csv(result.table));
  result.reports = std::move(reports);
  return result;
}

namespace {

struct ManifestView {
  BenchmarkConfig config;
  std::vector<std::string> run_ids;
};

ManifestView read_manifest(const fs::path& report_dir) {
  const fs::path path = report_dir / "manifest.json";
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  ManifestView view;
  view.config = benchmark_from_json(j.at("config"));
  for (const auto& r : j.at("runs")) view.run_ids.push_back(r.at("run_id").get<std::string>());
  return view;
}

}  // namespace

ComparisonTable compare_trackers(const fs::path& report_dir) {
  const ManifestView view = read_manifest(report_dir);
  std::vector<RunReport> reports;
  for (const auto& id : view.run_ids) {
    const fs::path path = report_dir / "runs" / id / "report.json";
    if (!fs::exists(path)) continue;
    reports.push_back(run_report_from_json(json::parse(read_text(path))));
  }
  ComparisonTable table =
      aggregate(reports, view.config.trackers, spoof_types_of(view.config), view.config.metrics.d_norm_m);
  write_text(report_dir / "comparison.csv", comparison_csv(table));
  return table;
}

ExportSummary export_plot_data(const fs::path& report_dir) {
  const ManifestView view = read_manifest(report_dir);
  ExportSummary summary;
  for (const auto& id : view.run_ids) {
    const fs::path run_dir = report_dir / "runs" / id;
    if (!fs::exists(run_dir / "report.json")) continue;
    const RunReport report = run_report_from_json(json::parse(read_text(run_dir / "report.json")));
    const GroundTruth truth = parse_truth_csv(read_text(run_dir / "truth.csv"), view.config.scenario.dt_s);
    const DetectionRun clean = parse_detections_csv(read_text(run_dir / "clean.csv"));
    const DetectionRun spoofed = parse_detections_csv(read_text(run_dir / "spoofed.csv"));
    const auto snapshots = parse_snapshots_jsonl(read_text(run_dir / "snapshots.jsonl"));

    const fs::path out_dir = report_dir / "plots" / id;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string());

    std::ostringstream heat;
    heat << "platform_id";
    const std::size_t T = report.drift.error_matrix.empty() ? 0 : report.drift.error_matrix.front().size();
    for (std::size_t k = 0; k < T; ++k) heat << ",t" << k;
    heat << '\n';
    for (std::size_t p = 0; p < report.drift.error_matrix.size(); ++p) {
      heat << report.drift.per_platform[p].platform_id;
      for (double e : report.drift.error_matrix[p]) {
        heat << ',';
        if (!std::isnan(e)) heat << format_number(e);
      }
      heat << '\n';
    }

    std::ostringstream purity;
    purity << "t,purity\n";
    for (std::size_t k = 0; k < report.purity.timeline.size(); ++k) {
      purity << k << ',';
      if (report.purity.timeline[k]) purity << format_number(*report.purity.timeline[k]);
      purity << '\n';
    }

    struct EventRow {
      Timestep t;
      std::string text;
    };
    std::vector<EventRow> rows;
    for (const auto& e : report.divergence.events) {
      const bool inside = report.has_window && report.window.contains(e.t);
      rows.push_back({e.t, std::to_string(e.t) + ",switch," + std::to_string(e.platform_id) + "," +
                               std::to_string(e.from_track) + "," + std::to_string(e.to_track) + "," +
                               (inside ? "1" : "0")});
    }
    if (report.has_window) {
      for (Timestep t = report.window.start; t <= report.window.end; ++t) {
        rows.push_back({t, std::to_string(t) + ",spoof_window,,,,1"});
      }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const EventRow& a, const EventRow& b) { return a.t < b.t; });
    std::string events = "t,event,platform_id,from_track,to_track,in_spoof_window\n";
    for (const auto& r : rows) events += r.text + "\n";

    std::ostringstream overlay;
    overlay << "kind,t,id,x,y,label\n";
    for (int k = 0; k < truth.num_steps(); ++k) {
      for (std::size_t p = 0; p < truth.num_platforms(); ++p) {
        const auto& s = truth.states(p)[static_cast<std::size_t>(k)];
        overlay << "truth," << k << ',' << truth.platform_ids()[p] << ',' << format_number(s.position.x()) << ','
                << format_number(s.position.y()) << ",truth\n";
      }
    }
    auto detections = [&overlay](const DetectionRun& run, const char* kind) {
      for (const auto& f : run) {
        for (const auto& d : f.detections) {
          overlay << kind << ',' << d.t << ',' << d.detection_id << ',' << format_number(d.z.x()) << ','
                  << format_number(d.z.y()) << ',' << to_string(d.label) << '\n';
        }
      }
    };
    detections(clean, "clean_detection");
    detections(spoofed, "spoofed_detection");
    for (const auto& s : snapshots) {
      overlay << "track," << s.t << ',' << s.track_id << ',' << format_number(s.x(0)) << ',' << format_number(s.x(1))
              << ',' << to_string(s.status) << '\n';
    }

    const std::pair<const char*, std::string> files[] = {
        {"drift_heatmap.csv", heat.str()},
        {"purity_timeline.csv", purity.str()},
        {"events.csv", events},
        {"overlay.csv", overlay.str()},
    };
    for (const auto& [name, text] : files) {
      write_text(out_dir / name, text);
      summary.files.push_back(out_dir / name);
    }
    ++summary.runs;
  }
  return summary;
}

}  // namespace stb
