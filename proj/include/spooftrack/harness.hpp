#pragma once

#include "spooftrack/config.hpp"
#include "spooftrack/metrics.hpp"
#include "spooftrack/report.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace stb {

/// One cell of the spoof x tracker x seed product.
struct RunSpec {
  std::size_t spoof_index = 0;
  std::size_t tracker_index = 0;
  std::size_t seed_index = 0;
  TrackerKind tracker = TrackerKind::Gnn;
  std::uint64_t seed = 0;
  /// Template with its seed replaced by the derived per-run spoof seed.
  SpoofConfig spoof;
  std::uint64_t birth_seed = 0;
  std::string run_id;
};

/// Sub-seeds: the clean stream depends on the seed alone, the spoof stream on
/// (seed, spoof index, template seed), births on (seed, spoof index, tracker
/// kind). Adding a tracker or a trailing spoof template leaves other runs intact.
[[nodiscard]] std::vector<RunSpec> plan_runs(const BenchmarkConfig& config);

/// Identifier of the clean detection stream shared by every run of a seed.
[[nodiscard]] std::string clean_stream_id(std::uint64_t seed);

struct RunArtifacts {
  RunSpec spec;
  SpoofedRun spoofed;
  std::vector<StepResult> steps;
  RunReport report;
};

/// Runs the whole pipeline for one cell in memory.
[[nodiscard]] RunArtifacts execute_run(const BenchmarkConfig& config, const GroundTruth& truth,
                                       const RunSpec& spec, const std::string& digest);

/// Writes run_manifest.json, truth.csv, clean.csv, spoofed.csv, spoof_log.csv,
/// snapshots.jsonl and report.json into `dir`.
void write_run(const std::filesystem::path& dir, const BenchmarkConfig& config, const GroundTruth& truth,
               const RunArtifacts& run, const std::string& digest);

struct BenchmarkResult {
  std::filesystem::path output_dir;
  std::vector<RunReport> reports;
  ComparisonTable table;
};

/// Validates, then executes every run on `jobs` worker threads and writes
/// runs/<run_id>/..., manifest.json and comparison.csv under config.output_dir.
BenchmarkResult run_benchmark(const BenchmarkConfig& config, int jobs = 1);

/// Re-aggregates a report directory and rewrites its comparison.csv.
ComparisonTable compare_trackers(const std::filesystem::path& report_dir);

struct ExportSummary {
  std::size_t runs = 0;
  std::vector<std::filesystem::path> files;
};

/// Writes plots/<run_id>/{drift_heatmap,purity_timeline,events,overlay}.csv.
ExportSummary export_plot_data(const std::filesystem::path& report_dir);

}  // namespace stb
