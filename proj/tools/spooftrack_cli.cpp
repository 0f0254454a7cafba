// Command-line front end: run, compare, export, validate.
//
// Exit codes: 0 success, 1 other failure, 2 configuration error, 3 I/O error.

#include "spooftrack/config.hpp"
#include "spooftrack/harness.hpp"
#include "spooftrack/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Keeps grid templates of the requested types; a requested type missing from
/// the grid gets the shipped default template.
void select_spoofs(stb::BenchmarkConfig& config, const std::string& list) {
  const auto defaults = stb::default_benchmark().spoof_grid;
  std::vector<stb::SpoofConfig> grid;
  for (const auto& name : split_list(list)) {
    const stb::SpoofType type = stb::parse_spoof_type(name);
    bool found = false;
    for (const auto& s : config.spoof_grid) {
      if (s.spoof_type == type) {
        grid.push_back(s);
        found = true;
      }
    }
    if (!found) {
      for (const auto& s : defaults) {
        if (s.spoof_type == type) grid.push_back(s);
      }
    }
  }
  config.spoof_grid = std::move(grid);
}

void print_table(const stb::ComparisonTable& table) {
  std::cout << stb::comparison_csv(table);
  for (const auto& m : table.missing) {
    std::cerr << "missing cell: " << stb::to_string(m.tracker) << " / " << stb::to_string(m.spoof_type) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spoofing benchmark harness for GNN and JPDA multi-target trackers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int seeds = 0;
  std::string trackers;
  std::string spoofs;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run the spoof x tracker x seed campaign");
  run->add_option("--config", config_path, "Benchmark config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_option("--seeds", seeds, "Use N consecutive seeds starting at the first configured seed")
      ->check(CLI::PositiveNumber);
  run->add_option("--trackers", trackers, "Comma-separated subset of gnn,jpda");
  run->add_option("--spoofs", spoofs, "Comma-separated subset of drift,ghost,mirror,clean");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string report_dir;
  auto* compare = app.add_subcommand("compare", "Aggregate a report directory into the comparison table");
  compare->add_option("--report", report_dir, "Report directory")->required();

  auto* exporter = app.add_subcommand("export", "Write plot-data CSVs for every run");
  exporter->add_option("--report", report_dir, "Report directory")->required();

  auto* check = app.add_subcommand("validate", "Check a config file without running anything");
  check->add_option("--config", config_path, "Benchmark config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      stb::BenchmarkConfig config = stb::load_benchmark_config(config_path);
      if (!out_dir.empty()) config.output_dir = out_dir;
      if (seeds > 0) {
        const std::uint64_t base = config.seeds.front();
        config.seeds.clear();
        for (int i = 0; i < seeds; ++i) config.seeds.push_back(base + static_cast<std::uint64_t>(i));
      }
      if (!trackers.empty()) {
        config.trackers.clear();
        for (const auto& t : split_list(trackers)) config.trackers.push_back(stb::parse_tracker_kind(t));
      }
      if (!spoofs.empty()) select_spoofs(config, spoofs);
      stb::validate(config);
      const auto result = stb::run_benchmark(config, jobs);
      std::cerr << result.reports.size() << " runs written to " << result.output_dir.string() << "\n";
      print_table(result.table);
    } else if (*compare) {
      print_table(stb::compare_trackers(report_dir));
    } else if (*exporter) {
      const auto summary = stb::export_plot_data(report_dir);
      std::cerr << "exported " << summary.files.size() << " files for " << summary.runs << " runs\n";
    } else if (*check) {
      const stb::BenchmarkConfig config = stb::load_benchmark_config(config_path);
      std::cout << "ok: " << stb::plan_runs(config).size() << " runs, digest " << stb::config_digest(config)
                << "\n";
    }
  } catch (const stb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const stb::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
