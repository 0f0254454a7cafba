#include "spooftrack/harness.hpp"
#include "spooftrack/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace stb;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("spooftrack_test_" + name);
  fs::remove_all(p);
  return p;
}

BenchmarkConfig small_config(const fs::path& out) {
  BenchmarkConfig c = default_benchmark();
  c.scenario.duration_s = 30.0;
  for (auto& p : c.scenario.platforms) {
    // keep each leg's direction; just stop the clock early
    p.waypoints.back().t_s = std::max(p.waypoints.back().t_s, 30.0);
  }
  for (auto& s : c.spoof_grid) s.window = {10, 20};
  c.seeds = {1};
  c.output_dir = out;
  return c;
}

int exit_code(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("run planning is the spoof x tracker x seed product") {
  auto c = default_benchmark();
  c.spoof_grid.resize(3);
  c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto plan = plan_runs(c);
  CHECK(plan.size() == 60);
  std::set<std::string> ids;
  for (const auto& r : plan) ids.insert(r.run_id);
  CHECK(ids.size() == 60);
}

TEST_CASE("adding a tracker leaves other runs' seeds alone") {
  auto c = default_benchmark();
  c.trackers = {TrackerKind::Gnn};
  const auto before = plan_runs(c);
  c.trackers = {TrackerKind::Gnn, TrackerKind::Jpda};
  const auto after = plan_runs(c);
  for (const auto& a : before) {
    bool found = false;
    for (const auto& b : after) {
      if (b.run_id != a.run_id) continue;
      found = true;
      CHECK(b.spoof.seed == a.spoof.seed);
      CHECK(b.birth_seed == a.birth_seed);
    }
    CHECK(found);
  }
}

TEST_CASE("one cell gives one run folder plus manifest") {
  const auto out = scratch("one");
  auto c = small_config(out);
  c.spoof_grid.resize(1);
  c.trackers = {TrackerKind::Gnn};
  const auto result = run_benchmark(c);
  CHECK(result.reports.size() == 1);
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "comparison.csv"));
  std::size_t folders = 0;
  for (const auto& e : fs::directory_iterator(out / "runs")) {
    ++folders;
    for (const char* f : {"run_manifest.json", "truth.csv", "clean.csv", "spoofed.csv", "spoof_log.csv",
                          "snapshots.jsonl", "report.json"}) {
      CHECK(fs::exists(e.path() / f));
    }
    const auto manifest = nlohmann::json::parse(read_text(e.path() / "run_manifest.json"));
    CHECK(manifest["seed"] == 1);
    CHECK(manifest["config_digest"] == config_digest(c));
  }
  CHECK(folders == 1);
  fs::remove_all(out);
}

TEST_CASE("reruns are byte identical and clean streams are shared") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  auto c = small_config(a);
  c.seeds = {3, 4};
  (void)run_benchmark(c, 3);
  c.output_dir = b;
  (void)run_benchmark(c, 1);
  for (const auto& e : fs::directory_iterator(a / "runs")) {
    for (const auto& f : fs::directory_iterator(e.path())) {
      CHECK(read_text(f.path()) == read_text(b / "runs" / e.path().filename() / f.path().filename()));
    }
  }
  CHECK(read_text(a / "comparison.csv") == read_text(b / "comparison.csv"));
  // every run of a seed carries the same clean stream
  std::map<std::uint64_t, std::string> clean;
  for (const auto& e : fs::directory_iterator(a / "runs")) {
    const auto seed = nlohmann::json::parse(read_text(e.path() / "run_manifest.json"))["seed"].get<std::uint64_t>();
    const auto text = read_text(e.path() / "clean.csv");
    const auto [it, fresh] = clean.emplace(seed, text);
    if (!fresh) CHECK(it->second == text);
  }
  CHECK(clean.size() == 2);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("compare and export") {
  const auto out = scratch("export");
  auto c = small_config(out);
  c.trackers = {TrackerKind::Gnn};
  c.spoof_grid = {c.spoof_grid[0]};  // drift, window [10, 20]
  const auto result = run_benchmark(c);
  const auto table = compare_trackers(out);
  CHECK(comparison_csv(table) == comparison_csv(result.table));

  const auto summary = export_plot_data(out);
  CHECK(summary.runs == 1);
  const auto dir = out / "plots" / result.reports[0].run_id;
  for (const char* f : {"drift_heatmap.csv", "purity_timeline.csv", "events.csv", "overlay.csv"}) {
    CHECK(fs::exists(dir / f));
  }

  std::ifstream events(dir / "events.csv");
  std::string line;
  std::getline(events, line);
  std::set<int> annotated;
  while (std::getline(events, line)) {
    if (line.find(",spoof_window,") == std::string::npos) continue;
    annotated.insert(std::stoi(line.substr(0, line.find(','))));
  }
  std::set<int> expect;
  for (int t = 10; t <= 20; ++t) expect.insert(t);
  CHECK(annotated == expect);

  // truth points + clean detections + spoofed detections + track estimates
  const auto run_dir = out / "runs" / result.reports[0].run_id;
  const std::size_t truth_rows = count_lines(run_dir / "truth.csv") - 1;
  const std::size_t clean_rows = count_lines(run_dir / "clean.csv") - 1;
  const std::size_t spoofed_rows = count_lines(run_dir / "spoofed.csv") - 1;
  const std::size_t track_rows = count_lines(run_dir / "snapshots.jsonl");
  CHECK(count_lines(dir / "overlay.csv") - 1 == truth_rows + clean_rows + spoofed_rows + track_rows);

  CHECK(count_lines(dir / "drift_heatmap.csv") - 1 == c.scenario.platforms.size());
  fs::remove_all(out);
}

TEST_CASE("invalid config fails before any run") {
  const auto out = scratch("invalid");
  auto c = small_config(out);
  c.spoof_grid[0].window = {10, 500};
  CHECK_THROWS_AS((void)run_benchmark(c), ConfigError);
  CHECK_FALSE(fs::exists(out / "runs"));
}

TEST_CASE("unwritable output is an io error") {
  auto c = small_config("/proc/spooftrack_nope");
  CHECK_THROWS_AS((void)run_benchmark(c), IoError);
}

TEST_CASE("cli exit codes") {
  const std::string cli = SPOOFTRACK_CLI;
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  auto c = small_config(dir / "out");
  c.spoof_grid.resize(1);
  write_text(dir / "ok.json", to_json(c).dump(2));
  write_text(dir / "bad.json", R"({"sensor": {"p_detect": 0.9, "bogus": 1}})");
  write_text(dir / "broken.json", "{not json");

  CHECK(exit_code(cli + " validate --config " + (dir / "ok.json").string()) == 0);
  CHECK(exit_code(cli + " validate --config " + (dir / "bad.json").string()) == 2);
  CHECK(exit_code(cli + " validate --config " + (dir / "broken.json").string()) == 2);
  CHECK(exit_code(cli + " validate --config " + (dir / "missing.json").string()) == 3);
  CHECK(exit_code(cli + " run --config " + (dir / "ok.json").string() + " --out /proc/nope") == 3);
  CHECK(exit_code(cli + " frobnicate") == 2);
  CHECK(exit_code(cli + " run --config " + (dir / "ok.json").string() + " --spoofs ghost") == 2);
  CHECK(exit_code(cli + " run --config " + (dir / "ok.json").string() + " --trackers gnn --spoofs drift") == 0);
  CHECK(fs::exists(dir / "out" / "comparison.csv"));
  CHECK(exit_code(cli + " compare --report " + (dir / "out").string()) == 0);
  CHECK(exit_code(cli + " export --report " + (dir / "out").string()) == 0);
  CHECK(exit_code(cli + " compare --report " + (dir / "nowhere").string()) == 3);
  fs::remove_all(dir);
}
