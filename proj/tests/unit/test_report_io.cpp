#include "spooftrack/config.hpp"
#include "spooftrack/io.hpp"
#include "spooftrack/report.hpp"

#include <doctest.h>

#include <cmath>

using namespace stb;

namespace {

RunReport report_with(TrackerKind t, SpoofType s, double drift) {
  RunReport r;
  r.tracker = t;
  r.spoof_type = s;
  r.drift.mean_m = drift;
  r.drift.empty = false;
  return r;
}

}  // namespace

TEST_CASE("fixed formatting rounds half up on the decimal text") {
  CHECK(format_fixed(76.195, 2) == "76.20");
  CHECK(format_fixed(15.058, 2) == "15.06");
  CHECK(format_fixed(0.0, 2) == "0.00");
  CHECK(format_fixed(99.995, 2) == "100.00");
  CHECK(format_fixed(0.995, 2) == "1.00");
  CHECK(format_fixed(-2.345, 2) == "-2.35");
  CHECK(format_fixed(-0.001, 2) == "0.00");
  CHECK(format_fixed(12.0, 0) == "12");
  CHECK(format_fixed(1e-7, 3) == "0.000");
  CHECK(format_fixed(std::nan(""), 2) == "NA");
  CHECK(round_decimal(72.2733, 2) == 72.27);
}

TEST_CASE("two seeds with drift 10 and 20 average to 15") {
  const auto t = aggregate({report_with(TrackerKind::Gnn, SpoofType::Drift, 10.0),
                            report_with(TrackerKind::Gnn, SpoofType::Drift, 20.0)},
                           {TrackerKind::Gnn}, {SpoofType::Drift});
  REQUIRE(t.cells.size() == 1);
  CHECK(t.cells[0].drift_m == 15.0);
  CHECK(t.cells[0].impact_pct == doctest::Approx(3.0));
  CHECK(t.cells[0].runs == 2);
}

TEST_CASE("single run per cell reproduces the run") {
  const auto t = aggregate({report_with(TrackerKind::Jpda, SpoofType::Ghost, 66.15)}, {TrackerKind::Jpda},
                           {SpoofType::Ghost});
  CHECK(t.cells[0].drift_m == 66.15);
  CHECK(format_fixed(t.cells[0].impact_pct, 2) == "13.23");
}

TEST_CASE("missing cells are listed") {
  const auto t = aggregate({report_with(TrackerKind::Gnn, SpoofType::Drift, 1.0)},
                           {TrackerKind::Gnn, TrackerKind::Jpda}, {SpoofType::Drift});
  REQUIRE(t.missing.size() == 1);
  CHECK(t.missing[0].tracker == TrackerKind::Jpda);
  CHECK(comparison_csv(t).find("JPDA,drift,NA,NA,0") != std::string::npos);
}

TEST_CASE("group rows are unweighted means of member cells") {
  std::vector<ComparisonCell> cells = {{TrackerKind::Gnn, SpoofType::Drift, 10, 2, 5},
                                       {TrackerKind::Gnn, SpoofType::Ghost, 20, 4, 1},
                                       {TrackerKind::Jpda, SpoofType::Drift, 40, 8, 3}};
  const auto g = group_averages(cells);
  REQUIRE(g.size() == 4);
  CHECK(g[0].label == "Average (GNN)");
  CHECK(g[0].drift_m == 15.0);
  CHECK(g[1].label == "Average (JPDA)");
  CHECK(g[2].label == "Average (drift spoof)");
  CHECK(g[2].drift_m == 25.0);
  CHECK(g[2].impact_pct == 5.0);
  CHECK(g[3].label == "Average (ghost spoof)");
}

TEST_CASE("comparison csv layout") {
  const auto t = aggregate({report_with(TrackerKind::Gnn, SpoofType::Drift, 77.10)}, {TrackerKind::Gnn},
                           {SpoofType::Drift});
  CHECK(comparison_csv(t) ==
        "tracker,spoof_type,drift_m,impact_pct,runs\n"
        "GNN,drift,77.10,15.42,1\n"
        "Average (GNN),-,77.10,15.42,\n"
        "Average (drift spoof),-,77.10,15.42,\n");
}

TEST_CASE("run report json round trip") {
  RunReport r = report_with(TrackerKind::Jpda, SpoofType::Mirror, 4.5);
  r.run_id = "x";
  r.seed = 12345678901234ULL;
  r.config_digest = "abc";
  r.has_window = true;
  r.window = {3, 9};
  r.drift.max_m = 9.0;
  r.drift.error_matrix = {{1.0, std::nan(""), 2.0}};
  r.drift.per_platform = {{7, 1.5, 2.0, 2, 1}};
  r.normalized_impact_pct = 0.9;
  r.divergence.switch_count = 2;
  r.divergence.switches_per_platform = {2};
  r.divergence.events = {{4, 7, 1, 2}, {5, 7, 2, 1}};
  r.divergence.columns = {"platform_7", "clutter", "spoof"};
  r.divergence.confusion = {{0.5, 0.25, 0.25}};
  r.divergence.row_has_data = {true};
  r.purity.timeline = {0.5, std::nullopt, 1.0};
  r.purity.updates = 3;
  r.spoof = {0.1, 0.5, 0.2};
  const auto back = run_report_from_json(nlohmann::json::parse(to_json(r).dump()));
  CHECK(to_json(back).dump() == to_json(r).dump());
  CHECK(std::isnan(back.drift.error_matrix[0][1]));
  CHECK(back.seed == r.seed);
}

TEST_CASE("detection csv round trip") {
  DetectionRun run;
  run.push_back({0, {{0, {1.5, -2.25}, 25 * Mat2::Identity(), Label::clean(3), 0},
                     {0, {100, 200}, 25 * Mat2::Identity(), Label::clutter(), 1}}});
  run.push_back({1, {{1, {0.1, 0.2}, Mat2{{4, 1}, {1, 9}}, Label::spoof(SpoofType::Drift, 3), 2},
                     {1, {7, 8}, 25 * Mat2::Identity(), Label::spoof(SpoofType::Ghost, std::nullopt), 3}}});
  const auto text = detections_csv(run, "r1");
  CHECK(text.rfind("run_id,t,detection_id,x,y,r_xx,r_xy,r_yy,label,truth_id\n", 0) == 0);
  CHECK(parse_detections_csv(text) == run);
  CHECK(detections_csv(parse_detections_csv(text), "r1") == text);
}

TEST_CASE("truth csv round trip") {
  const auto truth = build_scenario(default_scenario());
  const auto text = truth_csv(truth);
  CHECK(text.rfind("t,platform_id,x,y,vx,vy\n", 0) == 0);
  CHECK(parse_truth_csv(text, truth.dt_s()) == truth);
}

TEST_CASE("snapshot jsonl round trip") {
  StepResult s{2, {}, {}, {}};
  TrackSnapshot a;
  a.t = 2;
  a.track_id = 4;
  a.status = TrackStatus::Confirmed;
  a.x << 1.25, -3, 0.5, 0;
  a.detection_id = 9;
  a.score = 0.75;
  a.consumed = {{9, 0.75}, {10, 0.2}};
  a.beta0 = 0.05;
  TrackSnapshot b;
  b.t = 2;
  b.track_id = 5;
  b.born = true;
  b.x << 7, 8, 0, 0;
  s.tracks = {a, b};
  const auto text = snapshots_jsonl({s});
  const auto parsed = parse_snapshots_jsonl(text);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0] == a);
  CHECK(parsed[1] == b);
  CHECK(text.find("\"beta0\"") != std::string::npos);
  // GNN-style records carry no beta0 key
  CHECK(text.substr(text.find('\n') + 1).find("beta0") == std::string::npos);
}

TEST_CASE("label parsing") {
  CHECK(parse_label("clean", "4") == Label::clean(4));
  CHECK(parse_label("clutter", "") == Label::clutter());
  CHECK(parse_label("spoof:mirror", "2") == Label::spoof(SpoofType::Mirror, 2));
  CHECK(parse_label("spoof:ghost", "") == Label::spoof(SpoofType::Ghost, std::nullopt));
}

TEST_CASE("missing file is an io error") {
  CHECK_THROWS_AS((void)read_text("/nonexistent/dir/file.txt"), IoError);
  CHECK_THROWS_AS(write_text("/nonexistent/dir/file.txt", "x"), IoError);
}

TEST_CASE("config json round trip and digest") {
  const auto cfg = default_benchmark();
  const auto back = benchmark_from_json(nlohmann::json::parse(to_json(cfg).dump()));
  CHECK(to_json(back).dump() == to_json(cfg).dump());
  CHECK(config_digest(back) == config_digest(cfg));
  auto moved = cfg;
  moved.output_dir = "elsewhere";
  CHECK(config_digest(moved) == config_digest(cfg));
  auto changed = cfg;
  changed.seeds.push_back(99);
  CHECK(config_digest(changed) != config_digest(cfg));
  CHECK(config_digest(cfg).size() == 64);
}

TEST_CASE("sha256 known answer") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config parsing rejects bad input") {
  auto j = nlohmann::json::parse(to_json(default_benchmark()).dump());
  SUBCASE("unknown top-level key") {
    j["sesnor"] = nlohmann::json::object();
    CHECK_THROWS_AS((void)benchmark_from_json(j), ConfigError);
  }
  SUBCASE("unknown nested key") {
    j["tracker"]["gama"] = 3.0;
    CHECK_THROWS_AS((void)benchmark_from_json(j), ConfigError);
  }
  SUBCASE("wrong type") {
    j["sensor"]["p_detect"] = "high";
    CHECK_THROWS_AS((void)benchmark_from_json(j), ConfigError);
  }
  SUBCASE("unknown tracker") {
    j["trackers"] = {"mht"};
    CHECK_THROWS_AS((void)benchmark_from_json(j), ConfigError);
  }
  SUBCASE("window past the horizon") {
    j["spoof_grid"][0]["injection_window"] = {30, 150};
    CHECK_THROWS_AS(validate(benchmark_from_json(j)), ConfigError);
  }
  SUBCASE("unknown target platform") {
    j["spoof_grid"][0]["target_platform_ids"] = {42};
    CHECK_THROWS_AS(validate(benchmark_from_json(j)), ConfigError);
  }
  SUBCASE("empty seeds") {
    j["seeds"] = nlohmann::json::array();
    CHECK_THROWS_AS(validate(benchmark_from_json(j)), ConfigError);
  }
}

TEST_CASE("seed range form and defaults") {
  const auto cfg = benchmark_from_json(nlohmann::json::parse(R"({"seeds": {"base_seed": 5, "count": 3}})"));
  CHECK(cfg.seeds == std::vector<std::uint64_t>{5, 6, 7});
  CHECK(cfg.tracker.gamma == 9.21);
  CHECK(cfg.tracker.p_detect == cfg.sensor.p_detect);
  CHECK(cfg.tracker.clutter_density == doctest::Approx(cfg.sensor.clutter_rate / cfg.sensor.fov.area()));
}
