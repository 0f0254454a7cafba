#include "spooftrack/metrics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace stb;

namespace {

// one platform at rest at the origin, or a list of fixed positions
GroundTruth still_truth(std::vector<Vec2> positions, int steps) {
  std::vector<PlatformId> ids;
  std::vector<std::vector<KinematicState>> states;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    ids.push_back(static_cast<PlatformId>(i + 1));
    states.emplace_back(static_cast<std::size_t>(steps), KinematicState{positions[i], Vec2::Zero()});
  }
  return GroundTruth(1.0, ids, states);
}

TrackSnapshot snap(Timestep t, TrackId id, Vec2 p, std::vector<ConsumedDetection> consumed = {}) {
  TrackSnapshot s;
  s.t = t;
  s.track_id = id;
  s.status = TrackStatus::Confirmed;
  s.x << p, 0, 0;
  s.consumed = std::move(consumed);
  return s;
}

StepResult step(Timestep t, std::vector<TrackSnapshot> tracks) { return {t, std::move(tracks), {}, {}}; }

DetectionRun labelled(std::vector<std::pair<DetectionId, Label>> items) {
  DetectionFrame f{0, {}};
  for (auto& [id, label] : items) f.detections.push_back({0, Vec2::Zero(), Mat2::Identity(), label, id});
  return {f};
}

}  // namespace

TEST_CASE("track on the platform is matched; 150 m away is not") {
  const auto truth = still_truth({{0, 0}}, 2);
  const std::vector<StepResult> steps = {step(0, {snap(0, 1, {0, 0})}), step(1, {snap(1, 1, {150, 0})})};
  const auto corr = match_tracks_to_truth(steps, truth);
  CHECK(corr.platform_of(0, 1) == 1);
  CHECK_FALSE(corr.platform_of(1, 1).has_value());
  CHECK(corr.track_of(0, 1) == 1);
}

TEST_CASE("tentative tracks are not matched") {
  const auto truth = still_truth({{0, 0}}, 1);
  auto s = snap(0, 1, {0, 0});
  s.status = TrackStatus::Tentative;
  CHECK(match_tracks_to_truth({step(0, {s})}, truth).per_step[0].empty());
}

TEST_CASE("crossed distances follow the minimum pairing") {
  // platforms at 0 and 40; tracks at 25 and 60. Greedy nearest would give track 1 -> platform 2
  // (15 m) first; the minimum total pairs track 1 -> platform 1 (25) and track 2 -> platform 2 (20).
  const auto truth = still_truth({{0, 0}, {40, 0}}, 1);
  const auto corr = match_tracks_to_truth({step(0, {snap(0, 1, {25, 0}), snap(0, 2, {60, 0})})}, truth);
  CHECK(corr.platform_of(0, 1) == 1);
  CHECK(corr.platform_of(0, 2) == 2);
}

TEST_CASE("drift statistics") {
  const auto truth = still_truth({{0, 0}}, 3);
  SUBCASE("track equals truth") {
    std::vector<StepResult> steps;
    for (int t = 0; t < 3; ++t) steps.push_back(step(t, {snap(t, 1, {0, 0})}));
    const auto d = drift_from_truth(steps, match_tracks_to_truth(steps, truth), truth);
    CHECK(d.mean_m == 0.0);
    CHECK(d.max_m == 0.0);
    CHECK_FALSE(d.empty);
  }
  SUBCASE("constant (3, 4) offset") {
    std::vector<StepResult> steps;
    for (int t = 0; t < 3; ++t) steps.push_back(step(t, {snap(t, 1, {3, 4})}));
    const auto d = drift_from_truth(steps, match_tracks_to_truth(steps, truth), truth);
    CHECK(d.mean_m == doctest::Approx(5.0));
    CHECK(d.max_m == doctest::Approx(5.0));
  }
  SUBCASE("offsets 0, 0, 10") {
    const std::vector<StepResult> steps = {step(0, {snap(0, 1, {0, 0})}), step(1, {snap(1, 1, {0, 0})}),
                                           step(2, {snap(2, 1, {10, 0})})};
    const auto d = drift_from_truth(steps, match_tracks_to_truth(steps, truth), truth);
    CHECK(d.mean_m == doctest::Approx(10.0 / 3.0));
    CHECK(d.max_m == doctest::Approx(10.0));
  }
  SUBCASE("gaps are counted, not averaged") {
    const std::vector<StepResult> steps = {step(0, {snap(0, 1, {6, 8})}), step(1, {}), step(2, {})};
    const auto d = drift_from_truth(steps, match_tracks_to_truth(steps, truth), truth);
    CHECK(d.mean_m == doctest::Approx(10.0));
    CHECK(d.per_platform[0].gap_steps == 2);
    CHECK(d.per_platform[0].matched_steps == 1);
    CHECK(std::isnan(d.error_matrix[0][1]));
  }
  SUBCASE("nothing matched") {
    const auto d = drift_from_truth({}, match_tracks_to_truth({}, truth), truth);
    CHECK(d.empty);
  }
}

TEST_CASE("drift is translation invariant") {
  CounterRng rng(6, 6, 6, 6);
  for (int trial = 0; trial < 50; ++trial) {
    // dyadic coordinates keep every difference exact, so shifted results must match bit for bit
    auto dy = [&](double lo, double hi) { return std::round(rng.uniform(lo, hi) * 8.0) / 8.0; };
    const Vec2 shift(dy(-4096, 4096), dy(-4096, 4096));
    std::vector<Vec2> plats = {{dy(-300, 300), dy(-300, 300)}, {dy(-300, 300), dy(-300, 300)}};
    std::vector<Vec2> moved = {plats[0] + shift, plats[1] + shift};
    const auto truth = still_truth(plats, 10);
    const auto truth2 = still_truth(moved, 10);
    std::vector<StepResult> a, b;
    for (int t = 0; t < 10; ++t) {
      std::vector<TrackSnapshot> sa, sb;
      for (int k = 0; k < 3; ++k) {
        const Vec2 p = plats[k % 2] + Vec2(dy(-60, 60), dy(-60, 60));
        sa.push_back(snap(t, k + 1, p));
        sb.push_back(snap(t, k + 1, p + shift));
      }
      a.push_back(step(t, sa));
      b.push_back(step(t, sb));
    }
    const auto da = drift_from_truth(a, match_tracks_to_truth(a, truth), truth);
    const auto db = drift_from_truth(b, match_tracks_to_truth(b, truth2), truth2);
    CHECK(da.mean_m == db.mean_m);
    CHECK(da.max_m == db.max_m);
  }
}

TEST_CASE("switch counting") {
  const auto truth = still_truth({{0, 0}}, 4);
  const Provenance prov;
  SUBCASE("stable") {
    std::vector<StepResult> steps;
    for (int t = 0; t < 4; ++t) steps.push_back(step(t, {snap(t, 1, {0, 0})}));
    CHECK(assignment_divergence(steps, match_tracks_to_truth(steps, truth), prov, truth).switch_count == 0);
  }
  SUBCASE("A, A, B, B") {
    const std::vector<StepResult> steps = {step(0, {snap(0, 1, {0, 0})}), step(1, {snap(1, 1, {0, 0})}),
                                           step(2, {snap(2, 2, {0, 0})}), step(3, {snap(3, 2, {0, 0})})};
    const auto d = assignment_divergence(steps, match_tracks_to_truth(steps, truth), prov, truth);
    CHECK(d.switch_count == 1);
    REQUIRE(d.events.size() == 1);
    CHECK(d.events[0].t == 2);
    CHECK(d.events[0].from_track == 1);
    CHECK(d.events[0].to_track == 2);
  }
  SUBCASE("a gap between the same track is not a switch") {
    const std::vector<StepResult> steps = {step(0, {snap(0, 1, {0, 0})}), step(1, {}), step(2, {snap(2, 1, {0, 0})})};
    CHECK(assignment_divergence(steps, match_tracks_to_truth(steps, truth), prov, truth).switch_count == 0);
  }
}

TEST_CASE("confusion row 8 own, 2 spoof") {
  const auto truth = still_truth({{0, 0}, {500, 0}}, 10);
  std::vector<std::pair<DetectionId, Label>> items;
  std::vector<StepResult> steps;
  for (int t = 0; t < 10; ++t) {
    const bool spoofed = t >= 8;
    items.push_back({t, spoofed ? Label::spoof(SpoofType::Ghost, std::nullopt) : Label::clean(1)});
    steps.push_back(step(t, {snap(t, 1, {0, 0}, {{t, 1.0}})}));
  }
  const Provenance prov(labelled(items));
  const auto d = assignment_divergence(steps, match_tracks_to_truth(steps, truth), prov, truth);
  CHECK(d.columns == std::vector<std::string>{"platform_1", "platform_2", "clutter", "spoof"});
  CHECK(d.confusion[0][0] == doctest::Approx(0.8));
  CHECK(d.confusion[0][3] == doctest::Approx(0.2));
  CHECK(d.row_has_data[0]);
  CHECK_FALSE(d.row_has_data[1]);
  double sum = 0;
  for (double v : d.confusion[0]) sum += v;
  CHECK(std::abs(sum - 1.0) <= 1e-9);
}

TEST_CASE("purity") {
  const auto truth = still_truth({{0, 0}}, 1);
  const SourceColumns cols(truth);
  const Provenance prov(labelled({{1, Label::clean(1)}, {2, Label::spoof(SpoofType::Ghost, std::nullopt)},
                                  {3, Label::spoof(SpoofType::Ghost, std::nullopt)}}));
  SUBCASE("single clean assignment") {
    const auto p = update_purity({{1, 1.0}}, prov, cols);
    CHECK(p->purity == 1.0);
    CHECK_FALSE(p->spoof_majority);
  }
  SUBCASE("0.7 clean, 0.3 ghost") {
    const auto p = update_purity({{1, 0.7}, {2, 0.3}}, prov, cols);
    CHECK(p->purity == doctest::Approx(0.7));
    CHECK(p->majority_column == 0u);
  }
  SUBCASE("all ghost is pure but flagged") {
    const auto p = update_purity({{2, 0.6}, {3, 0.4}}, prov, cols);
    CHECK(p->purity == doctest::Approx(1.0));
    CHECK(p->spoof_majority);
  }
  SUBCASE("nothing consumed") { CHECK_FALSE(update_purity({}, prov, cols).has_value()); }
  SUBCASE("timeline leaves idle steps empty") {
    const std::vector<StepResult> steps = {step(0, {snap(0, 1, {0, 0}, {{1, 0.7}, {2, 0.3}})})};
    const auto truth2 = still_truth({{0, 0}}, 2);
    const auto ps = cluster_purity(steps, prov, truth2);
    CHECK(*ps.timeline[0] == doctest::Approx(0.7));
    CHECK_FALSE(ps.timeline[1].has_value());
  }
}

TEST_CASE("purity lies in [1/k, 1]") {
  CounterRng rng(9, 9, 9, 9);
  const auto truth = still_truth({{0, 0}, {1, 1}}, 1);
  const SourceColumns cols(truth);
  const Provenance prov(labelled({{0, Label::clean(1)}, {1, Label::clean(2)}, {2, Label::clutter()},
                                  {3, Label::spoof(SpoofType::Ghost, std::nullopt)}}));
  for (int i = 0; i < 500; ++i) {
    std::vector<ConsumedDetection> c;
    std::set<DetectionId> sources;
    for (DetectionId id = 0; id < 4; ++id) {
      if (rng.uniform() < 0.5) continue;
      c.push_back({id, rng.uniform(0.01, 1.0)});
      sources.insert(id);
    }
    if (c.empty()) continue;
    const auto p = update_purity(c, prov, cols);
    CHECK(p->purity <= 1.0 + 1e-12);
    CHECK(p->purity >= 1.0 / double(sources.size()) - 1e-12);
  }
}

TEST_CASE("spoof inclusion, recovery, false attribution") {
  const auto truth = still_truth({{0, 0}, {500, 0}}, 20);
  SpoofConfig spoof;
  spoof.spoof_type = SpoofType::Ghost;
  spoof.window = {0, 9};
  spoof.target_platform_ids = {1};
  std::vector<std::pair<DetectionId, Label>> items;
  std::vector<SpoofLogEntry> log;
  std::vector<StepResult> steps;
  for (int t = 0; t < 10; ++t) {
    const bool ghost = t < 2;
    items.push_back({t, ghost ? Label::spoof(SpoofType::Ghost, std::nullopt) : Label::clean(1)});
    if (ghost) log.push_back({t, t, SpoofType::Ghost, std::nullopt});
    steps.push_back(step(t, {snap(t, 1, {0, 0}, {{t, 1.0}})}));
  }
  SUBCASE("2 of 10 updates spoof dominated, recovered afterwards") {
    for (int t = 10; t < 20; ++t) steps.push_back(step(t, {snap(t, 1, {1, 1})}));
    const Provenance prov(labelled(items));
    const auto corr = match_tracks_to_truth(steps, truth);
    const auto s = spoof_stats(steps, log, spoof, corr, truth, prov, 5.0);
    CHECK(s.inclusion == doctest::Approx(0.2));
    CHECK(s.recovery == 1.0);
    CHECK(s.false_attribution == 0.0);
  }
  SUBCASE("never returns within 3 sigma") {
    for (int t = 10; t < 20; ++t) steps.push_back(step(t, {snap(t, 1, {40, 0})}));
    const Provenance prov(labelled(items));
    const auto s = spoof_stats(steps, log, spoof, match_tracks_to_truth(steps, truth), truth, prov, 5.0);
    CHECK(s.recovery == 0.0);
  }
  SUBCASE("clean detection used by the other platform's track") {
    items.push_back({100, Label::clean(2)});
    steps.push_back(step(10, {snap(10, 1, {0, 0}, {{100, 1.0}})}));
    const Provenance prov(labelled(items));
    const auto s = spoof_stats(steps, log, spoof, match_tracks_to_truth(steps, truth), truth, prov, 5.0);
    CHECK(s.false_attribution == doctest::Approx(1.0 / 9.0));
  }
  SUBCASE("clean run") {
    SpoofConfig none;
    const Provenance prov(labelled({}));
    const auto s = spoof_stats(steps, {}, none, match_tracks_to_truth(steps, truth), truth, prov, 5.0);
    CHECK(s.inclusion == 0.0);
    CHECK(s.recovery == 1.0);
  }
}

TEST_CASE("normalized impact") {
  CHECK(normalized_impact(0.0) == 0.0);
  CHECK(normalized_impact(500.0) == doctest::Approx(100.0));
  CHECK(normalized_impact(77.10) == doctest::Approx(15.42));
  CHECK(normalized_impact(50.0, 250.0) == doctest::Approx(20.0));
}
