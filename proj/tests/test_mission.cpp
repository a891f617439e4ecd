#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "sim/battery.hpp"
#include "sim/config.hpp"
#include "sim/metrics.hpp"
#include "sim/mission.hpp"

using namespace agnav;

namespace {

MissionConfig flat_smoke() {
  MissionConfig cfg;
  cfg.world = "flat";
  cfg.ugvs = 1;
  cfg.uav = false;
  cfg.duration = 120.0;
  cfg.seed = 3;
  cfg.manual_goal = Vec2{45.0, 30.0};
  return cfg;
}

}  // namespace

TEST_SUITE("mission") {

TEST_CASE("config defaults and round trip") {
  const MissionConfig def = parse_config("");
  CHECK(def.world == "city");
  CHECK(def.ugvs == 1);
  CHECK(def.terrain_mode == TerrainMode::kLearned);
  CHECK(def.comms_mode == CommsMode::kDownsampled);
  CHECK(!def.manual_goal);

  MissionConfig cfg = def;
  cfg.world = "handoff";
  cfg.scenario = Scenario::kHandoff;
  cfg.ugvs = 2;
  cfg.duration = 900.0;
  cfg.uav = false;
  cfg.comms_mode = CommsMode::kOff;
  cfg.manual_goal = Vec2{132.0, 10.0};
  const MissionConfig back = parse_config(serialize_config(cfg));
  CHECK(back.world == cfg.world);
  CHECK(back.scenario == Scenario::kHandoff);
  CHECK(back.ugvs == 2);
  CHECK(back.duration == cfg.duration);
  CHECK(back.uav == cfg.uav);
  CHECK(back.comms_mode == CommsMode::kOff);
  REQUIRE(back.manual_goal);
  CHECK(back.manual_goal->x == 132.0);
  CHECK(back.manual_goal->y == 10.0);
}

TEST_CASE("config errors name the offending line") {
  CHECK_THROWS_WITH_AS(parse_config("ugvs = 1\nbogus_key = 7\n"),
                       doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config("ugvs = banana\n"), doctest::Contains("line 1"),
                       std::runtime_error);
  CHECK_THROWS_AS(parse_config("ugvs = 0\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("sync_pos_range = 10\nsync_full_range = 20\n"),
                  std::runtime_error);
  // Comments and repeated keys (last wins) are fine.
  const MissionConfig c = parse_config("# comment\nugvs = 2\nugvs = 3\n");
  CHECK(c.ugvs == 3);
}

TEST_CASE("handoff scenario defaults the relay goal") {
  const MissionConfig cfg = parse_config("world = handoff\nscenario = handoff\n");
  REQUIRE(cfg.manual_goal);
  CHECK(cfg.manual_goal->x == 132.0);
  CHECK(cfg.manual_goal->y == 10.0);
}

TEST_CASE("metrics from a handcrafted trace") {
  // Goals at (0,0) and (6,0) chain within 10 m: one deduped goal. (50,0) is
  // its own. Robot 1 visits the first cluster; robot 2 abandons one claim,
  // then holds another claim through END.
  const std::string trace =
      "0.000\tGOAL robot=1 seq=0 x=0.0 y=0.0\n"
      "1.000\tGOAL robot=2 seq=0 x=6.0 y=0.0\n"
      "2.000\tGOAL robot=1 seq=1 x=50.0 y=0.0\n"
      "10.000\tCLAIM robot=1 goal=1:0\n"
      "10.000\tCLAIM robot=2 goal=1:1\n"
      "30.000\tVISIT robot=1 goal=1:0\n"
      "40.000\tRELEASE robot=2 goal=1:1 reason=yield\n"
      "50.000\tCLAIM robot=2 goal=1:1\n"
      "55.000\tSYNC a=1 b=2 moved=4 full=1\n"
      "55.000\tCONTACT a=1 b=2\n"
      "100.000\tSUMMARY robot=1 distance=25.50\n"
      "100.000\tSUMMARY robot=2 distance=40.00\n"
      "100.000\tEND t=100.000\n";
  const MissionMetrics m = compute_metrics(trace);

  CHECK(m.duration == 100.0);
  CHECK(m.goals_identified == 2);
  CHECK(m.goals_visited == 1);
  REQUIRE(m.visit_times.size() == 2);
  // Unvisited goals score the full mission duration.
  CHECK(median(m.visit_times) == doctest::Approx(0.5 * (30.0 + 100.0)));
  REQUIRE(m.claim_to_visit.size() == 1);
  CHECK(m.claim_to_visit[0] == doctest::Approx(20.0));

  REQUIRE(m.robots.size() == 2);
  CHECK(m.robots[0].id == 1);
  CHECK(m.robots[0].distance == doctest::Approx(25.5));
  CHECK(m.robots[0].nav_time == doctest::Approx(20.0));
  CHECK(m.robots[0].nav_time_visited == doctest::Approx(20.0));
  CHECK(m.robots[0].nav_time_failed == doctest::Approx(0.0));
  // Robot 2: 10..40 yielded, 50..END still open; both count as failed.
  CHECK(m.robots[1].nav_time == doctest::Approx(30.0 + 50.0));
  CHECK(m.robots[1].nav_time_visited == doctest::Approx(0.0));
  CHECK(m.robots[1].nav_time_failed == doctest::Approx(80.0));

  CHECK(m.records_moved == 4);
  CHECK(m.contacts == 1);
}

TEST_CASE("metrics count visits to unannounced goals") {
  // Scripted missions mark visits on goals that never got a GOAL record.
  const std::string trace =
      "5.000\tCLAIM robot=1 goal=0:0\n"
      "20.000\tVISIT robot=1 goal=0:0\n"
      "60.000\tEND t=60.000\n";
  const MissionMetrics m = compute_metrics(trace);
  CHECK(m.goals_identified == 1);
  CHECK(m.goals_visited == 1);
  REQUIRE(m.visit_times.size() == 1);
  CHECK(m.visit_times[0] == doctest::Approx(20.0));
  REQUIRE(m.claim_to_visit.size() == 1);
  CHECK(m.claim_to_visit[0] == doctest::Approx(15.0));
}

TEST_CASE("metrics reject truncated traces") {
  CHECK_THROWS_WITH_AS(compute_metrics("0.000\tGOAL robot=1 seq=0 x=1 y=2\n"),
                       doctest::Contains("no END"), std::runtime_error);
  CHECK_THROWS_WITH_AS(compute_metrics("3.000\tSYNC a=1 b=2 moved=2 full=1\n"
                                       "4.000\tSYNC garbage\n"),
                       doctest::Contains("t=3.000"), std::runtime_error);
}

TEST_CASE("flat world mission reaches a manual goal") {
  const MissionResult res = run_mission(flat_smoke());
  CHECK(res.metrics.goals_identified == 1);
  CHECK(res.metrics.goals_visited == 1);
  REQUIRE(res.metrics.robots.size() == 1);
  // Start (32.5,30) to goal (45,30) minus the 2 m visit radius: near 10.5 m
  // of straight driving; generous slack for the noisy controller.
  CHECK(res.metrics.robots[0].distance > 9.0);
  CHECK(res.metrics.robots[0].distance < 20.0);
  CHECK(res.metrics.robots[0].nav_time > 0.0);
  CHECK(res.metrics.robots[0].nav_time <= res.metrics.duration);
  REQUIRE(res.metrics.visit_times.size() == 1);
  CHECK(res.metrics.visit_times[0] < 60.0);

  // The metrics struct is a pure function of the trace text.
  const MissionMetrics reparsed = compute_metrics(res.trace);
  CHECK(reparsed.goals_visited == res.metrics.goals_visited);
  CHECK(reparsed.robots[0].distance == res.metrics.robots[0].distance);
  CHECK(reparsed.records_moved == res.metrics.records_moved);
}

TEST_CASE("missions replay bit exact") {
  MissionConfig cfg = flat_smoke();
  cfg.duration = 60.0;
  cfg.uav = true;  // cover the surveyor path too
  const MissionResult a = run_mission(cfg);
  const MissionResult b = run_mission(cfg);
  CHECK(a.trace == b.trace);

  MissionConfig other = cfg;
  other.seed = 4;
  const MissionResult c = run_mission(other);
  CHECK(a.trace != c.trace);
}

TEST_CASE("battery sweeps arm reps and collect csv") {
  MissionConfig base = flat_smoke();
  base.duration = 40.0;
  const BatteryOutcome out = run_battery(base, "ugvs", {"1", "2"}, 2);
  REQUIRE(out.runs.size() == 4);
  CHECK(out.failures == 0);
  CHECK(out.runs[0].label == "ugvs=1");
  CHECK(out.runs[2].label == "ugvs=2");
  // Rep r shifts the mission seed so repetitions differ.
  CHECK(out.runs[1].seed == base.seed + 1);

  // Header comment plus csv header plus one row per successful run.
  const auto lines = [](const std::string& s) {
    int n = 0;
    for (char ch : s)
      if (ch == '\n') ++n;
    return n;
  };
  CHECK(lines(out.runs_csv) == 2 + 4);
  CHECK(lines(out.aggregates_csv) == 2 + 2);
  CHECK(out.runs_csv.find("# agnav-metrics v1") == 0);
}

}  // TEST_SUITE
