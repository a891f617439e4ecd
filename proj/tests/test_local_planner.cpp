#include <cmath>

#include "core/local_planner.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace agnav;
using oracles::synth_flat_pano;
using oracles::synth_wall_pano;

namespace {

TerrainProducts flat_products() {
  return analyze_terrain(synth_flat_pano(64, 256, 0.6, -45.0, 22.5), TerrainParams{});
}

}  // namespace

TEST_SUITE("local_planner") {

TEST_CASE("probe credit picks the nearest stored pixel per azimuth") {
  ProbeField f;
  f.cols = 4;
  f.star = {1.0f, 0.0f, 2.0f, 2.0f};
  f.pr = {0.5f, 1.5f};
  f.dist = {3.0f, 1.0f};
  f.offsets = {0, 0, 0, 2, 2};  // only column 2 holds pixels

  auto dir = [](int col) {
    const double az = -kPi + (col + 0.5) * (kTwoPi / 4);
    return Vec2{std::cos(az), std::sin(az)};
  };

  // Column 0 has star but no pixels: full credit inside, none outside.
  CHECK(f.credit(dir(0) * 0.5, 5.0) == doctest::Approx(-5.0));
  CHECK(f.credit(dir(0) * 1.2, 5.0) == 0.0);
  // Column 1's star is collapsed.
  CHECK(f.credit(dir(1) * 0.1, 5.0) == 0.0);
  // Column 2: nearest of the two ranges wins.
  CHECK(f.credit(dir(2) * 0.6, 5.0) == doctest::Approx(-3.0));
  CHECK(f.credit(dir(2) * 1.2, 5.0) == doctest::Approx(-1.0));
  CHECK(f.credit(dir(2) * 2.5, 5.0) == 0.0);
}

TEST_CASE("probe field stores strictly increasing ranges, walls collapse") {
  TerrainProducts prod =
      analyze_terrain(synth_wall_pano(64, 256, 0.6, 2.2, 2.0, 130, 160), TerrainParams{});
  ProbeField f = ProbeField::build(prod);
  REQUIRE(f.cols == 256);
  for (int c = 0; c < 256; ++c) {
    for (uint32_t i = f.offsets[c] + 1; i < f.offsets[c + 1]; ++i)
      CHECK(f.pr[i] > f.pr[i - 1]);
  }
  // Every face pixel shares one planar range; the column ends at the wall.
  const int wc = 145;
  REQUIRE(f.offsets[wc + 1] > f.offsets[wc]);
  CHECK(f.pr[f.offsets[wc + 1] - 1] == doctest::Approx(2.2).epsilon(0.01));
}

TEST_CASE("goal selection stays inside the star and tracks the goal") {
  TerrainProducts prod = flat_products();
  const double star = prod.scan.safe[0];
  REQUIRE(star > 6.0);

  LocalPlanner lp{LocalPlannerParams{}};
  Vec2 g;
  REQUIRE(lp.select_local_goal(prod.scan, Vec2{40.0, 0.0}, 17, &g));
  CHECK(g.norm() <= 0.95 * star + 1e-6);
  // Far goal straight ahead: the pick leans strongly forward.
  CHECK(g.x > 0.6 * star);
  CHECK(std::fabs(std::atan2(g.y, g.x)) < 0.5);
}

TEST_CASE("goal selection is deterministic in the stream") {
  TerrainProducts prod = flat_products();
  LocalPlanner a{LocalPlannerParams{}}, b{LocalPlannerParams{}};
  Vec2 ga, gb, gc;
  REQUIRE(a.select_local_goal(prod.scan, Vec2{10.0, 5.0}, 99, &ga));
  REQUIRE(b.select_local_goal(prod.scan, Vec2{10.0, 5.0}, 99, &gb));
  CHECK(ga.x == gb.x);
  CHECK(ga.y == gb.y);
  REQUIRE(b.select_local_goal(prod.scan, Vec2{10.0, 5.0}, 100, &gc));
  CHECK((gc.x != ga.x || gc.y != ga.y));
}

TEST_CASE("previous goal direction damps sideways jumps") {
  TerrainProducts prod = flat_products();
  LocalPlanner fresh{LocalPlannerParams{}}, primed{LocalPlannerParams{}};
  Vec2 direct, warm, dragged;
  REQUIRE(fresh.select_local_goal(prod.scan, Vec2{0.0, 40.0}, 7, &direct));
  REQUIRE(primed.select_local_goal(prod.scan, Vec2{40.0, 0.0}, 3, &warm));
  REQUIRE(primed.select_local_goal(prod.scan, Vec2{0.0, 40.0}, 7, &dragged));
  // Same sample stream, so the only difference is the heading memory term,
  // which penalizes offsets perpendicular to the old +x goal direction.
  CHECK(dragged.y < direct.y);
}

TEST_CASE("goal selection refuses a collapsed star") {
  ReachabilityScan scan;
  scan.cols = 64;
  scan.safe.assign(64, 0.2f);
  scan.obstacle.assign(64, 1);
  LocalPlanner lp{LocalPlannerParams{}};
  Vec2 g;
  CHECK_FALSE(lp.select_local_goal(scan, Vec2{5.0, 0.0}, 1, &g));
}

TEST_CASE("open ground: accelerates straight toward the goal") {
  TerrainProducts prod = flat_products();
  ProbeField f = ProbeField::build(prod);
  LocalPlannerParams p;
  LocalPlanner lp{p};
  const Vec2 goal{3.0, 0.0};

  LocalPlanner::Command cmd = lp.plan(prod, f, Pose2{}, goal);
  CHECK(cmd.v == doctest::Approx(0.5));  // window tops out one step up
  CHECK(std::fabs(cmd.w) < 0.05);
  CHECK_FALSE(cmd.blocked);
  for (int i = 0; i < 3; ++i) cmd = lp.plan(prod, f, Pose2{}, goal);
  CHECK(cmd.v > 1.2);
  CHECK_FALSE(cmd.blocked);
}

TEST_CASE("a wall left of the goal line biases the first step right") {
  // Wall sector over azimuths [3deg, 31deg]; the goal line itself is open.
  TerrainProducts walled =
      analyze_terrain(synth_wall_pano(64, 256, 0.6, 1.8, 2.0, 130, 160), TerrainParams{});
  TerrainProducts open = flat_products();
  const Vec2 goal{1.5, 0.0};

  LocalPlanner a{LocalPlannerParams{}};
  LocalPlanner::Command control = a.plan(open, ProbeField::build(open), Pose2{}, goal);
  CHECK(control.w == doctest::Approx(0.0));  // symmetric world, straight wins

  LocalPlanner b{LocalPlannerParams{}};
  LocalPlanner::Command cmd = b.plan(walled, ProbeField::build(walled), Pose2{}, goal);
  CHECK(cmd.w < -0.01);
  CHECK(cmd.w > -0.3);
  CHECK_FALSE(cmd.blocked);
}

TEST_CASE("rollouts toward a goal in front of a wall stay inside the star") {
  // Frontal wall sector spanning azimuths [-45deg, 31deg].
  TerrainProducts prod =
      analyze_terrain(synth_wall_pano(64, 256, 0.6, 2.2, 2.0, 96, 160), TerrainParams{});
  const double star = prod.scan.safe[128];
  REQUIRE(star < 2.0);
  const Vec2 goal{0.85 * star, 0.0};

  ProbeField f = ProbeField::build(prod);
  LocalPlannerParams p;
  LocalPlanner lp{p};
  LocalPlanner::Command cmd;
  for (int i = 0; i < 6; ++i) cmd = lp.plan(prod, f, Pose2{}, goal);
  CHECK(cmd.v > 0.3);
  CHECK(cmd.v < 1.0);
  CHECK_FALSE(cmd.blocked);

  // Every probe of the settled rollout keeps strictly positive clearance.
  double x = 0, y = 0, yaw = 0;
  const int steps = int(std::lround(p.horizon_s / p.dt));
  for (int k = 0; k < steps; ++k) {
    x += cmd.v * std::cos(yaw) * p.dt;
    y += cmd.v * std::sin(yaw) * p.dt;
    yaw += cmd.w * p.dt;
    CHECK(f.credit({x + 0.3 * std::cos(yaw), y + 0.3 * std::sin(yaw)}, p.dist_max) < 0.0);
  }
  const Vec2 endpt{x, y};
  CHECK(distance(endpt, goal) < 0.4);
}

TEST_CASE("boxed in against a wall reports blocked") {
  // A cylinder of wall at 0.25 m swallows every column.
  TerrainProducts prod =
      analyze_terrain(synth_wall_pano(64, 256, 0.6, 0.25, 2.0, 0, 255), TerrainParams{});
  for (int c = 0; c < 256; ++c) CHECK(prod.scan.safe[c] < 0.4);

  LocalPlanner lp{LocalPlannerParams{}};
  Vec2 g;
  CHECK_FALSE(lp.select_local_goal(prod.scan, Vec2{5.0, 0.0}, 2, &g));
  ProbeField f = ProbeField::build(prod);
  LocalPlanner::Command cmd = lp.plan(prod, f, Pose2{}, Vec2{2.0, 0.0});
  CHECK(cmd.blocked);
}

TEST_CASE("plan is a pure function of products and command history") {
  TerrainProducts prod =
      analyze_terrain(synth_wall_pano(64, 256, 0.6, 3.0, 2.0, 40, 90), TerrainParams{});
  ProbeField f = ProbeField::build(prod);
  LocalPlanner a{LocalPlannerParams{}}, b{LocalPlannerParams{}};
  for (int i = 0; i < 4; ++i) {
    LocalPlanner::Command ca = a.plan(prod, f, Pose2{}, Vec2{2.5, -1.0});
    LocalPlanner::Command cb = b.plan(prod, f, Pose2{}, Vec2{2.5, -1.0});
    CHECK(ca.v == cb.v);
    CHECK(ca.w == cb.w);
    CHECK(ca.blocked == cb.blocked);
  }
}

}  // TEST_SUITE
