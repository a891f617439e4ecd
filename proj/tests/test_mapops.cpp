#include <cmath>
#include <set>

#include "core/mapops.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace agnav;

TEST_SUITE("mapops") {

TEST_CASE("chamfer distance tracks euclidean within its usual bound") {
  Grid<uint8_t> mask(40, 40, 0);
  mask.at(5, 7) = 1;
  mask.at(30, 22) = 1;
  mask.at(18, 35) = 1;
  Grid<float> d = distance_to_mask(mask, 0.5);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 40; ++x) {
      double exact = 1e18;
      for (auto [mx, my] : {std::pair{5, 7}, {30, 22}, {18, 35}})
        exact = std::min(exact, std::hypot(double(x - mx), double(y - my)) * 0.5);
      // Chamfer 3-4 sits within [-5.8%, +5.5%] of euclidean.
      CHECK(d.at(x, y) >= exact * 0.942 - 1e-4);
      CHECK(d.at(x, y) <= exact * 1.055 + 1e-4);
    }
  }
  CHECK(d.at(5, 7) == 0.0f);
}

TEST_CASE("empty mask saturates") {
  Grid<uint8_t> mask(8, 8, 0);
  Grid<float> d = distance_to_mask(mask, 0.5);
  CHECK(d.at(0, 0) == kFarDistance);
}

TEST_CASE("per-class distances only see known cells") {
  SemanticOrthomap m = fixtures::make_map(20, 20, kRoad);
  fixtures::paint(m, 10, 0, 20, 20, kGrass);
  fixtures::hide(m, 10, 0, 20, 20);  // every grass cell is also unknown
  std::vector<Grid<float>> d = class_distance_maps(m);
  CHECK(d[kRoad].at(15, 10) == doctest::Approx(3.0).epsilon(0.05));
  CHECK(d[kGrass].at(0, 0) == kFarDistance);
  CHECK(d[kBuilding].at(0, 0) == kFarDistance);
}

TEST_CASE("dilate then erode closes a one-cell notch") {
  Grid<uint8_t> mask(12, 12, 0);
  for (int y = 4; y < 8; ++y)
    for (int x = 2; x < 10; ++x) mask.at(x, y) = 1;
  mask.at(5, 5) = 0;  // interior hole
  Grid<uint8_t> closed = erode3(dilate3(mask, 1), 1);
  CHECK(closed.at(5, 5) == 1);
  CHECK(closed.at(2, 4) == 1);   // corners survive a close
  CHECK(closed.at(0, 0) == 0);
  // Opening removes an isolated speck but keeps the slab.
  Grid<uint8_t> speck(12, 12, 0);
  speck.at(1, 1) = 1;
  for (int y = 4; y < 8; ++y)
    for (int x = 2; x < 10; ++x) speck.at(x, y) = 1;
  Grid<uint8_t> opened = dilate3(erode3(speck, 1), 1);
  CHECK(opened.at(1, 1) == 0);
  CHECK(opened.at(5, 6) == 1);
}

TEST_CASE("components split on 8-connectivity") {
  Grid<uint8_t> mask(10, 10, 0);
  mask.at(1, 1) = 1;
  mask.at(2, 2) = 1;  // diagonal joins
  mask.at(7, 7) = 1;
  auto comps = connected_components8(mask);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].size() == 2);
  CHECK(comps[0][0] == 11);
  CHECK(comps[1][0] == 77);
}

TEST_CASE("cell walk covers every cell the segment passes through") {
  SemanticOrthomap m = fixtures::make_map(30, 30);
  auto trace = [&](Vec2 a, Vec2 b) {
    std::set<std::pair<int, int>> cells;
    walk_cells(m, a, b, [&](int x, int y) {
      cells.insert({x, y});
      return true;
    });
    return cells;
  };

  auto axis = trace({0.75, 0.75}, {5.25, 0.75});
  CHECK(axis.size() == 10);
  for (int x = 1; x <= 10; ++x) CHECK(axis.count({x, 1}) == 1);

  // Dense sampling along a skewed segment never leaves the traced set.
  const Vec2 a{1.3, 2.9}, b{12.6, 9.1};
  auto skew = trace(a, b);
  for (int i = 0; i <= 2000; ++i) {
    const Vec2 p = a + (b - a) * (i / 2000.0);
    const int cx = int(std::floor(p.x / 0.5)), cy = int(std::floor(p.y / 0.5));
    CHECK(skew.count({cx, cy}) == 1);
  }

  // Early exit stops the walk.
  int visited = 0;
  walk_cells(m, {0.25, 0.25}, {14.0, 0.25}, [&](int, int) { return ++visited < 3; });
  CHECK(visited == 3);
}

}  // TEST_SUITE
