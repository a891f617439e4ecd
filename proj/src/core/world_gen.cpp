#include "core/world_gen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/rng.hpp"

namespace agnav {

std::vector<ClassInfo> default_palette() {
  return {
      {"road", {90, 90, 95}},     {"sidewalk", {168, 168, 170}},
      {"grass", {70, 140, 60}},   {"building", {120, 90, 70}},
      {"vehicle", {180, 40, 40}}, {"person", {240, 200, 60}},
  };
}

namespace {

WorldModel blank_world(int w, int h, double res) {
  WorldModel world;
  world.truth.resolution = res;
  world.truth.origin = {0.0, 0.0};
  world.truth.palette = default_palette();
  world.truth.classes = Grid<uint8_t>(w, h, kGrass);
  world.truth.color = Grid<std::array<uint8_t, 3>>(w, h);
  world.truth.elevation = Grid<float>(w, h, 0.0f);
  world.truth.known = Grid<uint8_t>(w, h, 1);
  world.surface = Grid<float>(w, h, 0.0f);
  return world;
}

void paint(WorldModel& w, int cx, int cy, uint8_t cls, float height) {
  w.truth.classes.at(cx, cy) = cls;
  w.truth.elevation.at(cx, cy) = height;
  w.surface.at(cx, cy) = height;
  w.truth.color.at(cx, cy) = w.truth.palette[cls].color;
}

/// Per-cell color jitter so learned features never see a flat channel.
void jitter_colors(WorldModel& w, uint64_t seed) {
  Rng rng(derive_stream(seed, 0xc0102));
  for (size_t i = 0; i < w.truth.color.size(); ++i) {
    auto& c = w.truth.color[i];
    for (int k = 0; k < 3; ++k) {
      const int v = int(c[k]) + rng.uniform_int(13) - 6;
      c[k] = uint8_t(std::clamp(v, 0, 255));
    }
  }
}

void paint_rect(WorldModel& w, double x0, double y0, double x1, double y1,
                uint8_t cls, float height) {
  const double res = w.truth.resolution;
  const int cx0 = std::max(0, int(std::floor(x0 / res)));
  const int cy0 = std::max(0, int(std::floor(y0 / res)));
  const int cx1 = std::min(w.width() - 1, int(std::floor(x1 / res)));
  const int cy1 = std::min(w.height() - 1, int(std::floor(y1 / res)));
  for (int cy = cy0; cy <= cy1; ++cy)
    for (int cx = cx0; cx <= cx1; ++cx) paint(w, cx, cy, cls, height);
}

}  // namespace

WorldModel generate_flat(double size_m, double resolution) {
  const int n = int(std::lround(size_m / resolution));
  WorldModel w = blank_world(n, n, resolution);
  for (int cy = 0; cy < n; ++cy)
    for (int cx = 0; cx < n; ++cx) paint(w, cx, cy, kRoad, 0.0f);
  w.starts.push_back({size_m / 2, size_m / 2, 0.0});
  w.validate();
  return w;
}

WorldModel generate_city(const CityParams& p) {
  const double res = p.resolution;
  const int n = int(std::lround(p.size_m / res));
  WorldModel w = blank_world(n, n, res);
  Rng rng(derive_stream(p.seed, 0xc171));

  std::vector<double> centers;
  for (double c = p.road_spacing / 2; c < p.size_m; c += p.road_spacing)
    centers.push_back(c);
  const double walk_outer = p.road_halfwidth + p.sidewalk_width;

  auto axis_dist = [&](double v) {
    double best = 1e9;
    for (double c : centers) best = std::min(best, std::fabs(v - c));
    return best;
  };
  // Curb cuts: anchors along every road, skipping intersection aprons.
  auto has_ramp = [&](double along, double across_center) {
    const double phase = std::fmod(along + p.ramp_spacing / 2, p.ramp_spacing);
    const double anchor_off = std::fabs(phase - p.ramp_spacing / 2);
    if (anchor_off > 1.0) return false;
    (void)across_center;
    return axis_dist(along) > p.road_halfwidth + 4.0;
  };

  for (int cy = 0; cy < n; ++cy) {
    for (int cx = 0; cx < n; ++cx) {
      const Vec2 c = w.truth.cell_center(cx, cy);
      const double dx = axis_dist(c.x), dy = axis_dist(c.y);
      if (dx <= p.road_halfwidth || dy <= p.road_halfwidth) {
        paint(w, cx, cy, kRoad, 0.0f);
        continue;
      }
      if (dx <= walk_outer || dy <= walk_outer) {
        // Perpendicular offset into the walk, measured from the road edge.
        double off;
        double along;
        if (dx <= walk_outer && (dx <= dy || dy > walk_outer)) {
          off = dx - p.road_halfwidth;
          along = c.y;
        } else {
          off = dy - p.road_halfwidth;
          along = c.x;
        }
        float h = float(p.curb_height);
        bool ramp = has_ramp(along, 0) && off <= p.ramp_length + 0.01;
        if (ramp) h = float(p.curb_height * std::min(1.0, off / p.ramp_length));
        paint(w, cx, cy, kSidewalk, h);
        if (ramp) w.truth.color.at(cx, cy) = {205, 185, 95};
        continue;
      }
      paint(w, cx, cy, kGrass, float(p.curb_height));
    }
  }

  // Wall off the map rim so nothing wanders along the border strip.
  for (int cy = 0; cy < n; ++cy) {
    for (int cx = 0; cx < n; ++cx) {
      const Vec2 c = w.truth.cell_center(cx, cy);
      const bool rim = c.x < 6.0 || c.y < 6.0 || c.x > p.size_m - 6.0 ||
                       c.y > p.size_m - 6.0;
      if (rim && w.truth.classes.at(cx, cy) == kGrass)
        paint(w, cx, cy, kBuilding, float(p.building_height));
    }
  }

  // One or two buildings per interior block.
  for (size_t bi = 0; bi + 1 < centers.size(); ++bi) {
    for (size_t bj = 0; bj + 1 < centers.size(); ++bj) {
      const double lo_x = centers[bi] + walk_outer + 3.0;
      const double hi_x = centers[bi + 1] - walk_outer - 3.0;
      const double lo_y = centers[bj] + walk_outer + 3.0;
      const double hi_y = centers[bj + 1] - walk_outer - 3.0;
      const int count = 1 + rng.uniform_int(2);
      for (int k = 0; k < count; ++k) {
        const double bw = rng.uniform(9.0, 15.0);
        const double bh = rng.uniform(9.0, 15.0);
        if (hi_x - lo_x < bw || hi_y - lo_y < bh) continue;
        const double x0 = rng.uniform(lo_x, hi_x - bw);
        const double y0 = rng.uniform(lo_y, hi_y - bh);
        paint_rect(w, x0, y0, x0 + bw, y0 + bh, kBuilding, float(p.building_height));
      }
    }
  }

  // Parked vehicle clusters along road edges; these are the mission goals.
  const std::array<std::array<uint8_t, 3>, 5> car_colors = {
      {{180, 40, 40}, {60, 90, 180}, {220, 220, 225}, {45, 45, 50}, {150, 150, 60}}};
  int placed = 0, attempts = 0;
  while (placed < p.vehicle_clusters && attempts < p.vehicle_clusters * 60) {
    ++attempts;
    const bool vertical = rng.uniform_int(2) == 0;
    const double road = centers[rng.uniform_int(int(centers.size()))];
    const double along = rng.uniform(12.0, p.size_m - 12.0);
    if (axis_dist(along) < p.road_halfwidth + 6.0) continue;  // clear of junctions
    const double side = rng.uniform_int(2) == 0 ? -1.0 : 1.0;
    Vec2 center = vertical ? Vec2{road + side * 2.9, along}
                           : Vec2{along, road + side * 2.9};
    bool clash = false;
    for (const auto& g : w.goal_clusters)
      if (distance(g, center) < 16.0) clash = true;
    if (distance(center, {10.0, 20.0}) < 25.0) clash = true;  // keep start clear
    if (clash) continue;
    const int cars = 2 + rng.uniform_int(3);
    const double len = 4.5, gap = 0.8;
    const double span = cars * len + (cars - 1) * gap;
    for (int k = 0; k < cars; ++k) {
      const double a0 = along - span / 2 + k * (len + gap);
      const auto col = car_colors[rng.uniform_int(int(car_colors.size()))];
      const double p0 = road + side * 2.0, p1 = road + side * 3.8;
      const double lo_p = std::min(p0, p1), hi_p = std::max(p0, p1);
      if (vertical)
        paint_rect(w, lo_p, a0, hi_p, a0 + len, kVehicle, float(p.vehicle_height));
      else
        paint_rect(w, a0, lo_p, a0 + len, hi_p, kVehicle, float(p.vehicle_height));
      // Recolor the car body.
      const double res2 = w.truth.resolution;
      const int cx0 = int(std::floor((vertical ? lo_p : a0) / res2));
      const int cy0 = int(std::floor((vertical ? a0 : lo_p) / res2));
      const int cx1 = int(std::floor((vertical ? hi_p : a0 + len) / res2));
      const int cy1 = int(std::floor((vertical ? a0 + len : hi_p) / res2));
      for (int cy = std::max(0, cy0); cy <= std::min(n - 1, cy1); ++cy)
        for (int cx = std::max(0, cx0); cx <= std::min(n - 1, cx1); ++cx)
          if (w.truth.classes.at(cx, cy) == kVehicle)
            w.truth.color.at(cx, cy) = col;
    }
    w.goal_clusters.push_back(center);
    ++placed;
  }

  // Surface-only barriers; the semantic and elevation layers keep showing road.
  if (p.roadblocks > 0) {
    struct Seg {
      bool vertical;
      double road, lo, hi;
    };
    std::vector<Seg> segs;
    for (double road : centers) {
      std::vector<double> cuts = {4.0};
      for (double c : centers) {
        cuts.push_back(c - p.road_halfwidth - 2.0);
        cuts.push_back(c + p.road_halfwidth + 2.0);
      }
      cuts.push_back(p.size_m - 4.0);
      std::sort(cuts.begin(), cuts.end());
      for (size_t i = 0; i + 1 < cuts.size(); i += 1) {
        if (cuts[i + 1] - cuts[i] < 14.0) continue;
        segs.push_back({true, road, cuts[i], cuts[i + 1]});
        segs.push_back({false, road, cuts[i], cuts[i + 1]});
      }
    }
    int blocks = 0, tries = 0;
    std::vector<Vec2> sites;
    while (blocks < p.roadblocks && tries < p.roadblocks * 50 && !segs.empty()) {
      ++tries;
      const Seg s = segs[rng.uniform_int(int(segs.size()))];
      const double mid = (s.lo + s.hi) / 2 + rng.uniform(-5.0, 5.0);
      const Vec2 site = s.vertical ? Vec2{s.road, mid} : Vec2{mid, s.road};
      if (distance(site, {10.0, 20.0}) < 35.0) continue;
      bool clash = false;
      for (const auto& q : sites)
        if (distance(q, site) < 25.0) clash = true;
      if (clash) continue;
      const double res2 = w.truth.resolution;
      const double hw = p.road_halfwidth;
      const double x0 = s.vertical ? s.road - hw : mid - 0.5;
      const double x1 = s.vertical ? s.road + hw : mid + 0.5;
      const double y0 = s.vertical ? mid - 0.5 : s.road - hw;
      const double y1 = s.vertical ? mid + 0.5 : s.road + hw;
      for (int cy = std::max(0, int(y0 / res2)); cy <= std::min(n - 1, int(y1 / res2)); ++cy)
        for (int cx = std::max(0, int(x0 / res2)); cx <= std::min(n - 1, int(x1 / res2)); ++cx)
          if (w.truth.classes.at(cx, cy) == kRoad)
            w.surface.at(cx, cy) = float(p.roadblock_height);
      sites.push_back(site);
      ++blocks;
    }
  }

  for (int i = 0; i < p.start_count; ++i)
    w.starts.push_back({8.0 + 2.4 * i, 18.5, 0.0});

  jitter_colors(w, p.seed);
  w.validate();
  return w;
}

WorldModel generate_ramp_fixture() {
  const double res = 0.5;
  const int nw = 120, nh = 60;  // 60 x 30 m
  WorldModel w = blank_world(nw, nh, res);
  for (int cy = 0; cy < nh; ++cy) {
    for (int cx = 0; cx < nw; ++cx) {
      const Vec2 c = w.truth.cell_center(cx, cy);
      if (c.y < 18.0) {
        paint(w, cx, cy, kRoad, 0.0f);
      } else if (c.y < 24.0) {
        const bool ramp = (std::fabs(c.x - 15.0) <= 1.0 || std::fabs(c.x - 45.0) <= 1.0);
        const double off = c.y - 18.0;
        float h = 0.15f;
        if (ramp && off <= 1.0) h = float(0.15 * off);
        paint(w, cx, cy, kSidewalk, h);
        if (ramp && off <= 1.0) w.truth.color.at(cx, cy) = {205, 185, 95};
      } else if (c.y < 27.0) {
        paint(w, cx, cy, kGrass, 0.15f);
      } else {
        paint(w, cx, cy, kBuilding, 6.0f);
      }
    }
  }
  w.starts.push_back({8.0, 9.0, 0.0});
  jitter_colors(w, 7);
  w.validate();
  return w;
}

WorldModel generate_handoff() {
  const double res = 0.5;
  const int nw = 300, nh = 140;  // 150 x 70 m
  WorldModel w = blank_world(nw, nh, res);
  for (int cy = 0; cy < nh; ++cy)
    for (int cx = 0; cx < nw; ++cx) paint(w, cx, cy, kBuilding, 6.0f);

  auto corridor = [&](double x0, double y0, double x1, double y1) {
    paint_rect(w, x0, y0, x1, y1, kRoad, 0.0f);
  };
  corridor(5.0, 7.0, 145.0, 13.0);     // south, holds start and goal
  corridor(20.0, 29.0, 140.0, 35.0);   // middle
  corridor(17.0, 52.0, 143.0, 58.0);   // north, the only clear route
  corridor(17.0, 7.0, 23.0, 58.0);     // west link
  corridor(137.0, 7.0, 143.0, 58.0);   // east link

  // Waist-high barriers, surface only: south at x=85, middle at x=95.
  auto barrier = [&](double x, double y0, double y1) {
    for (int cy = int(y0 / res); cy <= int(y1 / res) - 1; ++cy)
      for (int cx = int((x - 0.5) / res); cx <= int((x + 0.5) / res); ++cx)
        if (w.truth.classes.at(cx, cy) == kRoad) w.surface.at(cx, cy) = 1.2f;
  };
  barrier(85.0, 7.0, 13.0);
  barrier(95.0, 29.0, 35.0);

  w.starts.push_back({12.0, 10.0, 0.0});
  w.starts.push_back({8.0, 10.0, 0.0});
  jitter_colors(w, 11);
  w.validate();
  return w;
}

WorldModel generate_world(const std::string& preset, uint64_t seed,
                          int vehicle_clusters, int roadblocks) {
  if (preset == "flat") return generate_flat(60.0, 0.5);
  if (preset == "ramp_fixture") return generate_ramp_fixture();
  if (preset == "handoff") return generate_handoff();
  if (preset == "city") {
    CityParams p;
    p.seed = seed;
    if (vehicle_clusters > 0) p.vehicle_clusters = vehicle_clusters;
    p.roadblocks = std::max(0, roadblocks);
    return generate_city(p);
  }
  throw std::runtime_error("unknown world preset '" + preset + "'");
}

}  // namespace agnav
