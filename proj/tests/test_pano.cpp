#include <cmath>

#include "core/pano.hpp"
#include "core/world_gen.hpp"
#include "doctest.h"

using namespace agnav;

namespace {

PanoOptions small_opts() {
  PanoOptions o;
  o.rows = 64;
  o.cols = 256;
  o.noise_sigma = 0.0;
  o.max_range = 40.0;
  return o;
}

}  // namespace

TEST_SUITE("pano") {

TEST_CASE("flat ground rings match the closed form") {
  WorldModel w = generate_flat(120.0, 0.5);  // edges beyond the range cap
  const Pose2 pose{60.0, 60.0, 0.3};
  const auto opt = small_opts();
  DepthPanorama pano = render_panorama(w, pose, pose, opt);

  const double quarter = 0.125;
  for (int r = 0; r < pano.rows; ++r) {
    const double t = pano.theta(r);
    const double ring = t < 0 ? opt.sensor_height / std::tan(-t) : 1e18;
    if (ring > opt.max_range + 1.0) {
      // Beyond the range cap (or above the horizon) nothing is hit.
      for (int c = 0; c < pano.cols; ++c) CHECK(!pano.valid(r, c));
      continue;
    }
    if (ring > opt.max_range - 1.0) continue;  // cap boundary, either way is fine
    const double ideal = opt.sensor_height / std::sin(-t);
    for (int c = 0; c < pano.cols; c += 37) {
      REQUIRE(pano.valid(r, c));
      // March quantization only ever lands at or past the exact hit.
      CHECK(pano.at(r, c) >= ideal - 1e-6);
      CHECK(pano.at(r, c) <= ideal + quarter / std::cos(t) + 1e-6);
    }
  }

  // Planar hit distance grows monotonically toward the horizon in a column.
  for (int c = 0; c < pano.cols; c += 17) {
    double prev = 0;
    for (int r = pano.rows - 1; r >= 0; --r) {
      if (!pano.valid(r, c)) break;
      CHECK(pano.planar(r, c) >= prev - 1e-6);
      prev = pano.planar(r, c);
    }
  }
}

TEST_CASE("a wall appears at its range across several rows") {
  WorldModel w = generate_flat(60.0, 0.5);
  // 2 m tall slab 8 m east of the sensor.
  for (int cy = 40; cy < 80; ++cy)
    for (int cx = 76; cx < 78; ++cx) w.surface.at(cx, cy) = 2.0f;
  const Pose2 pose{30.0, 30.0, 0.0};
  auto opt = small_opts();
  DepthPanorama pano = render_panorama(w, pose, pose, opt);

  const int c_fwd = pano.column_of(0.0);
  int face_rows = 0;
  for (int r = 0; r < pano.rows; ++r) {
    if (!pano.valid(r, c_fwd)) continue;
    const double pr = pano.planar(r, c_fwd);
    if (std::fabs(pr - 8.0) < 0.3) ++face_rows;
  }
  CHECK(face_rows >= 10);

  // Behind the slab the high rays escape: planar range never lands in (8.6, 20).
  for (int r = 0; r < pano.rows; ++r) {
    if (!pano.valid(r, c_fwd)) continue;
    const double pr = pano.planar(r, c_fwd);
    CHECK(!(pr > 8.6 && pr < 20.0));
  }
}

TEST_CASE("noise is deterministic per seed and bounded below") {
  WorldModel w = generate_flat(40.0, 0.5);
  const Pose2 pose{20.0, 20.0, 0.0};
  auto opt = small_opts();
  opt.noise_sigma = 0.02;
  opt.noise_seed = 77;
  DepthPanorama a = render_panorama(w, pose, pose, opt);
  DepthPanorama b = render_panorama(w, pose, pose, opt);
  CHECK(a.range == b.range);

  opt.noise_seed = 78;
  DepthPanorama c = render_panorama(w, pose, pose, opt);
  CHECK(a.range != c.range);
  for (float v : c.range)
    if (v != 0.0f) CHECK(v >= 0.05f);
}

TEST_CASE("semantic panorama samples the true class under each return") {
  WorldModel w = generate_city({.size_m = 80.0, .vehicle_clusters = 4, .seed = 5});
  const Pose2 pose{20.0, 20.0, 0.7};
  auto opt = small_opts();
  DepthPanorama pano = render_panorama(w, pose, pose, opt);
  const auto cls = render_semantic(w, pano, pose);

  int checked = 0;
  for (int r = 0; r < pano.rows; ++r) {
    for (int c = 0; c < pano.cols; c += 11) {
      const size_t i = size_t(r) * pano.cols + c;
      if (!pano.valid(r, c)) {
        CHECK(cls[i] == kUnknownClass);
        continue;
      }
      CHECK(cls[i] != 5);  // person never appears
      const double pr = pano.planar(r, c);
      const double az = pano.azimuth(c);
      const Vec2 pt = pose.to_world({pr * std::cos(az), pr * std::sin(az)});
      CHECK(cls[i] == w.truth.class_at(pt));
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("reveal_disc stamps truth incrementally and monotonically") {
  WorldModel w = generate_city({.size_m = 80.0, .vehicle_clusters = 4, .seed = 5});
  auto partial = SemanticOrthomap::unknown_like(w.truth);
  std::vector<uint32_t> newly;
  const int n1 = reveal_disc(w, partial, {30.0, 30.0}, 15.0, &newly);
  CHECK(n1 == int(newly.size()));
  CHECK(n1 > 2500);

  for (uint32_t idx : newly) {
    CHECK(partial.known[idx] == 1);
    CHECK(partial.classes[idx] == w.truth.classes[idx]);
    CHECK(partial.elevation[idx] == w.truth.elevation[idx]);
  }

  // Same disc again: nothing new.
  CHECK(reveal_disc(w, partial, {30.0, 30.0}, 15.0, nullptr) == 0);

  // Overlapping disc reveals only the fresh crescent.
  const int n2 = reveal_disc(w, partial, {38.0, 30.0}, 15.0, nullptr);
  CHECK(n2 > 0);
  CHECK(n2 < n1);

  int known = 0;
  for (size_t i = 0; i < partial.known.size(); ++i) known += partial.known[i];
  CHECK(known == n1 + n2);
}

}  // TEST_SUITE
