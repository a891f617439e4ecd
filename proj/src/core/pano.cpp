#include "core/pano.hpp"

#include <cassert>
#include <cmath>

#include "core/rng.hpp"

namespace agnav {

DepthPanorama render_panorama(const WorldModel& world, const Pose2& true_pose,
                              const Pose2& believed_pose, const PanoOptions& opt) {
  DepthPanorama pano;
  pano.rows = opt.rows;
  pano.cols = opt.cols;
  pano.elev_max = deg_to_rad(opt.elev_max_deg);
  pano.elev_min = deg_to_rad(opt.elev_min_deg);
  pano.sensor_height = opt.sensor_height;
  pano.sensor_pose = believed_pose;
  pano.range.assign(size_t(opt.rows) * opt.cols, 0.0f);

  std::vector<double> tan_t(opt.rows), inv_cos_t(opt.rows);
  for (int r = 0; r < opt.rows; ++r) {
    const double t = pano.theta(r);
    tan_t[r] = std::tan(t);
    inv_cos_t[r] = 1.0 / std::cos(t);
  }

  const double z_sensor = world.surface_at(true_pose.position()) + opt.sensor_height;
  const double step = world.truth.resolution / 4.0;

  for (int c = 0; c < opt.cols; ++c) {
    const double az = true_pose.yaw + pano.azimuth(c);
    const double dx = std::cos(az), dy = std::sin(az);
    int row = opt.rows - 1;  // steepest-down ray resolves first
    for (double d = step; d <= opt.max_range && row >= 0; d += step) {
      const Vec2 p{true_pose.x + d * dx, true_pose.y + d * dy};
      int cx, cy;
      if (!world.truth.cell_of(p, &cx, &cy)) break;
      const double surf_rel = world.surface.at(cx, cy) - z_sensor;
      while (row >= 0 && d * tan_t[row] <= surf_rel) {
        pano.at(row, c) = float(d * inv_cos_t[row]);
        --row;
      }
    }
  }

  if (opt.noise_sigma > 0.0) {
    Rng rng(derive_stream(opt.noise_seed, 0x9a40));
    for (size_t i = 0; i < pano.range.size(); ++i) {
      if (pano.range[i] <= 0.0f) continue;
      const double noisy = pano.range[i] + rng.gaussian(0.0, opt.noise_sigma);
      pano.range[i] = float(std::max(0.05, noisy));
    }
  }
  return pano;
}

std::vector<uint8_t> render_semantic(const WorldModel& world,
                                     const DepthPanorama& pano,
                                     const Pose2& true_pose) {
  std::vector<uint8_t> cls(pano.range.size(), kUnknownClass);
  for (int r = 0; r < pano.rows; ++r) {
    for (int c = 0; c < pano.cols; ++c) {
      if (!pano.valid(r, c)) continue;
      const double pr = pano.planar(r, c);
      const double az = pano.azimuth(c);
      const Vec2 w = true_pose.to_world({pr * std::cos(az), pr * std::sin(az)});
      int cx, cy;
      if (!world.truth.cell_of(w, &cx, &cy)) continue;
      cls[size_t(r) * pano.cols + c] = world.truth.classes.at(cx, cy);
    }
  }
  return cls;
}

int reveal_disc(const WorldModel& world, SemanticOrthomap& partial, Vec2 center,
                double radius, std::vector<uint32_t>* newly) {
  assert(partial.width() == world.width() && partial.height() == world.height());
  const double res = partial.resolution;
  const int cx0 = std::max(0, int((center.x - radius) / res));
  const int cy0 = std::max(0, int((center.y - radius) / res));
  const int cx1 = std::min(partial.width() - 1, int((center.x + radius) / res));
  const int cy1 = std::min(partial.height() - 1, int((center.y + radius) / res));
  const double r_sq = radius * radius;
  int count = 0;
  for (int cy = cy0; cy <= cy1; ++cy) {
    for (int cx = cx0; cx <= cx1; ++cx) {
      if (partial.known.at(cx, cy)) continue;
      const Vec2 cc = partial.cell_center(cx, cy);
      if ((cc - center).norm_sq() > r_sq) continue;
      partial.known.at(cx, cy) = 1;
      partial.classes.at(cx, cy) = world.truth.classes.at(cx, cy);
      partial.color.at(cx, cy) = world.truth.color.at(cx, cy);
      partial.elevation.at(cx, cy) = world.truth.elevation.at(cx, cy);
      if (newly) newly->push_back(uint32_t(cy) * partial.width() + cx);
      ++count;
    }
  }
  return count;
}

}  // namespace agnav
