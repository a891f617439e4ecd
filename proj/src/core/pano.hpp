#pragma once

#include <cstdint>
#include <vector>

#include "core/geometry.hpp"
#include "core/world.hpp"

namespace agnav {

struct PanoOptions {
  int rows = 128;
  int cols = 1024;
  double elev_max_deg = 22.5;
  double elev_min_deg = -45.0;
  double sensor_height = 0.6;
  double max_range = 48.0;
  double noise_sigma = 0.02;
  uint64_t noise_seed = 0;
};

/// Polar depth image. Row 0 is the top scan line (highest elevation angle);
/// range 0 marks an empty pixel (ray escaped or left the map).
struct DepthPanorama {
  int rows = 0;
  int cols = 0;
  double elev_max = 0.0;  // radians, row 0
  double elev_min = 0.0;  // radians, last row
  double sensor_height = 0.6;
  Pose2 sensor_pose;      // pose the consumer should reason in
  std::vector<float> range;

  double theta(int row) const {
    if (rows == 1) return elev_max;
    return elev_max - row * (elev_max - elev_min) / (rows - 1);
  }
  double dazimuth() const { return kTwoPi / cols; }
  /// Sensor-frame azimuth of a column center, in (-pi, pi].
  double azimuth(int col) const { return -kPi + (col + 0.5) * dazimuth(); }
  int column_of(double az) const {
    int c = int(std::floor((wrap_angle(az) + kPi) / dazimuth()));
    if (c < 0) c = 0;
    if (c >= cols) c = cols - 1;
    return c;
  }

  float at(int row, int col) const { return range[size_t(row) * cols + col]; }
  float& at(int row, int col) { return range[size_t(row) * cols + col]; }
  bool valid(int row, int col) const { return at(row, col) > 0.0f; }

  /// Horizontal (planar) range of a pixel.
  double planar(int row, int col) const { return at(row, col) * std::cos(theta(row)); }
  /// Height relative to the sensor.
  double rel_z(int row, int col) const { return at(row, col) * std::sin(theta(row)); }
  /// Azimuthal arc length per pixel at a pixel's slant range.
  double arc(int row, int col) const { return dazimuth() * at(row, col); }
};

/// Casts the panorama from true_pose over the world surface field, then stamps
/// believed_pose on the product. Deterministic for a fixed options struct.
DepthPanorama render_panorama(const WorldModel& world, const Pose2& true_pose,
                              const Pose2& believed_pose, const PanoOptions& opt);

/// Per-pixel semantic class ids sampled from the ground-truth map at each
/// depth return, kUnknownClass where empty or off-map.
std::vector<uint8_t> render_semantic(const WorldModel& world,
                                     const DepthPanorama& pano,
                                     const Pose2& true_pose);

/// Copies truth into a partial map inside a disc. Appends the linear indices
/// of newly revealed cells to newly (if given) and returns how many there were.
int reveal_disc(const WorldModel& world, SemanticOrthomap& partial, Vec2 center,
                double radius, std::vector<uint32_t>* newly);

}  // namespace agnav
