#pragma once

#include <cstdint>
#include <vector>

#include "core/pano.hpp"

namespace agnav {

struct TerrainParams {
  double hole_fill_m = 0.5;      // largest physical gap to interpolate across
  double grad_window_m = 0.5;    // smallest obstacle size the gradients target
  int max_az_window_px = 16;     // cap on the azimuthal window before halving
  double grad_thresh = 1.0;      // |gradient| above this marks an obstacle
  double dist_max_m = 5.0;       // distance transform saturation
  double inflation_m = 0.5;      // clearance the reachability walk requires
  double row_gap_m = 2.0;        // planar gap that ends a column walk
  double noise_sigma = 0.02;     // range noise scale the gradients discount
};

struct ObstaclePanorama {
  int rows = 0, cols = 0;
  std::vector<uint8_t> obstacle;   // 1 where |gradient| exceeds the threshold
  std::vector<uint8_t> valid;      // gradient defined here
  std::vector<float> grad_az;
  std::vector<float> grad_el;
  std::vector<float> grad_mag;

  bool is_obstacle(int r, int c) const { return obstacle[size_t(r) * cols + c] != 0; }
};

struct DistancePanorama {
  int rows = 0, cols = 0;
  std::vector<float> dist;

  float at(int r, int c) const { return dist[size_t(r) * cols + c]; }
  float& at(int r, int c) { return dist[size_t(r) * cols + c]; }
};

/// Polar free-space summary: per azimuth, how far the ground is certified
/// drivable and whether the walk ended at an obstacle or just ran out of
/// usable returns.
struct ReachabilityScan {
  int cols = 0;
  Pose2 pose;           // frame the safe distances are expressed in
  int origin_robot = -1;
  uint32_t sequence = 0;
  std::vector<float> safe;
  std::vector<uint8_t> obstacle;

  double dazimuth() const { return kTwoPi / cols; }
  double azimuth(int col) const { return -kPi + (col + 0.5) * dazimuth(); }
  int column_of(double az) const {
    int c = int(std::floor((wrap_angle(az) + kPi) / dazimuth()));
    if (c < 0) c = 0;
    if (c >= cols) c = cols - 1;
    return c;
  }
  float max_safe() const {
    float m = 0;
    for (float v : safe) m = std::max(m, v);
    return m;
  }
};

/// Interpolates empty runs along each row when the physical gap they span is
/// smaller than hole_fill_m at the bounding range. No azimuth wraparound.
DepthPanorama fill_holes(const DepthPanorama& pano, const TerrainParams& tp);

ObstaclePanorama compute_gradients(const DepthPanorama& pano, const TerrainParams& tp);

/// Three-pass approximate distance-to-obstacle in panorama space: one pass
/// down each column, then a sweep each way along every row.
DistancePanorama distance_transform(const DepthPanorama& pano,
                                    const ObstaclePanorama& obs,
                                    const TerrainParams& tp);

ReachabilityScan reachability_scan(const DepthPanorama& pano,
                                   const DistancePanorama& dist,
                                   const TerrainParams& tp);

struct TerrainProducts {
  DepthPanorama filled;
  ObstaclePanorama obstacles;
  DistancePanorama distances;
  ReachabilityScan scan;
};

TerrainProducts analyze_terrain(const DepthPanorama& pano, const TerrainParams& tp);

/// Scan-frame boundary radius at an arbitrary azimuth (linear between bins).
double star_radius_at(const ReachabilityScan& scan, double az);

/// Closed-region test against the star boundary; points on it count as inside.
bool point_in_star(const ReachabilityScan& scan, const Vec2& local);

/// Counts proper crossings of a scan-frame segment with the star boundary
/// polygon. Records the azimuth of the crossing nearest to a (optional).
int count_star_crossings(const ReachabilityScan& scan, const Vec2& a,
                         const Vec2& b, double* first_crossing_az);

std::vector<uint8_t> serialize_scan(const ReachabilityScan& scan);
ReachabilityScan parse_scan(const std::vector<uint8_t>& bytes);

}  // namespace agnav
