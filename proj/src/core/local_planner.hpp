#pragma once

#include <cstdint>
#include <vector>

#include "core/terrain.hpp"

namespace agnav {

struct LocalPlannerParams {
  double heading_weight = 2.0;  // pull toward the previous goal direction
  int goal_samples = 128;
  double horizon_s = 2.0;
  double dt = 0.1;
  double v_max = 1.5;
  double w_max = 1.5;
  int control_grid = 15;        // candidates per axis
  double control_window = 0.5;  // +/- around the previous command
  double probe_ahead = 0.3;     // clearance probe offset in front of the base
  double dist_max = 5.0;        // clearance credit saturation
  double min_star = 0.4;        // below this the scan is too tight to sample
};

/// Per-azimuth clearance lookup built once per scan: every valid pixel's
/// planar range and distance value, sorted outward per column.
struct ProbeField {
  int cols = 0;
  std::vector<float> star;          // safe radius per column
  std::vector<uint32_t> offsets;    // cols+1 entries into the flat arrays
  std::vector<float> pr;            // planar ranges
  std::vector<float> dist;

  static ProbeField build(const TerrainProducts& prod);

  /// Clearance credit at a scan-frame point: the distance value of the
  /// nearest pixel along the point's azimuth, 0 beyond the star boundary,
  /// full credit where the star vouches for a spot no pixel covers.
  double credit(const Vec2& q, double dist_max) const;
};

class LocalPlanner {
 public:
  struct Command {
    double v = 0.0;
    double w = 0.0;
    bool blocked = false;  // every candidate starts inside an obstacle margin
  };

  explicit LocalPlanner(const LocalPlannerParams& params) : p_(params) {}

  /// Samples the star region (area-uniform) and picks the point that best
  /// trades progress toward goal_world against turning away from the last
  /// local goal. Returns false when the star is too collapsed to sample.
  bool select_local_goal(const ReachabilityScan& scan, const Vec2& goal_world,
                         uint64_t rng_stream, Vec2* local_out);

  /// Scores the velocity grid over the clearance field and returns the best
  /// command. cur_pose is the robot's current believed world pose.
  Command plan(const TerrainProducts& prod, const ProbeField& field,
               const Pose2& cur_pose, const Vec2& local_goal);

  void reset() {
    have_prev_goal_ = false;
    prev_v_ = prev_w_ = 0.0;
  }

  double prev_v() const { return prev_v_; }
  double prev_w() const { return prev_w_; }

 private:
  LocalPlannerParams p_;
  bool have_prev_goal_ = false;
  Vec2 prev_goal_world_;
  double prev_v_ = 0.0;
  double prev_w_ = 0.0;
};

}  // namespace agnav
