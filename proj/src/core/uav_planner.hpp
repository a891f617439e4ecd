#pragma once

#include <cstdint>
#include <vector>

#include "core/geometry.hpp"

namespace agnav {

enum class UavMode : uint8_t { kExplore, kGotoRobot, kReturnToExploration, kRelayCycle };

struct UavParams {
  double speed = 10.0;
  double explore_phase = 120.0;  // explore time between seeks, seconds
  double seek_timeout = 60.0;
  double reveal_radius = 40.0;  // map cells uncovered around the aircraft
  double arrive_dist = 2.0;
  double ugv_nominal_speed = 1.0;  // drives the intercept prediction
};

/// What the UAV's replica currently says about one ground robot.
struct UgvBelief {
  int id = -1;
  Vec2 position;
  double pose_time = 0.0;
  bool has_goal = false;
  Vec2 goal;
};

/// Where a ground robot is expected now: its last pose advanced toward its
/// claimed goal at nominal speed, stopping at the goal.
Vec2 predict_ugv(const UgvBelief& belief, double now, double ugv_speed);

/// Time-sharing flight plan: fly the survey waypoints, break off on a timer
/// to ferry data to one ground robot at a time (round-robin), and orbit the
/// team forever once the survey is done.
class UavPlanner {
 public:
  UavPlanner(std::vector<Vec2> waypoints, const UavParams& p);

  struct Command {
    Vec2 velocity;         // world frame, capped at params.speed
    UavMode mode = UavMode::kExplore;
    int target_robot = -1;  // who is being sought, if anyone
    bool seek_skipped = false;  // timer fired with no known robots
  };

  /// One decision step. full_synced lists robot ids whose stores finished a
  /// full exchange with the UAV since the previous tick.
  Command tick(double now, double dt, const Vec2& pos,
               const std::vector<UgvBelief>& ugvs,
               const std::vector<int>& full_synced);

  UavMode mode() const { return mode_; }
  size_t waypoint_index() const { return wp_idx_; }

 private:
  std::vector<Vec2> wps_;
  UavParams p_;
  UavMode mode_ = UavMode::kExplore;
  size_t wp_idx_ = 0;
  double phase_start_ = 0.0;  // when the current explore phase began
  double seek_start_ = 0.0;
  int target_ = -1;
  size_t rr_cursor_ = 0;
};

}  // namespace agnav
