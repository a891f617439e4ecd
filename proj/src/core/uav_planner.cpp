#include "core/uav_planner.hpp"

#include <algorithm>
#include <cmath>

namespace agnav {

Vec2 predict_ugv(const UgvBelief& belief, double now, double ugv_speed) {
  if (!belief.has_goal) return belief.position;
  const Vec2 to_goal = belief.goal - belief.position;
  const double len = to_goal.norm();
  if (len < 1e-9) return belief.goal;
  const double advance = std::min(ugv_speed * std::max(now - belief.pose_time, 0.0), len);
  return belief.position + to_goal * (advance / len);
}

UavPlanner::UavPlanner(std::vector<Vec2> waypoints, const UavParams& p)
    : wps_(std::move(waypoints)), p_(p) {}

namespace {

Vec2 fly_toward(const Vec2& pos, const Vec2& target, double speed, double dt) {
  const Vec2 d = target - pos;
  const double len = d.norm();
  if (len < 1e-9) return {0.0, 0.0};
  return d * (std::min(speed, len / dt) / len);
}

}  // namespace

UavPlanner::Command UavPlanner::tick(double now, double dt, const Vec2& pos,
                                     const std::vector<UgvBelief>& ugvs,
                                     const std::vector<int>& full_synced) {
  Command cmd;
  std::vector<int> ids;
  for (const auto& b : ugvs) ids.push_back(b.id);
  std::sort(ids.begin(), ids.end());
  auto synced = [&](int id) {
    return std::find(full_synced.begin(), full_synced.end(), id) != full_synced.end();
  };
  auto belief_of = [&](int id) -> const UgvBelief* {
    for (const auto& b : ugvs)
      if (b.id == id) return &b;
    return nullptr;
  };
  auto near = [&](const Vec2& t) { return distance(pos, t) <= p_.arrive_dist; };
  auto next_target = [&]() {
    target_ = ids[rr_cursor_ % ids.size()];
    ++rr_cursor_;
    seek_start_ = now;
  };

  if ((mode_ == UavMode::kExplore || mode_ == UavMode::kReturnToExploration) &&
      wp_idx_ >= wps_.size())
    mode_ = UavMode::kRelayCycle;

  if (mode_ == UavMode::kReturnToExploration && near(wps_[wp_idx_])) {
    mode_ = UavMode::kExplore;
    phase_start_ = now;
  }
  if (mode_ == UavMode::kExplore) {
    while (wp_idx_ < wps_.size() && near(wps_[wp_idx_])) ++wp_idx_;
    if (wp_idx_ >= wps_.size()) mode_ = UavMode::kRelayCycle;
  }
  if (mode_ == UavMode::kGotoRobot &&
      (synced(target_) || now - seek_start_ > p_.seek_timeout)) {
    target_ = -1;
    mode_ = wp_idx_ < wps_.size() ? UavMode::kReturnToExploration
                                  : UavMode::kRelayCycle;
  }
  // A fresh seek always flies at least one tick before its own exit check.
  if (mode_ == UavMode::kExplore && now - phase_start_ >= p_.explore_phase) {
    if (ids.empty()) {
      phase_start_ = now;
      cmd.seek_skipped = true;
    } else {
      next_target();
      mode_ = UavMode::kGotoRobot;
    }
  }
  if (mode_ == UavMode::kRelayCycle && !ids.empty() &&
      (target_ < 0 || synced(target_) || now - seek_start_ > p_.seek_timeout))
    next_target();

  cmd.mode = mode_;
  cmd.target_robot = target_;
  switch (mode_) {
    case UavMode::kExplore:
    case UavMode::kReturnToExploration:
      cmd.velocity = fly_toward(pos, wps_[wp_idx_], p_.speed, dt);
      break;
    case UavMode::kGotoRobot:
    case UavMode::kRelayCycle:
      if (const UgvBelief* b = belief_of(target_))
        cmd.velocity = fly_toward(pos, predict_ugv(*b, now, p_.ugv_nominal_speed),
                                  p_.speed, dt);
      break;
  }
  return cmd;
}

}  // namespace agnav
