#include "core/local_planner.hpp"

#include <algorithm>
#include <cmath>

#include "core/rng.hpp"

namespace agnav {

ProbeField ProbeField::build(const TerrainProducts& prod) {
  const auto& pano = prod.filled;
  const int E = pano.rows, A = pano.cols;
  ProbeField f;
  f.cols = A;
  f.star.assign(prod.scan.safe.begin(), prod.scan.safe.end());
  f.offsets.assign(A + 1, 0);
  f.pr.reserve(size_t(E) * A / 2);
  f.dist.reserve(size_t(E) * A / 2);
  for (int c = 0; c < A; ++c) {
    f.offsets[c] = uint32_t(f.pr.size());
    // Bottom-up walk keeps planar ranges sorted (heightfield geometry).
    float last = -1.0f;
    for (int r = E - 1; r >= 0; --r) {
      if (!pano.valid(r, c)) continue;
      const float p = float(pano.planar(r, c));
      if (p <= last) continue;  // face pixels collapse onto one range
      f.pr.push_back(p);
      f.dist.push_back(prod.distances.at(r, c));
      last = p;
    }
  }
  f.offsets[A] = uint32_t(f.pr.size());
  return f;
}

double ProbeField::credit(const Vec2& q, double dist_max) const {
  const double r = q.norm();
  const double az = std::atan2(q.y, q.x);
  const double daz = kTwoPi / cols;
  int c = int(std::floor((wrap_angle(az) + kPi) / daz));
  if (c < 0) c = 0;
  if (c >= cols) c = cols - 1;
  if (r > star[c] + 1e-9) return 0.0;  // outside certified space, no credit
  const uint32_t lo = offsets[c], hi = offsets[c + 1];
  if (lo == hi) return -dist_max;
  const float* begin = pr.data() + lo;
  const float* end = pr.data() + hi;
  const float* it = std::lower_bound(begin, end, float(r));
  size_t best = size_t(it - begin);
  if (best == size_t(hi - lo))
    --best;
  else if (it != begin && float(r) - begin[best - 1] < begin[best] - float(r))
    --best;
  return -double(dist[lo + best]);
}

bool LocalPlanner::select_local_goal(const ReachabilityScan& scan,
                                     const Vec2& goal_world, uint64_t rng_stream,
                                     Vec2* local_out) {
  const int A = scan.cols;
  double total_sq = 0.0;
  for (int c = 0; c < A; ++c) {
    const double s = scan.safe[c];
    if (s >= p_.min_star) total_sq += s * s;
  }
  if (total_sq <= 0.0) return false;

  const Vec2 goal_local = scan.pose.to_local(goal_world);
  Vec2 prev_local;
  double prev_norm = 0.0;
  if (have_prev_goal_) {
    prev_local = scan.pose.to_local(prev_goal_world_);
    prev_norm = prev_local.norm();
  }

  Rng rng(rng_stream);
  double best_cost = 1e300;
  Vec2 best{0, 0};
  bool found = false;
  for (int k = 0; k < p_.goal_samples; ++k) {
    // Column by squared-radius weight, then radius by sqrt: area-uniform.
    double pick = rng.uniform() * total_sq;
    int c = 0;
    for (; c < A; ++c) {
      const double s = scan.safe[c];
      if (s < p_.min_star) continue;
      pick -= s * s;
      if (pick <= 0.0) break;
    }
    if (c >= A) c = A - 1;
    const double s = scan.safe[c];
    if (s < p_.min_star) continue;
    const double az = scan.azimuth(c) + (rng.uniform() - 0.5) * scan.dazimuth();
    const double rr = 0.95 * s * std::sqrt(rng.uniform());
    const Vec2 x{rr * std::cos(az), rr * std::sin(az)};

    double cost = distance(x, goal_local);
    if (prev_norm > 1e-6)
      cost += p_.heading_weight * std::fabs(x.cross(prev_local)) / prev_norm;
    if (cost < best_cost) {
      best_cost = cost;
      best = x;
      found = true;
    }
  }
  if (!found) return false;

  prev_goal_world_ = scan.pose.to_world(best);
  have_prev_goal_ = true;
  if (local_out) *local_out = best;
  return true;
}

LocalPlanner::Command LocalPlanner::plan(const TerrainProducts& prod,
                                         const ProbeField& field,
                                         const Pose2& cur_pose,
                                         const Vec2& local_goal) {
  const Pose2& sp = prod.scan.pose;
  const Vec2 start = sp.to_local(cur_pose.position());
  const double start_yaw = wrap_angle(cur_pose.yaw - sp.yaw);

  const int n = p_.control_grid;
  const int steps = std::max(1, int(std::lround(p_.horizon_s / p_.dt)));
  const double g_norm = local_goal.norm();

  const double v_lo = std::clamp(prev_v_ - p_.control_window, 0.0, p_.v_max);
  const double v_hi = std::clamp(prev_v_ + p_.control_window, 0.0, p_.v_max);
  const double w_lo = std::clamp(prev_w_ - p_.control_window, -p_.w_max, p_.w_max);
  const double w_hi = std::clamp(prev_w_ + p_.control_window, -p_.w_max, p_.w_max);

  Command best;
  double best_cost = 1e300;
  double best_first_credit = -1e300;
  for (int iv = 0; iv < n; ++iv) {
    const double v = n == 1 ? v_lo : v_lo + (v_hi - v_lo) * iv / (n - 1);
    for (int iw = 0; iw < n; ++iw) {
      const double w = n == 1 ? w_lo : w_lo + (w_hi - w_lo) * iw / (n - 1);
      double x = start.x, y = start.y, yaw = start_yaw;
      double obstacle_cost = 0.0;
      double first_credit = 0.0;
      for (int k = 0; k < steps; ++k) {
        x += v * std::cos(yaw) * p_.dt;
        y += v * std::sin(yaw) * p_.dt;
        yaw += w * p_.dt;
        const Vec2 probe{x + p_.probe_ahead * std::cos(yaw),
                         y + p_.probe_ahead * std::sin(yaw)};
        const double cr = field.credit(probe, p_.dist_max);
        obstacle_cost += cr;
        if (k == 0) first_credit = -cr;
      }
      obstacle_cost /= steps;

      const Vec2 endpt{x, y};
      double goal_cost = distance(local_goal, endpt);
      if (g_norm > 1e-6)
        goal_cost += std::fabs(local_goal.cross(endpt)) / g_norm;

      const double cost = goal_cost + obstacle_cost;
      best_first_credit = std::max(best_first_credit, first_credit);
      if (cost < best_cost) {
        best_cost = cost;
        best.v = v;
        best.w = w;
      }
    }
  }

  // When even the best immediate step sits against an obstacle, report it:
  // the caller escalates to a replan instead of creeping forward.
  best.blocked = best_first_credit < p_.dist_max * 0.04;
  prev_v_ = best.v;
  prev_w_ = best.w;
  return best;
}

}  // namespace agnav
