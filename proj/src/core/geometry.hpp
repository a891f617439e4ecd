#pragma once

#include <cmath>

namespace agnav {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

inline double deg_to_rad(double d) { return d * kPi / 180.0; }

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  Vec2 position() const { return {x, y}; }

  /// Expresses a world-frame point in this pose's frame.
  Vec2 to_local(const Vec2& w) const {
    const double dx = w.x - x, dy = w.y - y;
    const double c = std::cos(yaw), s = std::sin(yaw);
    return {c * dx + s * dy, -s * dx + c * dy};
  }

  /// Expresses a local-frame point in world coordinates.
  Vec2 to_world(const Vec2& l) const {
    const double c = std::cos(yaw), s = std::sin(yaw);
    return {x + c * l.x - s * l.y, y + s * l.x + c * l.y};
  }
};

/// Distance from point p to segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  if (len_sq <= 1e-12) return distance(p, a);
  double t = (p - a).dot(ab) / len_sq;
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return distance(p, a + ab * t);
}

/// Proper segment intersection with parameter output; collinear overlap not counted.
/// Returns true and sets t in [0,1] along [p0,p1] when the segments cross.
inline bool segments_intersect(const Vec2& p0, const Vec2& p1, const Vec2& q0,
                               const Vec2& q1, double* t_out) {
  const Vec2 r = p1 - p0;
  const Vec2 s = q1 - q0;
  const double denom = r.cross(s);
  if (std::fabs(denom) < 1e-12) return false;
  const Vec2 qp = q0 - p0;
  const double t = qp.cross(s) / denom;
  const double u = qp.cross(r) / denom;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return false;
  if (t_out) *t_out = t;
  return true;
}

}  // namespace agnav
