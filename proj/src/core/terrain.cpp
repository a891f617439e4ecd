#include "core/terrain.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace agnav {
namespace {

constexpr double kHuge = 1e30;

double safe_cot(double theta) {
  const double t = std::tan(theta);
  if (std::fabs(t) < 1e-12) return t >= 0 ? 1e12 : -1e12;
  return 1.0 / t;
}

}  // namespace

DepthPanorama fill_holes(const DepthPanorama& pano, const TerrainParams& tp) {
  DepthPanorama out = pano;
  const int A = pano.cols;
  const double daz = pano.dazimuth();
  for (int r = 0; r < pano.rows; ++r) {
    int c = 0;
    while (c < A) {
      if (out.at(r, c) > 0.0f) {
        ++c;
        continue;
      }
      const int run_start = c;
      while (c < A && out.at(r, c) <= 0.0f) ++c;
      const int run_end = c;  // one past
      if (run_start == 0 || run_end == A) continue;  // not bounded, keep empty
      const float left = out.at(r, run_start - 1);
      const float right = out.at(r, run_end);
      const double bound = std::max(left, right);
      const double px_per_hole = tp.hole_fill_m / (daz * bound);
      const int len = run_end - run_start;
      if (double(len) >= px_per_hole) continue;
      for (int k = 0; k < len; ++k) {
        const double t = double(k + 1) / double(len + 1);
        out.at(r, run_start + k) = float(left + (right - left) * t);
      }
    }
  }
  return out;
}

ObstaclePanorama compute_gradients(const DepthPanorama& pano, const TerrainParams& tp) {
  const int E = pano.rows, A = pano.cols;
  ObstaclePanorama out;
  out.rows = E;
  out.cols = A;
  out.obstacle.assign(size_t(E) * A, 0);
  out.valid.assign(size_t(E) * A, 0);
  out.grad_az.assign(size_t(E) * A, 0.0f);
  out.grad_el.assign(size_t(E) * A, 0.0f);
  out.grad_mag.assign(size_t(E) * A, 0.0f);

  const double daz = pano.dazimuth();
  const double h_s = pano.sensor_height;

  // Elevation window per row: smallest upward offset whose flat-ground rings
  // sit at least grad_window_m apart. Rows that cannot satisfy it stay 0.
  const int cap = std::max(1, E / 4);
  std::vector<int> w_e(E, 0);
  std::vector<double> cot(E), sin_t(E), cos_t(E);
  for (int r = 0; r < E; ++r) {
    cot[r] = safe_cot(pano.theta(r));
    sin_t[r] = std::sin(pano.theta(r));
    cos_t[r] = std::cos(pano.theta(r));
  }
  for (int r = 0; r < E; ++r) {
    for (int d = 1; d <= cap && r - d >= 0; ++d) {
      if (h_s * std::fabs(cot[r] - cot[r - d]) >= tp.grad_window_m) {
        w_e[r] = d;
        break;
      }
    }
  }

  std::vector<double> z(size_t(E) * A), pr(size_t(E) * A);
  for (int r = 0; r < E; ++r) {
    for (int c = 0; c < A; ++c) {
      const double rho = pano.at(r, c);
      z[size_t(r) * A + c] = rho * sin_t[r];
      pr[size_t(r) * A + c] = rho * cos_t[r];
    }
  }

  for (int r = 0; r < E; ++r) {
    const double eta_z = tp.noise_sigma * std::fabs(sin_t[r]);
    const double eta_xy = tp.noise_sigma * std::fabs(cos_t[r]);
    for (int c = 0; c < A; ++c) {
      const size_t i = size_t(r) * A + c;
      const double rho = pano.at(r, c);
      if (rho <= 0.0) continue;

      // Azimuthal component over a window that spans grad_window_m of arc.
      const double s_xy = daz * pr[i];
      const double s = daz * rho;
      const int w_a =
          int(std::floor(std::min(tp.grad_window_m / s_xy, double(tp.max_az_window_px)) / 2.0 + 1.0));
      const int cl = ((c - w_a) % A + A) % A;
      const int cr = (c + w_a) % A;
      const size_t il = size_t(r) * A + cl, ir = size_t(r) * A + cr;
      if (!(pano.range[il] > 0.0f) || !(pano.range[ir] > 0.0f)) continue;
      const double g_a =
          std::max(std::fabs(z[il] - z[ir]) - eta_z, 0.0) / (s * (w_a * 2.0 + 1.0));

      if (w_e[r] == 0) continue;
      const size_t iu = size_t(r - w_e[r]) * A + c;
      if (!(pano.range[iu] > 0.0f)) continue;
      const double g_e = std::max(std::fabs(z[i] - z[iu]) - eta_z, 0.0) /
                         (std::fabs(pr[i] - pr[iu]) + eta_xy);

      const double mag = std::hypot(g_a, g_e);
      out.valid[i] = 1;
      out.grad_az[i] = float(g_a);
      out.grad_el[i] = float(g_e);
      out.grad_mag[i] = float(mag);
      out.obstacle[i] = mag > tp.grad_thresh ? 1 : 0;
    }
  }
  return out;
}

DistancePanorama distance_transform(const DepthPanorama& pano,
                                    const ObstaclePanorama& obs,
                                    const TerrainParams& tp) {
  const int E = pano.rows, A = pano.cols;
  assert(obs.rows == E && obs.cols == A);
  const double daz = pano.dazimuth();
  const float dmax = float(tp.dist_max_m);

  DistancePanorama out;
  out.rows = E;
  out.cols = A;
  out.dist.assign(size_t(E) * A, dmax);
  std::vector<float> d_az(size_t(E) * A, dmax);

  // Column pass, far rows first: radial distance to the nearest obstacle
  // return seen so far coming down the column.
  for (int c = 0; c < A; ++c) {
    double d_obs = kHuge;
    for (int r = 0; r < E; ++r) {
      const size_t i = size_t(r) * A + c;
      const double rho = pano.range[i];
      if (obs.obstacle[i]) {
        d_az[i] = 0.0f;
        d_obs = std::min(double(rho), d_obs);
      } else if (rho > 0.0) {
        d_az[i] = float(std::min(std::fabs(rho - d_obs), double(d_az[i])));
      }
    }
  }

  // Row sweeps both ways, growing distance by the arc length at the anchor
  // pixel's range and re-anchoring wherever the accumulated bound stops helping.
  auto sweep = [&](int r, int c_begin, int c_end, int step) {
    int a_last = c_begin;
    for (int c = c_begin + step; c != c_end; c += step) {
      const size_t i = size_t(r) * A + c;
      const size_t i_last = size_t(r) * A + a_last;
      const double s_last = daz * pano.range[i_last];
      const double d_obs = d_az[i_last] + std::abs(c - a_last) * s_last;
      if (d_obs > d_az[i]) {
        a_last = c;
        out.dist[i] = float(std::min(double(d_az[i]), double(out.dist[i])));
      } else {
        out.dist[i] = float(std::min(d_obs, double(out.dist[i])));
      }
    }
  };
  for (int r = 0; r < E; ++r) {
    const size_t i0 = size_t(r) * A;
    out.dist[i0] = std::min(out.dist[i0], d_az[i0]);
    const size_t iN = size_t(r) * A + (A - 1);
    out.dist[iN] = std::min(out.dist[iN], d_az[iN]);
    sweep(r, 0, A, 1);
    sweep(r, A - 1, -1, -1);
  }
  return out;
}

ReachabilityScan reachability_scan(const DepthPanorama& pano,
                                   const DistancePanorama& dist,
                                   const TerrainParams& tp) {
  const int E = pano.rows, A = pano.cols;
  ReachabilityScan scan;
  scan.cols = A;
  scan.pose = pano.sensor_pose;
  scan.safe.assign(A, 0.0f);
  scan.obstacle.assign(A, 0);

  for (int c = 0; c < A; ++c) {
    double r_last = 0.0;
    bool have_prev = false;
    for (int r = E - 1; r >= 0; --r) {
      const float rho = pano.at(r, c);
      if (rho <= 0.0f) continue;
      const double pr = pano.planar(r, c);
      if (have_prev && pr - r_last > tp.row_gap_m) break;  // too sparse to certify
      if (dist.at(r, c) < tp.inflation_m) {
        r_last = pr;
        scan.obstacle[c] = 1;
        break;
      }
      r_last = std::max(r_last, pr);
      have_prev = true;
    }
    scan.safe[c] = float(r_last);
  }
  return scan;
}

TerrainProducts analyze_terrain(const DepthPanorama& pano, const TerrainParams& tp) {
  TerrainProducts out;
  out.filled = fill_holes(pano, tp);
  out.obstacles = compute_gradients(out.filled, tp);
  out.distances = distance_transform(out.filled, out.obstacles, tp);
  out.scan = reachability_scan(out.filled, out.distances, tp);
  return out;
}

double star_radius_at(const ReachabilityScan& scan, double az) {
  const int A = scan.cols;
  const double daz = scan.dazimuth();
  double u = (wrap_angle(az) + kPi) / daz - 0.5;
  if (u < 0) u += A;
  const int c0 = int(std::floor(u)) % A;
  const int c1 = (c0 + 1) % A;
  const double t = u - std::floor(u);
  return scan.safe[c0] * (1.0 - t) + scan.safe[c1] * t;
}

bool point_in_star(const ReachabilityScan& scan, const Vec2& local) {
  const double r = local.norm();
  if (r < 1e-9) return true;
  return r <= star_radius_at(scan, std::atan2(local.y, local.x)) + 1e-9;
}

int count_star_crossings(const ReachabilityScan& scan, const Vec2& a,
                         const Vec2& b, double* first_crossing_az) {
  const int A = scan.cols;
  auto vertex = [&](int c) -> Vec2 {
    const double az = scan.azimuth(c);
    return {scan.safe[c] * std::cos(az), scan.safe[c] * std::sin(az)};
  };

  // A crossing's direction lies in the cone spanned by the endpoint
  // directions, so only boundary segments in that angular span can cross.
  int c_lo = 0, c_count = A;
  const double ra = a.norm(), rb = b.norm();
  if (ra > 1e-6 && rb > 1e-6 && point_segment_distance({0, 0}, a, b) > 1e-6) {
    const double az_a = std::atan2(a.y, a.x);
    const double az_b = std::atan2(b.y, b.x);
    double span = wrap_angle(az_b - az_a);
    double start = az_a;
    if (span < 0) {
      start = az_b;
      span = -span;
    }
    if (span < kPi - 1e-6) {
      const int margin = 2;
      c_lo = scan.column_of(start) - margin;
      c_count = int(std::ceil(span / scan.dazimuth())) + 2 * margin + 1;
      if (c_count > A) c_count = A;
    }
  }

  int count = 0;
  double best_t = 2.0, best_az = 0.0;
  for (int k = 0; k < c_count; ++k) {
    const int c = ((c_lo + k) % A + A) % A;
    double t;
    if (segments_intersect(a, b, vertex(c), vertex((c + 1) % A), &t)) {
      ++count;
      if (t < best_t) {
        best_t = t;
        const Vec2 x = a + (b - a) * t;
        best_az = std::atan2(x.y, x.x);
      }
    }
  }
  if (count > 0 && first_crossing_az) *first_crossing_az = best_az;
  return count;
}

std::vector<uint8_t> serialize_scan(const ReachabilityScan& scan) {
  std::vector<uint8_t> out;
  auto push = [&](const void* p, size_t n) {
    const auto* b = static_cast<const uint8_t*>(p);
    out.insert(out.end(), b, b + n);
  };
  const uint32_t cols = uint32_t(scan.cols);
  const int32_t origin = scan.origin_robot;
  push(&cols, 4);
  push(&origin, 4);
  push(&scan.sequence, 4);
  push(&scan.pose.x, 8);
  push(&scan.pose.y, 8);
  push(&scan.pose.yaw, 8);
  push(scan.safe.data(), scan.safe.size() * 4);
  push(scan.obstacle.data(), scan.obstacle.size());
  return out;
}

ReachabilityScan parse_scan(const std::vector<uint8_t>& bytes) {
  ReachabilityScan scan;
  size_t off = 0;
  auto pull = [&](void* p, size_t n) {
    if (off + n > bytes.size()) throw std::runtime_error("truncated scan payload");
    std::memcpy(p, bytes.data() + off, n);
    off += n;
  };
  uint32_t cols = 0;
  int32_t origin = 0;
  pull(&cols, 4);
  pull(&origin, 4);
  pull(&scan.sequence, 4);
  pull(&scan.pose.x, 8);
  pull(&scan.pose.y, 8);
  pull(&scan.pose.yaw, 8);
  if (cols == 0 || cols > 1u << 16)
    throw std::runtime_error("scan payload has implausible column count");
  scan.cols = int(cols);
  scan.safe.resize(cols);
  scan.obstacle.resize(cols);
  pull(scan.safe.data(), size_t(cols) * 4);
  pull(scan.obstacle.data(), cols);
  scan.origin_robot = origin;
  return scan;
}

}  // namespace agnav
