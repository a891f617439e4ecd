#pragma once

// Reference implementations the fast code is checked against. Everything here
// favors obviousness over speed: plain Dijkstra, direct formula evaluation.

#include <cmath>
#include <queue>
#include <vector>

#include "core/rng.hpp"
#include "core/terrain.hpp"

namespace agnav::oracles {

/// Fully-valid flat-ground panorama: every row below the horizon, range
/// constant along each row. The shape real renders take over open ground.
inline DepthPanorama synth_flat_pano(int rows, int cols, double h_s,
                                     double elev_min_deg, double elev_max_deg) {
  DepthPanorama p;
  p.rows = rows;
  p.cols = cols;
  p.elev_min = deg_to_rad(elev_min_deg);
  p.elev_max = deg_to_rad(elev_max_deg);
  p.sensor_height = h_s;
  p.range.assign(size_t(rows) * cols, 0.0f);
  for (int r = 0; r < rows; ++r) {
    const double t = p.theta(r);
    const float rho = float(h_s / std::sin(-t));
    for (int c = 0; c < cols; ++c) p.at(r, c) = rho;
  }
  return p;
}

/// Flat ground plus a vertical slab at planar range wall_r spanning columns
/// [c0, c1]. Geometry written directly, no ray marching involved.
inline DepthPanorama synth_wall_pano(int rows, int cols, double h_s,
                                     double wall_r, double wall_h, int c0,
                                     int c1) {
  DepthPanorama p;
  p.rows = rows;
  p.cols = cols;
  p.elev_min = deg_to_rad(-45.0);
  p.elev_max = deg_to_rad(22.5);
  p.sensor_height = h_s;
  p.range.assign(size_t(rows) * cols, 0.0f);
  for (int r = 0; r < rows; ++r) {
    const double t = p.theta(r);
    for (int c = 0; c < cols; ++c) {
      const bool wall = c >= c0 && c <= c1;
      if (t < 0.0) {
        const double ring = h_s / std::tan(-t);
        if (wall && ring > wall_r)
          p.at(r, c) = float(wall_r / std::cos(t));
        else
          p.at(r, c) = float(h_s / std::sin(-t));
      } else if (wall && wall_r * std::tan(t) <= wall_h - h_s) {
        p.at(r, c) = float(wall_r / std::cos(t));
      }
    }
  }
  return p;
}

/// Min over obstacle pixels of the cheapest 4-adjacent panorama path cost:
/// vertical steps cost |delta rho|, horizontal steps cost the arc length at
/// the pixel being left. Saturates at dmax. Multi-source Dijkstra on the
/// reversed step graph, seeded at the obstacles.
inline std::vector<float> panorama_distance_oracle(const DepthPanorama& pano,
                                                   const std::vector<uint8_t>& obstacle,
                                                   double dmax) {
  const int E = pano.rows, A = pano.cols;
  const double daz = pano.dazimuth();
  const size_t n = size_t(E) * A;
  std::vector<double> dist(n, dmax);
  using Item = std::pair<double, size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (size_t i = 0; i < n; ++i) {
    if (obstacle[i]) {
      dist[i] = 0.0;
      heap.push({0.0, i});
    }
  }
  while (!heap.empty()) {
    const auto [d, i] = heap.top();
    heap.pop();
    if (d > dist[i] + 1e-12) continue;
    const int r = int(i) / A, c = int(i) % A;
    auto relax = [&](int rr, int cc, double step_cost) {
      const size_t j = size_t(rr) * A + cc;
      if (!(pano.range[j] > 0.0f)) return;
      const double nd = d + step_cost;
      if (nd < dist[j] - 1e-15 && nd < dmax) {
        dist[j] = nd;
        heap.push({nd, j});
      }
    };
    if (!(pano.range[i] > 0.0f)) continue;
    const double rho = pano.range[i];
    if (r > 0 && pano.range[i - A] > 0.0f)
      relax(r - 1, c, std::fabs(rho - pano.range[i - A]));
    if (r + 1 < E && pano.range[i + A] > 0.0f)
      relax(r + 1, c, std::fabs(rho - pano.range[i + A]));
    // Arc cost belongs to the pixel the forward path leaves, i.e. the
    // neighbor here (we search the reversed graph).
    const int cl = (c + A - 1) % A, cr = (c + 1) % A;
    relax(r, cl, daz * pano.range[size_t(r) * A + cl]);
    relax(r, cr, daz * pano.range[size_t(r) * A + cr]);
  }
  std::vector<float> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = float(std::min(dist[i], dmax));
  return out;
}

struct DistanceInstance {
  DepthPanorama pano;
  ObstaclePanorama obs;
};

/// Random flat-ground scene with a random obstacle mask over it.
inline DistanceInstance random_distance_instance(uint64_t seed, int rows, int cols) {
  Rng rng(derive_stream(seed, 0x0dace));
  const double h_s = rng.uniform(0.4, 1.2);
  const double lo = rng.uniform(-60.0, -25.0);
  const double hi = rng.uniform(-12.0, -4.0);
  DistanceInstance inst;
  inst.pano = synth_flat_pano(rows, cols, h_s, lo, hi);
  inst.obs.rows = rows;
  inst.obs.cols = cols;
  inst.obs.obstacle.assign(size_t(rows) * cols, 0);
  inst.obs.valid.assign(size_t(rows) * cols, 1);
  const int count = 1 + rng.uniform_int(rows * cols / 24 + 1);
  for (int k = 0; k < count; ++k)
    inst.obs.obstacle[size_t(rng.uniform_int(rows)) * cols + rng.uniform_int(cols)] = 1;
  return inst;
}

}  // namespace agnav::oracles
