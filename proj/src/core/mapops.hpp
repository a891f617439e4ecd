#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "core/world.hpp"

namespace agnav {

/// Chamfer 3-4 distance (meters) from every cell to the nearest set cell.
/// Cells with no set cell anywhere stay at kFarDistance.
constexpr float kFarDistance = 1e9f;
Grid<float> distance_to_mask(const Grid<uint8_t>& mask, double resolution);

/// distance_to_mask per palette class, measured over known cells only.
std::vector<Grid<float>> class_distance_maps(const SemanticOrthomap& map);

/// 3x3 box dilation / erosion, iterated.
Grid<uint8_t> dilate3(const Grid<uint8_t>& mask, int iters);
Grid<uint8_t> erode3(const Grid<uint8_t>& mask, int iters);

/// 8-connected components of nonzero cells, as lists of linear indices in
/// ascending order. Component order follows the smallest contained index.
std::vector<std::vector<uint32_t>> connected_components8(const Grid<uint8_t>& mask);

/// Walks the supercover of segment a-b in map cells, calling visit(cx, cy) on
/// every cell touched. Stops early (returning false) when visit does.
template <typename Visit>
bool walk_cells(const SemanticOrthomap& map, const Vec2& a, const Vec2& b,
                Visit&& visit) {
  const double res = map.resolution;
  double ax = (a.x - map.origin.x) / res, ay = (a.y - map.origin.y) / res;
  double bx = (b.x - map.origin.x) / res, by = (b.y - map.origin.y) / res;
  int cx = int(std::floor(ax)), cy = int(std::floor(ay));
  const int ex = int(std::floor(bx)), ey = int(std::floor(by));
  const int sx = bx > ax ? 1 : -1, sy = by > ay ? 1 : -1;
  const double dx = std::fabs(bx - ax), dy = std::fabs(by - ay);
  // Parametric distance to the next vertical / horizontal cell boundary.
  double tx = dx > 1e-12 ? (sx > 0 ? (cx + 1 - ax) : (ax - cx)) / dx : 2.0;
  double ty = dy > 1e-12 ? (sy > 0 ? (cy + 1 - ay) : (ay - cy)) / dy : 2.0;
  const double tx_step = dx > 1e-12 ? 1.0 / dx : 0.0;
  const double ty_step = dy > 1e-12 ? 1.0 / dy : 0.0;
  for (;;) {
    if (!visit(cx, cy)) return false;
    if (cx == ex && cy == ey) return true;
    if (tx < ty) {
      tx += tx_step;
      cx += sx;
    } else {
      ty += ty_step;
      cy += sy;
    }
    if (tx > 1.0 + 1e-9 && ty > 1.0 + 1e-9 && (cx != ex || cy != ey)) {
      // Numeric drift past the endpoint cell; land on it directly.
      cx = ex;
      cy = ey;
    }
  }
}

}  // namespace agnav
