#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "core/geometry.hpp"
#include "core/grid.hpp"

namespace agnav {

constexpr uint8_t kUnknownClass = 255;

struct ClassInfo {
  std::string name;
  std::array<uint8_t, 3> color{0, 0, 0};
};

/// Top-down semantic map: class ids, color, elevation, and a known mask.
/// Robots hold partially-known copies; the simulator holds a fully-known one.
struct SemanticOrthomap {
  double resolution = 0.5;  // meters per cell
  Vec2 origin;              // world position of cell (0,0)'s min corner
  std::vector<ClassInfo> palette;
  Grid<uint8_t> classes;                   // kUnknownClass where unknown
  Grid<std::array<uint8_t, 3>> color;
  Grid<float> elevation;
  Grid<uint8_t> known;                     // 0 or 1

  int width() const { return classes.width(); }
  int height() const { return classes.height(); }
  int num_classes() const { return static_cast<int>(palette.size()); }

  bool cell_of(const Vec2& w, int* cx, int* cy) const {
    const int x = static_cast<int>(std::floor((w.x - origin.x) / resolution));
    const int y = static_cast<int>(std::floor((w.y - origin.y) / resolution));
    if (!classes.in_bounds(x, y)) return false;
    *cx = x;
    *cy = y;
    return true;
  }

  Vec2 cell_center(int cx, int cy) const {
    return {origin.x + (cx + 0.5) * resolution, origin.y + (cy + 0.5) * resolution};
  }

  /// Class at a world point; kUnknownClass outside the map or where unrevealed.
  uint8_t class_at(const Vec2& w) const {
    int cx, cy;
    if (!cell_of(w, &cx, &cy)) return kUnknownClass;
    if (!known.at(cx, cy)) return kUnknownClass;
    return classes.at(cx, cy);
  }

  /// Blank all-unknown map sharing geometry and palette with a reference map.
  static SemanticOrthomap unknown_like(const SemanticOrthomap& ref);
};

/// Ground-truth world: fully-known semantic map plus the physical surface
/// height field rays and wheels interact with. The surface field may contain
/// obstacles (e.g. road barriers) that the semantic layers do not show.
struct WorldModel {
  SemanticOrthomap truth;
  Grid<float> surface;            // top surface height per cell, meters
  std::vector<Vec2> goal_clusters;  // ground-truth goal cluster centers
  std::vector<Pose2> starts;        // robot start poses, index 0 = base area

  int width() const { return truth.width(); }
  int height() const { return truth.height(); }

  double surface_at(const Vec2& w) const {
    int cx, cy;
    if (!truth.cell_of(w, &cx, &cy)) return 1e9;  // off-map is a wall
    return surface.at(cx, cy);
  }

  /// Throws std::runtime_error on inconsistent dimensions or class ids.
  void validate() const;
};

WorldModel load_world(const std::string& dir);
void save_world(const WorldModel& w, const std::string& dir);

}  // namespace agnav
