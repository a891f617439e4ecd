#pragma once

// Hand-built worlds and maps shared by the graph, learner and coordination
// tests.

#include <array>
#include <cstdint>

#include "core/world.hpp"
#include "core/world_gen.hpp"

namespace agnav::fixtures {

/// Fully known map of the given size, every cell one class.
inline SemanticOrthomap make_map(int w, int h, uint8_t cls = kRoad,
                                 double res = 0.5) {
  SemanticOrthomap m;
  m.resolution = res;
  m.origin = {0.0, 0.0};
  m.palette = default_palette();
  m.classes = Grid<uint8_t>(w, h, cls);
  m.color = Grid<std::array<uint8_t, 3>>(w, h, m.palette[cls].color);
  m.elevation = Grid<float>(w, h, 0.0f);
  m.known = Grid<uint8_t>(w, h, 1);
  return m;
}

/// Paints a half-open cell rectangle [x0,x1) x [y0,y1) with a class.
inline void paint(SemanticOrthomap& m, int x0, int y0, int x1, int y1, uint8_t cls) {
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (!m.classes.in_bounds(x, y)) continue;
      m.classes.at(x, y) = cls;
      m.color.at(x, y) = m.palette[cls].color;
    }
  }
}

inline void hide(SemanticOrthomap& m, int x0, int y0, int x1, int y1) {
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x)
      if (m.known.in_bounds(x, y)) m.known.at(x, y) = 0;
}

}  // namespace agnav::fixtures
