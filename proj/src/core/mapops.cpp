#include "core/mapops.hpp"

#include <algorithm>

namespace agnav {

Grid<float> distance_to_mask(const Grid<uint8_t>& mask, double resolution) {
  const int w = mask.width(), h = mask.height();
  Grid<int32_t> d(w, h, INT32_MAX / 2);
  for (size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) d[i] = 0;
  auto relax = [&](int x, int y, int nx, int ny, int32_t cost) {
    if (!d.in_bounds(nx, ny)) return;
    d.at(x, y) = std::min(d.at(x, y), d.at(nx, ny) + cost);
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      relax(x, y, x - 1, y, 3);
      relax(x, y, x, y - 1, 3);
      relax(x, y, x - 1, y - 1, 4);
      relax(x, y, x + 1, y - 1, 4);
    }
  }
  for (int y = h - 1; y >= 0; --y) {
    for (int x = w - 1; x >= 0; --x) {
      relax(x, y, x + 1, y, 3);
      relax(x, y, x, y + 1, 3);
      relax(x, y, x + 1, y + 1, 4);
      relax(x, y, x - 1, y + 1, 4);
    }
  }
  Grid<float> out(w, h, kFarDistance);
  for (size_t i = 0; i < out.size(); ++i)
    if (d[i] < INT32_MAX / 4) out[i] = float(d[i] / 3.0 * resolution);
  return out;
}

std::vector<Grid<float>> class_distance_maps(const SemanticOrthomap& map) {
  std::vector<Grid<float>> out;
  out.reserve(map.num_classes());
  Grid<uint8_t> mask(map.width(), map.height());
  for (int k = 0; k < map.num_classes(); ++k) {
    for (size_t i = 0; i < mask.size(); ++i)
      mask[i] = map.known[i] && map.classes[i] == k ? 1 : 0;
    out.push_back(distance_to_mask(mask, map.resolution));
  }
  return out;
}

namespace {

Grid<uint8_t> morph3(const Grid<uint8_t>& mask, int iters, bool grow) {
  Grid<uint8_t> cur = mask;
  Grid<uint8_t> next(mask.width(), mask.height());
  for (int it = 0; it < iters; ++it) {
    for (int y = 0; y < cur.height(); ++y) {
      for (int x = 0; x < cur.width(); ++x) {
        uint8_t v = grow ? 0 : 1;
        for (int oy = -1; oy <= 1 && v == (grow ? 0 : 1); ++oy) {
          for (int ox = -1; ox <= 1; ++ox) {
            // Off-map neighbors count as empty.
            const uint8_t n = cur.in_bounds(x + ox, y + oy) ? cur.at(x + ox, y + oy) : 0;
            if (grow && n) {
              v = 1;
              break;
            }
            if (!grow && !n) {
              v = 0;
              break;
            }
          }
        }
        next.at(x, y) = v;
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

}  // namespace

Grid<uint8_t> dilate3(const Grid<uint8_t>& mask, int iters) {
  return morph3(mask, iters, true);
}

Grid<uint8_t> erode3(const Grid<uint8_t>& mask, int iters) {
  return morph3(mask, iters, false);
}

std::vector<std::vector<uint32_t>> connected_components8(const Grid<uint8_t>& mask) {
  const int w = mask.width(), h = mask.height();
  std::vector<std::vector<uint32_t>> comps;
  std::vector<uint8_t> seen(mask.size(), 0);
  std::vector<uint32_t> stack;
  for (size_t start = 0; start < mask.size(); ++start) {
    if (!mask[start] || seen[start]) continue;
    comps.emplace_back();
    auto& comp = comps.back();
    stack.assign(1, uint32_t(start));
    seen[start] = 1;
    while (!stack.empty()) {
      const uint32_t i = stack.back();
      stack.pop_back();
      comp.push_back(i);
      const int x = int(i % w), y = int(i / w);
      for (int oy = -1; oy <= 1; ++oy) {
        for (int ox = -1; ox <= 1; ++ox) {
          const int nx = x + ox, ny = y + oy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const uint32_t ni = uint32_t(ny) * w + nx;
          if (mask[ni] && !seen[ni]) {
            seen[ni] = 1;
            stack.push_back(ni);
          }
        }
      }
    }
    std::sort(comp.begin(), comp.end());
  }
  return comps;
}

}  // namespace agnav
