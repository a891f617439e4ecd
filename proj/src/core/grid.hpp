#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace agnav {

/// Dense row-major raster. Cell (x, y) lives at index y * width + x.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height), cells_(static_cast<size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& at(int x, int y) {
    assert(in_bounds(x, y));
    return cells_[static_cast<size_t>(y) * width_ + x];
  }
  const T& at(int x, int y) const {
    assert(in_bounds(x, y));
    return cells_[static_cast<size_t>(y) * width_ + x];
  }

  T& operator[](size_t i) { return cells_[i]; }
  const T& operator[](size_t i) const { return cells_[i]; }

  T* data() { return cells_.data(); }
  const T* data() const { return cells_.data(); }

  void fill(T v) { cells_.assign(cells_.size(), v); }

  bool operator==(const Grid&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> cells_;
};

}  // namespace agnav
