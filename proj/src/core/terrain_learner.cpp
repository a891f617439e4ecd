#include "core/terrain_learner.hpp"

#include <algorithm>
#include <cmath>

namespace agnav {

TerrainLearner::TerrainLearner(const LearnerParams& p, int num_classes, uint64_t stream)
    : p_(p), dim_(3 + num_classes + 1), rng_(stream) {
  const int h = p_.hidden;
  auto init = [&](std::vector<double>& w, std::vector<double>& s, int rows, int cols) {
    w.resize(size_t(rows) * cols);
    s.assign(w.size(), 0.0);
    const double bound = 1.0 / std::sqrt(double(cols));
    for (double& v : w) v = rng_.uniform(-bound, bound);
  };
  init(w1_, s_w1_, h, dim_);
  init(w2_, s_w2_, 2, h);
  b1_.assign(h, 0.0);
  s_b1_.assign(h, 0.0);
  b2_.assign(2, 0.0);
  s_b2_.assign(2, 0.0);
  feat_min_.assign(dim_, 0.0);
  feat_max_.assign(dim_, 1.0);
}

int TerrainLearner::add_scan_labels(const ReachabilityScan& scan,
                                    const SemanticOrthomap& map) {
  // Scratch labels for this scan only; the obstacle pass overwrites the
  // star pass, so one scan never argues with itself.
  std::unordered_map<uint32_t, uint8_t> scratch;
  const double reach = double(scan.max_safe());
  int pcx, pcy;
  if (!map.cell_of(scan.pose.position(), &pcx, &pcy)) return 0;
  const int rc = int(std::ceil(reach / map.resolution)) + 1;
  for (int cy = std::max(0, pcy - rc); cy <= std::min(map.height() - 1, pcy + rc); ++cy) {
    for (int cx = std::max(0, pcx - rc); cx <= std::min(map.width() - 1, pcx + rc); ++cx) {
      if (!map.known.at(cx, cy)) continue;
      const Vec2 local = scan.pose.to_local(map.cell_center(cx, cy));
      if (point_in_star(scan, local))
        scratch[uint32_t(cy) * map.width() + cx] = 1;
    }
  }
  for (int c = 0; c < scan.cols; ++c) {
    if (!scan.obstacle[c]) continue;
    const double az = scan.azimuth(c);
    const double r = double(scan.safe[c]) + 0.5 * map.resolution;
    const Vec2 p = scan.pose.to_world({r * std::cos(az), r * std::sin(az)});
    int cx, cy;
    if (!map.cell_of(p, &cx, &cy) || !map.known.at(cx, cy)) continue;
    scratch[uint32_t(cy) * map.width() + cx] = 0;
  }

  int absorbed = 0;
  std::vector<std::pair<uint32_t, uint8_t>> ordered(scratch.begin(), scratch.end());
  std::sort(ordered.begin(), ordered.end());
  for (auto [cell, label] : ordered) {
    ++absorbed;
    add_label(cell, label != 0);
  }
  return absorbed;
}

void TerrainLearner::add_label(uint32_t cell, bool trav) {
  const uint8_t label = trav ? 1 : 0;
  auto it = index_.find(cell);
  if (it != index_.end()) {
    samples_[it->second].trav = label;
    return;
  }
  if (samples_.size() < p_.capacity) {
    index_[cell] = uint32_t(samples_.size());
    samples_.push_back({cell, label});
    ++offered_;
    return;
  }
  // Reservoir replacement keeps a uniform subsample of everything offered.
  ++offered_;
  const uint64_t j = rng_.next_u64() % offered_;
  if (j < p_.capacity) {
    index_.erase(samples_[size_t(j)].cell);
    index_[cell] = uint32_t(j);
    samples_[size_t(j)] = {cell, label};
  }
}

std::vector<double> TerrainLearner::featurize(const SemanticOrthomap& map,
                                              const std::vector<Grid<float>>& dists,
                                              uint32_t cell) const {
  std::vector<double> x(dim_);
  const auto& rgb = map.color[cell];
  x[0] = rgb[0];
  x[1] = rgb[1];
  x[2] = rgb[2];
  for (int k = 0; k < map.num_classes(); ++k)
    x[3 + k] = std::min(double(dists[k][cell]), p_.dist_feature_cap);
  x[3 + map.num_classes()] = map.elevation[cell];
  return x;
}

void TerrainLearner::forward(const std::vector<double>& x, std::vector<double>* hidden,
                             double out[2]) const {
  const int h = p_.hidden;
  hidden->resize(h);
  for (int i = 0; i < h; ++i) {
    double a = b1_[i];
    for (int j = 0; j < dim_; ++j) a += w1_[size_t(i) * dim_ + j] * x[j];
    (*hidden)[i] = 1.0 / (1.0 + std::exp(-a));
  }
  double z[2];
  for (int o = 0; o < 2; ++o) {
    z[o] = b2_[o];
    for (int i = 0; i < h; ++i) z[o] += w2_[size_t(o) * h + i] * (*hidden)[i];
  }
  const double m = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - m), e1 = std::exp(z[1] - m);
  out[0] = e0 / (e0 + e1);
  out[1] = e1 / (e0 + e1);
}

double TerrainLearner::train_step(const SemanticOrthomap& map) {
  if (samples_.empty()) return -1.0;
  const std::vector<Grid<float>> dists = class_distance_maps(map);
  const size_t n = samples_.size();

  std::vector<std::vector<double>> feats(n);
  size_t pos = 0;
  for (size_t i = 0; i < n; ++i) {
    feats[i] = featurize(map, dists, samples_[i].cell);
    pos += samples_[i].trav;
  }
  // Freeze normalization over the current set.
  feat_min_.assign(dim_, 1e18);
  feat_max_.assign(dim_, -1e18);
  for (const auto& f : feats) {
    for (int d = 0; d < dim_; ++d) {
      feat_min_[d] = std::min(feat_min_[d], f[d]);
      feat_max_[d] = std::max(feat_max_[d], f[d]);
    }
  }
  for (auto& f : feats)
    for (int d = 0; d < dim_; ++d)
      f[d] = (f[d] - feat_min_[d]) / std::max(feat_max_[d] - feat_min_[d], 1e-9);

  // Inverse-frequency weights keep the rare label relevant.
  const size_t neg = n - pos;
  const double w_pos = pos ? double(n) / (2.0 * double(pos)) : 0.0;
  const double w_neg = neg ? double(n) / (2.0 * double(neg)) : 0.0;

  const int h = p_.hidden;
  std::vector<double> hid(h);
  std::vector<uint32_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = uint32_t(i);

  auto rms = [&](std::vector<double>& w, std::vector<double>& s, size_t k, double g) {
    s[k] = p_.rms_decay * s[k] + (1.0 - p_.rms_decay) * g * g;
    w[k] -= p_.lr * g / (std::sqrt(s[k]) + p_.rms_eps);
  };

  double epoch_loss = 0.0;
  for (int ep = 0; ep < p_.epochs; ++ep) {
    for (size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng_.uniform_int(uint32_t(i))]);
    epoch_loss = 0.0;
    for (uint32_t i : idx) {
      const auto& x = feats[i];
      const int y = samples_[i].trav;  // output 1 is "traversable"
      const double wc = y ? w_pos : w_neg;
      double out[2];
      forward(x, &hid, out);
      epoch_loss += wc * -std::log(std::max(out[y], 1e-12));

      double dz[2] = {wc * (out[0] - (y == 0 ? 1.0 : 0.0)),
                      wc * (out[1] - (y == 1 ? 1.0 : 0.0))};
      std::vector<double> dh(h, 0.0);
      for (int o = 0; o < 2; ++o) {
        for (int j = 0; j < h; ++j) {
          const size_t k = size_t(o) * h + j;
          dh[j] += w2_[k] * dz[o];
          rms(w2_, s_w2_, k, dz[o] * hid[j] + p_.l2 * w2_[k]);
        }
        rms(b2_, s_b2_, size_t(o), dz[o]);
      }
      for (int j = 0; j < h; ++j) {
        const double g = dh[j] * hid[j] * (1.0 - hid[j]);
        for (int d = 0; d < dim_; ++d) {
          const size_t k = size_t(j) * dim_ + d;
          rms(w1_, s_w1_, k, g * x[d] + p_.l2 * w1_[k]);
        }
        rms(b1_, s_b1_, size_t(j), g);
      }
    }
  }
  trained_ = true;
  return epoch_loss / double(n);
}

Grid<float> TerrainLearner::predict_map(const SemanticOrthomap& map) const {
  Grid<float> out(map.width(), map.height(), -1.0f);
  if (!trained_) return out;
  const std::vector<Grid<float>> dists = class_distance_maps(map);
  std::vector<double> hid(p_.hidden);
  for (uint32_t cell = 0; cell < out.size(); ++cell) {
    if (!map.known[cell]) continue;
    std::vector<double> x = featurize(map, dists, cell);
    for (int d = 0; d < dim_; ++d)
      x[d] = (x[d] - feat_min_[d]) / std::max(feat_max_[d] - feat_min_[d], 1e-9);
    double o[2];
    forward(x, &hid, o);
    out[cell] = float(o[1]);
  }
  return out;
}

}  // namespace agnav
