#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "core/mapops.hpp"
#include "core/rng.hpp"
#include "core/terrain.hpp"
#include "core/world.hpp"

namespace agnav {

struct LearnerParams {
  int hidden = 10;
  double lr = 0.01;
  double rms_decay = 0.99;
  double rms_eps = 1e-8;
  double l2 = 0.01;          // weights only, not biases
  int epochs = 10;
  size_t capacity = 2500;    // reservoir of labeled cells
  double dist_feature_cap = 50.0;
};

/// Per-cell traversability model: labeled map cells harvested from scans,
/// a small MLP over color / class-distance / elevation features, and dense
/// prediction back over the known map.
class TerrainLearner {
 public:
  TerrainLearner(const LearnerParams& p, int num_classes, uint64_t stream);

  struct LabeledCell {
    uint32_t cell;
    uint8_t trav;
  };

  /// Records one labeled cell. Relabeling an already-held cell overwrites it;
  /// past the capacity new cells displace reservoir picks.
  void add_label(uint32_t cell, bool trav);

  /// Harvests labels from one scan: the certified star interior is
  /// traversable, the first cell past each obstacle stop is not. Unknown
  /// cells are skipped; within a scan the negative label wins; across scans
  /// the latest label wins. Returns labels absorbed.
  int add_scan_labels(const ReachabilityScan& scan, const SemanticOrthomap& map);

  /// One training round over the retained cells. Feature normalization is
  /// re-frozen at entry. Returns mean weighted loss of the final epoch, or a
  /// negative value when there is nothing to train on.
  double train_step(const SemanticOrthomap& map);

  /// P(traversable) per cell; negative marks unknown cells or an untrained
  /// model.
  Grid<float> predict_map(const SemanticOrthomap& map) const;

  size_t sample_count() const { return samples_.size(); }
  const std::vector<LabeledCell>& samples() const { return samples_; }
  bool trained() const { return trained_; }
  int feature_dim() const { return dim_; }

 private:
  std::vector<double> featurize(const SemanticOrthomap& map,
                                const std::vector<Grid<float>>& dists,
                                uint32_t cell) const;
  void forward(const std::vector<double>& x, std::vector<double>* hidden,
               double out[2]) const;

  LearnerParams p_;
  int dim_;
  Rng rng_;

  std::vector<LabeledCell> samples_;
  std::unordered_map<uint32_t, uint32_t> index_;  // cell -> samples_ slot
  uint64_t offered_ = 0;                          // reservoir stream length

  // Row-major weights; RMSProp second-moment accumulators alongside.
  std::vector<double> w1_, b1_, w2_, b2_;
  std::vector<double> s_w1_, s_b1_, s_w2_, s_b2_;
  std::vector<double> feat_min_, feat_max_;
  bool trained_ = false;
};

}  // namespace agnav
