#pragma once

#include <cstdint>
#include <vector>

#include "core/mapops.hpp"
#include "core/terrain.hpp"
#include "core/world.hpp"

namespace agnav {

struct TravGraphParams {
  double node_radius = 8.0;
  double connect_radius = 16.0;
  int promote_trav = 2;       // observations to call an edge traversable
  int lock_not = 3;           // direct failures to lock a fresh edge
  int lock_not_flip = 5;      // direct failures to lock a promoted edge
  int edge_samples = 10;
  int judge_margin_cols = 3;  // scan columns checked around a crossing
  double snap_radius = 15.0;
  int rebuild_known_delta = 500;  // newly known cells before a regrow
  double trav_prob = 0.999;       // per-sample belief for observed edges
  double not_trav_prob = 0.01;
};

/// Which map classes a robot may drive on (best first) and which block both
/// driving and sight.
struct TravClassConfig {
  std::vector<uint8_t> ordering;
  std::vector<uint8_t> obstacles;
};

enum class EdgeObs : uint8_t { kNone, kTrav, kNotTrav };
enum class EdgeJudgement : uint8_t { kTrav, kNotTrav, kUnknown };

struct GraphNode {
  Vec2 pos;
  uint8_t cls = 0;
};

struct GraphEdge {
  int32_t a = 0;
  int32_t b = 0;
  double model_cost = 0.0;
  EdgeObs obs = EdgeObs::kNone;
  bool locked = false;
  uint8_t trav_count = 0;
  uint8_t self_not_count = 0;
  uint8_t remote_not_count = 0;
};

struct GraphPlan {
  bool found = false;
  bool off_graph = false;  // start or goal had no node within snap range
  std::vector<int32_t> nodes;
  double cost = 0.0;
};

/// Sparse roadmap grown over the known map: nodes cover the drivable classes
/// with line-of-sight discs, edges connect mutually visible nodes. Scan
/// judgements accumulate on edges and can permanently lock them out.
class TravGraph {
 public:
  TravGraph(const TravGraphParams& p, const TravClassConfig& cls) : p_(p), cls_(cls) {}

  /// Extends coverage over newly known map. Keeps every existing node, edge
  /// and observation. Returns true when the graph changed.
  bool rebuild(const SemanticOrthomap& map);
  bool wants_rebuild(const SemanticOrthomap& map) const;

  /// Model cost from a learned per-cell traversability raster (negative
  /// entries mean unknown).
  void refresh_costs_learned(const Grid<float>& trav_prob);
  /// Model cost from the class ranking alone.
  void refresh_costs_class_rank(const SemanticOrthomap& map);

  static EdgeJudgement judge_edge(const ReachabilityScan& scan, const Vec2& a,
                                  const Vec2& b, int margin_cols);

  struct ScanStats {
    int trav = 0;
    int not_trav = 0;
    int locked = 0;  // edges newly locked by this scan
  };
  ScanStats integrate_scan(const ReachabilityScan& scan, bool remote);

  double effective_edge_cost(const GraphEdge& e) const;
  GraphPlan plan(const Vec2& start, const Vec2& goal) const;
  int32_t snap(const Vec2& point) const;

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  std::vector<GraphEdge>& edges() { return edges_; }
  const Grid<int32_t>& coverage() const { return cover_; }
  const TravGraphParams& params() const { return p_; }

 private:
  bool cell_open(const SemanticOrthomap& map, int cx, int cy) const;
  bool line_open(const SemanticOrthomap& map, const Vec2& a, const Vec2& b) const;
  void stamp_disc(const SemanticOrthomap& map, int32_t id);
  void connect_new_edges(const SemanticOrthomap& map);

  TravGraphParams p_;
  TravClassConfig cls_;
  double res_ = 0.0;
  Vec2 origin_;
  Grid<int32_t> cover_;  // covering node per cell, -1 uncovered
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<int32_t>> adj_;  // edge ids touching each node
  size_t known_at_rebuild_ = 0;
};

}  // namespace agnav
