#include "core/trav_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

namespace agnav {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool TravGraph::cell_open(const SemanticOrthomap& map, int cx, int cy) const {
  if (!map.known.at(cx, cy)) return false;
  const uint8_t k = map.classes.at(cx, cy);
  if (k == kUnknownClass) return false;
  for (uint8_t o : cls_.obstacles)
    if (k == o) return false;
  return true;
}

bool TravGraph::line_open(const SemanticOrthomap& map, const Vec2& a, const Vec2& b) const {
  return walk_cells(map, a, b, [&](int cx, int cy) {
    return map.classes.in_bounds(cx, cy) && cell_open(map, cx, cy);
  });
}

void TravGraph::stamp_disc(const SemanticOrthomap& map, int32_t id) {
  const Vec2 c = nodes_[id].pos;
  const int r_cells = int(std::ceil(p_.node_radius / res_));
  int ncx, ncy;
  if (!map.cell_of(c, &ncx, &ncy)) return;
  for (int cy = std::max(0, ncy - r_cells); cy <= std::min(map.height() - 1, ncy + r_cells); ++cy) {
    for (int cx = std::max(0, ncx - r_cells); cx <= std::min(map.width() - 1, ncx + r_cells); ++cx) {
      if (cover_.at(cx, cy) >= 0) continue;
      const Vec2 cc = map.cell_center(cx, cy);
      if (distance(cc, c) > p_.node_radius) continue;
      if (!cell_open(map, cx, cy)) continue;
      if (!line_open(map, c, cc)) continue;
      cover_.at(cx, cy) = id;
    }
  }
}

void TravGraph::connect_new_edges(const SemanticOrthomap& map) {
  std::set<std::pair<int32_t, int32_t>> have;
  for (const GraphEdge& e : edges_) have.emplace(e.a, e.b);
  adj_.resize(nodes_.size());
  for (int32_t i = 0; i < int32_t(nodes_.size()); ++i) {
    for (int32_t j = i + 1; j < int32_t(nodes_.size()); ++j) {
      if (have.count({i, j})) continue;
      if (distance(nodes_[i].pos, nodes_[j].pos) > p_.connect_radius) continue;
      if (!line_open(map, nodes_[i].pos, nodes_[j].pos)) continue;
      GraphEdge e;
      e.a = i;
      e.b = j;
      e.model_cost = p_.edge_samples * -std::log(0.5);  // until a cost refresh
      adj_[i].push_back(int32_t(edges_.size()));
      adj_[j].push_back(int32_t(edges_.size()));
      edges_.push_back(e);
      have.emplace(i, j);
    }
  }
}

bool TravGraph::wants_rebuild(const SemanticOrthomap& map) const {
  size_t known = 0;
  for (size_t i = 0; i < map.known.size(); ++i) known += map.known[i];
  return known >= known_at_rebuild_ + size_t(p_.rebuild_known_delta);
}

bool TravGraph::rebuild(const SemanticOrthomap& map) {
  if (cover_.empty()) {
    res_ = map.resolution;
    origin_ = map.origin;
    cover_ = Grid<int32_t>(map.width(), map.height(), -1);
  }
  const size_t old_nodes = nodes_.size(), old_edges = edges_.size();

  // Re-stamp existing discs against the grown map, then keep growing: the
  // deepest uncovered cell of each drivable class gets the next node.
  size_t covered_before = 0;
  for (size_t i = 0; i < cover_.size(); ++i) covered_before += cover_[i] >= 0;
  cover_.fill(-1);
  for (int32_t id = 0; id < int32_t(nodes_.size()); ++id) stamp_disc(map, id);

  Grid<uint8_t> mask(map.width(), map.height());
  for (uint8_t k : cls_.ordering) {
    for (size_t i = 0; i < mask.size(); ++i)
      mask[i] = (!map.known[i] || map.classes[i] != k) ? 1 : 0;  // complement
    Grid<float> depth = distance_to_mask(mask, res_);
    for (;;) {
      float best = 0.0f;
      size_t best_i = mask.size();
      for (size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] || cover_[i] >= 0) continue;
        if (depth[i] > best) {
          best = depth[i];
          best_i = i;
        }
      }
      if (best_i == mask.size()) break;
      const int cx = int(best_i % map.width()), cy = int(best_i / map.width());
      GraphNode n;
      n.pos = map.cell_center(cx, cy);
      n.cls = k;
      nodes_.push_back(n);
      stamp_disc(map, int32_t(nodes_.size() - 1));
      cover_[best_i] = int32_t(nodes_.size() - 1);  // owns its seed regardless
    }
  }

  connect_new_edges(map);

  size_t known = 0;
  for (size_t i = 0; i < map.known.size(); ++i) known += map.known[i];
  known_at_rebuild_ = known;

  size_t covered_after = 0;
  for (size_t i = 0; i < cover_.size(); ++i) covered_after += cover_[i] >= 0;
  return nodes_.size() != old_nodes || edges_.size() != old_edges ||
         covered_after != covered_before;
}

void TravGraph::refresh_costs_learned(const Grid<float>& trav_prob) {
  const int n = p_.edge_samples;
  for (GraphEdge& e : edges_) {
    const Vec2 a = nodes_[e.a].pos, b = nodes_[e.b].pos;
    double known_sum = 0.0;
    int known_count = 0;
    for (int i = 0; i < n; ++i) {
      const Vec2 s = a + (b - a) * (double(i) / (n - 1));
      const int cx = int(std::floor((s.x - origin_.x) / res_));
      const int cy = int(std::floor((s.y - origin_.y) / res_));
      if (!trav_prob.in_bounds(cx, cy)) continue;
      const float t = trav_prob.at(cx, cy);
      if (t < 0.0f) continue;
      known_sum += -std::log(std::clamp(double(t), 1e-4, 1.0 - 1e-4));
      ++known_count;
    }
    e.model_cost = known_count == 0 ? n * -std::log(0.5)
                                    : known_sum / known_count * n;
  }
}

void TravGraph::refresh_costs_class_rank(const SemanticOrthomap& map) {
  const std::vector<Grid<float>> dists = class_distance_maps(map);
  std::vector<int> rank_of(256, -1);
  for (size_t r = 0; r < cls_.ordering.size(); ++r) rank_of[cls_.ordering[r]] = int(r);

  const int n = p_.edge_samples;
  for (GraphEdge& e : edges_) {
    const Vec2 a = nodes_[e.a].pos, b = nodes_[e.b].pos;
    int worst = 0;
    bool cut = false;
    std::vector<std::pair<int, int>> cells;
    cells.reserve(n);
    for (int i = 0; i < n && !cut; ++i) {
      const Vec2 s = a + (b - a) * (double(i) / (n - 1));
      int cx, cy;
      if (!map.cell_of(s, &cx, &cy) || !map.known.at(cx, cy) ||
          rank_of[map.classes.at(cx, cy)] < 0) {
        cut = true;
        break;
      }
      worst = std::max(worst, rank_of[map.classes.at(cx, cy)]);
      cells.emplace_back(cx, cy);
    }
    if (cut) {
      e.model_cost = kInf;
      continue;
    }
    double d = 0.0;
    if (worst + 1 < int(cls_.ordering.size())) {
      const Grid<float>& next_worse = dists[cls_.ordering[worst + 1]];
      d = kFarDistance;
      for (auto [cx, cy] : cells) d = std::min(d, double(next_worse.at(cx, cy)));
      if (d >= kFarDistance / 2) d = 0.0;  // class never seen, no signal
    }
    e.model_cost = std::pow(100.0, worst) - 1.0 + d;
  }
}

EdgeJudgement TravGraph::judge_edge(const ReachabilityScan& scan, const Vec2& a,
                                    const Vec2& b, int margin_cols) {
  const Vec2 al = scan.pose.to_local(a), bl = scan.pose.to_local(b);
  if (distance(al, bl) < 1e-9) return EdgeJudgement::kUnknown;

  double cross_az = 0.0;
  const int crossings = count_star_crossings(scan, al, bl, &cross_az);
  const bool in_a = point_in_star(scan, al), in_b = point_in_star(scan, bl);

  if (crossings == 0) {
    if (in_a && in_b) return EdgeJudgement::kTrav;
    return EdgeJudgement::kUnknown;
  }
  if (crossings > 1) return EdgeJudgement::kUnknown;

  // One clean exit. Trust it only if the boundary there was an obstacle stop;
  // a scan that ended in a gap says nothing about what lies beyond.
  const int cc = scan.column_of(cross_az);
  for (int o = -margin_cols; o <= margin_cols; ++o) {
    const int c = ((cc + o) % scan.cols + scan.cols) % scan.cols;
    if (!scan.obstacle[c]) return EdgeJudgement::kUnknown;
  }
  return EdgeJudgement::kNotTrav;
}

TravGraph::ScanStats TravGraph::integrate_scan(const ReachabilityScan& scan, bool remote) {
  ScanStats st;
  const double reach = double(scan.max_safe()) + 0.5;
  for (GraphEdge& e : edges_) {
    if (e.locked) continue;
    const Vec2 al = scan.pose.to_local(nodes_[e.a].pos);
    const Vec2 bl = scan.pose.to_local(nodes_[e.b].pos);
    if (point_segment_distance({0, 0}, al, bl) > reach) continue;

    const EdgeJudgement j =
        judge_edge(scan, nodes_[e.a].pos, nodes_[e.b].pos, p_.judge_margin_cols);
    if (j == EdgeJudgement::kTrav) {
      ++st.trav;
      if (e.trav_count < 255) ++e.trav_count;
      e.self_not_count = 0;
      e.remote_not_count = 0;
      if (e.trav_count >= p_.promote_trav) e.obs = EdgeObs::kTrav;
    } else if (j == EdgeJudgement::kNotTrav) {
      ++st.not_trav;
      if (remote) {
        if (e.remote_not_count < 255) ++e.remote_not_count;
      } else {
        e.trav_count = 0;
        if (e.self_not_count < 255) ++e.self_not_count;
        const int lock_at = e.obs == EdgeObs::kTrav ? p_.lock_not_flip : p_.lock_not;
        if (e.self_not_count >= lock_at) {
          e.locked = true;
          e.obs = EdgeObs::kNotTrav;
          ++st.locked;
        }
      }
    }
  }
  return st;
}

double TravGraph::effective_edge_cost(const GraphEdge& e) const {
  if (e.locked) return kInf;
  // Fresh denials outrank an old promotion; a new confirmation clears them.
  if (e.self_not_count > 0 || e.remote_not_count > 0)
    return p_.edge_samples * -std::log(p_.not_trav_prob);
  // A confirmation caps the cost near zero; it must never price the edge
  // above what the model already says, or driving an edge would penalize it.
  if (e.obs == EdgeObs::kTrav)
    return std::min(e.model_cost, p_.edge_samples * -std::log(p_.trav_prob));
  return e.model_cost;
}

int32_t TravGraph::snap(const Vec2& point) const {
  if (cover_.empty()) return -1;
  const int cx = int(std::floor((point.x - origin_.x) / res_));
  const int cy = int(std::floor((point.y - origin_.y) / res_));
  if (cover_.in_bounds(cx, cy) && cover_.at(cx, cy) >= 0) return cover_.at(cx, cy);
  const int max_ring = int(std::ceil(p_.snap_radius / res_));
  for (int rr = 1; rr <= max_ring; ++rr) {
    int32_t best = -1;
    double best_d = 1e18;
    for (int y = cy - rr; y <= cy + rr; ++y) {
      for (int x = cx - rr; x <= cx + rr; ++x) {
        if (std::max(std::abs(x - cx), std::abs(y - cy)) != rr) continue;
        if (!cover_.in_bounds(x, y) || cover_.at(x, y) < 0) continue;
        const double d = std::hypot(double(x - cx), double(y - cy));
        if (d < best_d) {
          best_d = d;
          best = cover_.at(x, y);
        }
      }
    }
    if (best >= 0) return best;
  }
  return -1;
}

GraphPlan TravGraph::plan(const Vec2& start, const Vec2& goal) const {
  GraphPlan out;
  const int32_t s = snap(start), g = snap(goal);
  if (s < 0 || g < 0) {
    out.off_graph = true;
    return out;
  }
  const size_t n = nodes_.size();
  std::vector<double> dist(n, kInf);
  std::vector<double> len(n, kInf);
  std::vector<int32_t> prev(n, -1);
  using Entry = std::tuple<double, double, int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  dist[s] = 0.0;
  len[s] = 0.0;
  pq.emplace(0.0, 0.0, s);
  // Sampled costs ignore edge length, so equal-cost routes are common; the
  // geometric length tie-break keeps the returned path stable under small
  // start moves instead of flapping between symmetric detours.
  constexpr double kTie = 1e-9;
  while (!pq.empty()) {
    const auto [d, l, u] = pq.top();
    pq.pop();
    if (d > dist[u] + kTie || (d > dist[u] - kTie && l > len[u])) continue;
    if (u == g) break;
    for (int32_t ei : adj_[u]) {
      const GraphEdge& e = edges_[ei];
      const double c = effective_edge_cost(e);
      if (!(c < kInf)) continue;
      const int32_t v = e.a == u ? e.b : e.a;
      const double nd = d + c;
      const double nl = l + distance(nodes_[e.a].pos, nodes_[e.b].pos);
      if (nd < dist[v] - kTie || (nd < dist[v] + kTie && nl < len[v])) {
        dist[v] = nd;
        len[v] = nl;
        prev[v] = u;
        pq.emplace(nd, nl, v);
      }
    }
  }
  if (!(dist[g] < kInf)) return out;
  out.found = true;
  out.cost = dist[g];
  for (int32_t v = g;; v = prev[v]) {
    out.nodes.push_back(v);
    if (v == s) break;
  }
  std::reverse(out.nodes.begin(), out.nodes.end());
  return out;
}

}  // namespace agnav
