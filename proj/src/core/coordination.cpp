#include "core/coordination.hpp"

#include <algorithm>
#include <cmath>

#include "core/mapops.hpp"
#include "core/world_gen.hpp"

namespace agnav {

std::vector<Vec2> detect_goals(const SemanticOrthomap& map, const CoordParams& p) {
  const int w = map.width(), h = map.height();
  Grid<uint8_t> mask(w, h, 0);
  for (uint32_t i = 0; i < mask.size(); ++i)
    mask[i] = map.known[i] && map.classes[i] == p.target_class;
  mask = erode3(dilate3(mask, p.morph_iters), p.morph_iters);
  mask = dilate3(erode3(mask, p.morph_iters), p.morph_iters);

  Grid<uint8_t> blocked(w, h, 0);
  for (uint32_t i = 0; i < blocked.size(); ++i)
    blocked[i] = !map.known[i] || map.classes[i] == kBuilding;
  const Grid<float> clearance = distance_to_mask(blocked, map.resolution);

  std::vector<Vec2> goals;
  for (const auto& comp : connected_components8(mask)) {
    Grid<uint8_t> blob(w, h, 0);
    for (uint32_t i : comp) blob[i] = 1;
    const Grid<float> to_blob = distance_to_mask(blob, map.resolution);
    uint32_t best = comp[0];
    for (uint32_t i = 0; i < to_blob.size(); ++i)
      if (to_blob[i] <= p.cluster_reach && clearance[i] > clearance[best]) best = i;
    goals.push_back(map.cell_center(best % w, best / w));
  }
  return goals;
}

bool far_from_all(const Vec2& candidate, const std::vector<GoalEntry>& known,
                  double dedup_dist) {
  for (const auto& g : known)
    if (distance(candidate, g.position) < dedup_dist) return false;
  return true;
}

std::vector<GoalView> assemble_board(const std::vector<GoalEntry>& goals,
                                     const std::vector<ClaimEntry>& claims,
                                     const std::vector<MarkEntry>& visits,
                                     const std::vector<MarkEntry>& unreaches,
                                     const CoordParams& p) {
  const size_t n = goals.size();
  std::vector<size_t> parent(n);
  for (size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (distance(goals[i].position, goals[j].position) <= p.dedup_dist)
        parent[find(i)] = find(j);

  std::vector<GoalView> board;
  std::vector<int> slot(n, -1);
  for (size_t i = 0; i < n; ++i) {
    const size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = int(board.size());
      board.push_back({});
    }
    board[slot[root]].members.push_back(goals[i].key);
  }
  for (auto& v : board) {
    std::sort(v.members.begin(), v.members.end());
    v.id = v.members.front();
  }
  std::sort(board.begin(), board.end(),
            [](const GoalView& a, const GoalView& b) { return a.id < b.id; });

  auto view_of = [&](const GoalKey& k) -> GoalView* {
    for (auto& v : board)
      if (std::binary_search(v.members.begin(), v.members.end(), k)) return &v;
    return nullptr;
  };
  for (const auto& g : goals)
    if (auto* v = view_of(g.key); v && g.key == v->id) v->position = g.position;
  for (const auto& c : claims)
    if (auto* v = view_of(c.goal)) v->claims.push_back(c);
  for (const auto& m : visits)
    if (auto* v = view_of(m.goal)) v->visited = true;
  for (const auto& m : unreaches)
    if (auto* v = view_of(m.goal)) {
      auto& u = v->unreach_by;
      if (std::find(u.begin(), u.end(), m.robot) == u.end()) u.push_back(m.robot);
    }

  for (auto& v : board) {
    std::sort(v.unreach_by.begin(), v.unreach_by.end());
    if (v.visited)
      v.status = GoalStatus::kVisited;
    else if (!v.claims.empty())
      v.status = GoalStatus::kClaimed;
    else if (!v.unreach_by.empty())
      v.status = GoalStatus::kUnreachable;
    else
      v.status = GoalStatus::kIdentified;
  }
  return board;
}

std::optional<GoalKey> select_goal(const Vec2& my_pos, int my_id,
                                   const std::vector<GoalView>& board,
                                   const CoordParams& p) {
  std::optional<GoalKey> best;
  double best_d = 0.0;
  for (const auto& v : board) {
    if (v.visited || !v.claims.empty()) continue;
    if (int(v.unreach_by.size()) >= p.unreach_exclude) continue;
    if (std::binary_search(v.unreach_by.begin(), v.unreach_by.end(), my_id)) continue;
    const double d = distance(my_pos, v.position);
    if (!best || d < best_d) {
      best = v.id;
      best_d = d;
    }
  }
  return best;
}

ConflictDecision resolve_conflict(int my_id, int my_rank, int other_id, int other_rank) {
  if (my_rank != other_rank) return {my_rank > other_rank, false};
  return {my_id > other_id, true};
}

ClaimStep ClaimProgress::advance(double now, double dist_to_goal, bool plan_feasible,
                                 const CoordParams& p) {
  if (dist_to_goal <= p.visit_radius) return ClaimStep::kVisited;
  if (plan_feasible)
    infeasible_streak = 0;
  else if (++infeasible_streak >= 2)
    return ClaimStep::kUnreachable;
  if (now - claim_time > p.goal_timeout) return ClaimStep::kUnreachable;
  return ClaimStep::kNavigate;
}

}  // namespace agnav
