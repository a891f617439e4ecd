#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/world.hpp"

namespace agnav {

/// Identity of one published goal detection. Robots detect independently, so
/// the same physical cluster can carry several keys; deduplication groups
/// them and the lexicographically smallest key names the group.
struct GoalKey {
  int robot = -1;
  uint32_t seq = 0;

  bool operator==(const GoalKey& o) const { return robot == o.robot && seq == o.seq; }
  bool operator<(const GoalKey& o) const {
    return robot != o.robot ? robot < o.robot : seq < o.seq;
  }
};

struct GoalEntry {
  GoalKey key;
  Vec2 position;
};

struct ClaimEntry {
  int robot = -1;
  GoalKey goal;
  double time = 0.0;
};

/// A visit or an unreachable mark, depending on which list it arrives in.
struct MarkEntry {
  int robot = -1;
  GoalKey goal;
  double time = 0.0;
};

enum class GoalStatus : uint8_t { kIdentified, kClaimed, kVisited, kUnreachable };

/// One deduplicated goal as a robot currently understands it.
struct GoalView {
  GoalKey id;
  Vec2 position;
  std::vector<GoalKey> members;
  GoalStatus status = GoalStatus::kIdentified;
  bool visited = false;
  std::vector<ClaimEntry> claims;  // active claims on any member
  std::vector<int> unreach_by;     // distinct robots, ascending
};

struct CoordParams {
  uint8_t target_class = 4;     // palette index the goal detector looks for
  int morph_iters = 2;          // 3x3 close then open, this many iterations
  double cluster_reach = 10.0;  // goal may sit this far from its cluster
  double dedup_dist = 10.0;     // goals closer than this are one goal
  double visit_radius = 2.0;
  double goal_timeout = 300.0;  // claim age that forces release, seconds
  int unreach_exclude = 2;      // distinct markers that retire a goal
  double reselect_period = 5.0; // idle robots re-poll the board at this rate
};

/// Finds target-class clusters on the robot's map copy and places one goal
/// per cluster at the cell furthest from buildings and unknown space among
/// cells within cluster_reach of the cluster. Close-then-open denoising means
/// clusters thinner than about morph_iters*2+1 cells are ignored.
std::vector<Vec2> detect_goals(const SemanticOrthomap& map, const CoordParams& p);

/// True when the candidate is at least dedup_dist from every known detection,
/// i.e. worth publishing as a new goal.
bool far_from_all(const Vec2& candidate, const std::vector<GoalEntry>& known,
                  double dedup_dist);

/// Groups goal records within dedup_dist (transitively) and folds claims,
/// visits and unreachable marks onto the groups. Views come back sorted by
/// id. Marks referencing unknown keys are dropped.
std::vector<GoalView> assemble_board(const std::vector<GoalEntry>& goals,
                                     const std::vector<ClaimEntry>& claims,
                                     const std::vector<MarkEntry>& visits,
                                     const std::vector<MarkEntry>& unreaches,
                                     const CoordParams& p);

/// Nearest selectable goal: unclaimed, unvisited, not retired, and not one
/// this robot itself already abandoned. Distance ties go to the lowest id.
std::optional<GoalKey> select_goal(const Vec2& my_pos, int my_id,
                                   const std::vector<GoalView>& board,
                                   const CoordParams& p);

struct ConflictDecision {
  bool yield = false;
  bool warn = false;  // equal ranks are a configuration error
};

/// Two live claims on one goal: the worse rank yields. Lower rank wins; equal
/// ranks fall back to robot id with a warning.
ConflictDecision resolve_conflict(int my_id, int my_rank, int other_id, int other_rank);

enum class ClaimStep : uint8_t { kNavigate, kVisited, kUnreachable };

/// Per-claim progress bookkeeping: arrival, a two-strike infeasibility rule,
/// and the claim timeout.
struct ClaimProgress {
  double claim_time = 0.0;
  int infeasible_streak = 0;

  ClaimStep advance(double now, double dist_to_goal, bool plan_feasible,
                    const CoordParams& p);
};

}  // namespace agnav
