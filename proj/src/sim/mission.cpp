#include "sim/mission.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <set>

#include "core/comms.hpp"
#include "core/coordination.hpp"
#include "core/local_planner.hpp"
#include "core/pano.hpp"
#include "core/rng.hpp"
#include "core/terrain.hpp"
#include "core/terrain_learner.hpp"
#include "core/trav_graph.hpp"
#include "core/uav_planner.hpp"
#include "core/world_gen.hpp"
#include "sim/records.hpp"
#include "sim/trace.hpp"

namespace agnav {
namespace {

constexpr double kDt = 0.1;
constexpr int kSenseEvery = 10;    // panoramas, comms, coordination at 1 Hz
constexpr int kDetectEvery = 50;   // goal detection sweeps
constexpr int kTrainEvery = 100;   // learner updates
constexpr int kPredictEvery = 300; // dense prediction and graph repricing
constexpr int kUavId = 90;
constexpr double kUgvReveal = 20.0;   // the ground sensor's map footprint
constexpr double kClimbLimit = 0.12;  // tallest step a wheel clears, meters
constexpr double kLookahead = 6.0;    // graph waypoint carrot distance
constexpr double kContactDist = 1.0;

// Rng purpose tags for derive_stream; one consumer per tag.
enum StreamTag : uint64_t {
  kStreamPanoNoise = 1,
  kStreamLocalGoal = 3,
  kStreamLearner = 4,
  kStreamPoseNoise = 7,
};

const char* uav_mode_name(UavMode m) {
  switch (m) {
    case UavMode::kExplore: return "explore";
    case UavMode::kGotoRobot: return "goto_robot";
    case UavMode::kReturnToExploration: return "return";
    case UavMode::kRelayCycle: return "relay";
  }
  return "?";
}

Pose2 start_pose(const WorldModel& w, int i) {
  const int n = int(w.starts.size());
  const int k = std::min(i, n - 1);
  Pose2 p = w.starts[size_t(k)];
  p.x += 2.5 * (i - k);  // worlds with few starts stagger extra robots
  return p;
}

std::vector<Vec2> survey_waypoints(const WorldModel& w) {
  const double wm = w.width() * w.truth.resolution;
  const double hm = w.height() * w.truth.resolution;
  const double margin = 20.0, spacing = 60.0;
  std::vector<Vec2> wps;
  bool flip = false;
  for (double y = margin; y <= hm - margin + 1e-9; y += spacing) {
    const double x0 = flip ? wm - margin : margin;
    const double x1 = flip ? margin : wm - margin;
    wps.push_back({x0, y});
    wps.push_back({x1, y});
    flip = !flip;
  }
  if (wps.empty()) wps.push_back({wm / 2, hm / 2});
  return wps;
}

struct UgvAgent {
  int id;
  Pose2 true_pose;
  Pose2 believed;
  SemanticOrthomap map;
  TravGraph graph;
  TerrainLearner learner;
  LocalPlanner lp;
  ReplicaStore store;
  ScanShareFilter share;
  Rng noise;
  std::set<RecordKey> consumed;

  uint32_t pano_seq = 0, goal_seq = 0, visit_seq = 0, unreach_seq = 0;
  uint32_t pose_ver = 0, claim_ver = 0;

  bool has_claim = false;
  GoalKey claim_goal;
  Vec2 claim_pos;
  ClaimProgress progress;
  double next_reselect = 0.0;
  bool plan_found = true;

  double cmd_v = 0.0, cmd_w = 0.0;
  bool recovering = false;  // latched turn toward the waypoint
  bool active = true;       // scripted scenarios stage robots
  bool done = false;
  double distance = 0.0;

  Grid<float> pred;
  bool have_pred = false;

  UgvAgent(int id_, const Pose2& start, const SemanticOrthomap& ref,
           const TravGraphParams& gp, const TravClassConfig& cc,
           const LearnerParams& lp_params, const LocalPlannerParams& pp,
           ScanShareMode share_mode, uint64_t seed)
      : id(id_),
        true_pose(start),
        believed(start),
        map(SemanticOrthomap::unknown_like(ref)),
        graph(gp, cc),
        learner(lp_params, ref.num_classes(), derive_stream(seed, uint64_t(id_), kStreamLearner)),
        lp(pp),
        share(share_mode),
        noise(derive_stream(seed, uint64_t(id_), kStreamPoseNoise)) {}
};

struct UavAgent {
  Vec2 pos;
  ReplicaStore store;
  SemanticOrthomap map;
  UavPlanner planner;
  UavMode last_mode = UavMode::kExplore;
  int last_target = -1;
  std::vector<uint32_t> pending_cells;
  uint32_t map_seq = 0;
  std::vector<int> full_synced;

  UavAgent(const Vec2& start, const SemanticOrthomap& ref, std::vector<Vec2> wps,
           const UavParams& p)
      : pos(start), map(SemanticOrthomap::unknown_like(ref)), planner(std::move(wps), p) {}
};

void board_inputs(const ReplicaStore& st, std::vector<GoalEntry>* goals,
                  std::vector<ClaimEntry>* claims, std::vector<MarkEntry>* visits,
                  std::vector<MarkEntry>* unreaches) {
  for (const auto& [key, rec] : st.all()) {
    switch (key.topic) {
      case Topic::kGoal: {
        const GoalPayload p = decode_goal(rec.payload);
        goals->push_back({{key.origin, key.seq}, p.position});
        break;
      }
      case Topic::kClaim: {
        const ClaimPayload p = decode_claim(rec.payload);
        if (p.active) claims->push_back({key.origin, p.goal, p.time});
        break;
      }
      case Topic::kVisit: {
        const MarkPayload p = decode_mark(rec.payload);
        visits->push_back({key.origin, p.goal, p.time});
        break;
      }
      case Topic::kUnreach: {
        const MarkPayload p = decode_mark(rec.payload);
        unreaches->push_back({key.origin, p.goal, p.time});
        break;
      }
      default:
        break;
    }
  }
}

const GoalView* find_view(const std::vector<GoalView>& board, const GoalKey& k) {
  for (const auto& v : board)
    if (std::binary_search(v.members.begin(), v.members.end(), k)) return &v;
  return nullptr;
}

/// Pure-pursuit carrot: project the robot onto the path polyline, then
/// advance lookahead meters along it. Moves continuously as the robot moves,
/// unlike handing out raw graph nodes.
Vec2 carrot_on_path(const std::vector<Vec2>& poly, const Vec2& robot, double lookahead) {
  if (poly.empty()) return robot;
  if (poly.size() == 1) return poly[0];
  double best_d = 1e300, best_t = 0.0;
  size_t best_i = 0;
  for (size_t i = 0; i + 1 < poly.size(); ++i) {
    const Vec2 ab = poly[i + 1] - poly[i];
    const double L2 = ab.x * ab.x + ab.y * ab.y;
    double tt = 0.0;
    if (L2 > 1e-12) {
      const Vec2 ar = robot - poly[i];
      tt = std::clamp((ar.x * ab.x + ar.y * ab.y) / L2, 0.0, 1.0);
    }
    const Vec2 q = poly[i] + ab * tt;
    const double d = distance(q, robot);
    if (d < best_d) {
      best_d = d;
      best_i = i;
      best_t = tt;
    }
  }
  double remain = lookahead;
  Vec2 p = poly[best_i] + (poly[best_i + 1] - poly[best_i]) * best_t;
  for (size_t seg = best_i; seg + 1 < poly.size(); ++seg) {
    const Vec2 a = seg == best_i ? p : poly[seg];
    const Vec2 b = poly[seg + 1];
    const double L = distance(a, b);
    if (L >= remain && L > 1e-12) return a + (b - a) * (remain / L);
    remain -= L;
  }
  return poly.back();
}

class Sim {
 public:
  Sim(const MissionConfig& cfg, const WorldModel& world) : cfg_(cfg), world_(world) {
    coordp_.target_class = kVehicle;
    coordp_.goal_timeout = cfg.goal_timeout;
    policy_ = {cfg.sync_pos_range, cfg.sync_full_range};

    TravClassConfig cc;
    cc.ordering = {kRoad, kSidewalk, kGrass};
    cc.obstacles = {kBuilding, kVehicle, kPerson};

    const ScanShareMode share = cfg.comms_mode == CommsMode::kOff ? ScanShareMode::kOff
                                : cfg.comms_mode == CommsMode::kFull
                                    ? ScanShareMode::kFull
                                    : ScanShareMode::kDownsampled;

    base_pos_ = world.starts.empty() ? Vec2{0, 0} : world.starts[0].position();
    for (int i = 1; i <= cfg.ugvs; ++i) {
      auto g = std::make_unique<UgvAgent>(i, start_pose(world, i), world.truth,
                                          TravGraphParams{}, cc, LearnerParams{},
                                          LocalPlannerParams{}, share, cfg.seed);
      if (cfg.scenario == Scenario::kHandoff) {
        g->map = world.truth;  // scripted runs start from a full aerial prior
        g->active = i == 1;
      }
      ugvs_.push_back(std::move(g));
    }
    if (cfg.uav)
      uav_ = std::make_unique<UavAgent>(base_pos_, world.truth, survey_waypoints(world),
                                        UavParams{});

    if (cfg.manual_goal) {
      const GoalPayload gp{*cfg.manual_goal, 0.0};
      base_store_.put({Topic::kGoal, 0, 0}, 1, encode_goal(gp));
      trace_.event(0.0, strf("GOAL robot=0 seq=0 x=%.3f y=%.3f", cfg.manual_goal->x,
                             cfg.manual_goal->y));
    }
  }

  MissionResult run() {
    const long total = std::lround(cfg_.duration / kDt);
    long tick = 0;
    for (; tick < total; ++tick) {
      const double t = tick * kDt;
      if (uav_) step_uav(t, tick);
      for (auto& g : ugvs_)
        if (tick % kSenseEvery == 0) sense_and_decide(*g, t, tick);
      for (auto& g : ugvs_) step_motion(*g, t);
      if (tick % kSenseEvery == 0) step_comms(t);
      if (tick % (kSenseEvery * 10) == 0)
        for (const auto& g : ugvs_)
          trace_.event(t, strf("POS robot=%d x=%.2f y=%.2f claim=%d", g->id,
                               g->true_pose.x, g->true_pose.y, int(g->has_claim)));
      if (cfg_.terrain_mode == TerrainMode::kLearned && tick > 0) {
        for (auto& g : ugvs_) {
          if (tick % kTrainEvery == 0) g->learner.train_step(g->map);
          if (tick % kPredictEvery == 0 && g->learner.trained()) {
            g->pred = g->learner.predict_map(g->map);
            g->have_pred = true;
            g->graph.refresh_costs_learned(g->pred);
          }
        }
      }
      if (cfg_.scenario == Scenario::kHandoff) {
        bool all_done = true;
        for (const auto& g : ugvs_) all_done = all_done && g->done;
        if (all_done) {
          ++tick;
          break;
        }
      }
    }
    const double t_end = tick * kDt;
    for (const auto& g : ugvs_)
      trace_.event(t_end, strf("SUMMARY robot=%d distance=%.2f", g->id, g->distance));
    trace_.event(t_end, strf("END t=%.3f", t_end));

    MissionResult res;
    res.trace = trace_.text();
    res.metrics = compute_metrics(res.trace);
    return res;
  }

 private:
  void publish_claim(UgvAgent& g, bool active, double t) {
    const ClaimPayload cp{active, g.claim_goal, t};
    g.store.put({Topic::kClaim, g.id, 0}, ++g.claim_ver, encode_claim(cp));
  }

  void sense_and_decide(UgvAgent& g, double t, long tick) {
    PanoOptions opt;
    opt.rows = 64;
    opt.cols = 512;
    opt.noise_seed = derive_stream(cfg_.seed, uint64_t(g.id), kStreamPanoNoise, g.pano_seq);
    const DepthPanorama pano = render_panorama(world_, g.true_pose, g.believed, opt);
    TerrainProducts prod = analyze_terrain(pano, tp_);
    prod.scan.origin_robot = g.id;
    prod.scan.sequence = g.pano_seq;
    const ProbeField field = ProbeField::build(prod);

    if (cfg_.terrain_mode != TerrainMode::kClassRankFrozen) {
      const auto stats = g.graph.integrate_scan(prod.scan, false);
      if (stats.locked > 0)
        trace_.event(t, strf("LOCK robot=%d count=%d", g.id, stats.locked));
    }
    if (cfg_.terrain_mode == TerrainMode::kLearned)
      g.learner.add_scan_labels(prod.scan, g.map);

    if (g.share.should_share(g.believed.position())) {
      const RecordKey key{Topic::kScan, g.id, g.pano_seq};
      g.store.put(key, 1, serialize_scan(prod.scan));
      g.consumed.insert(key);
    }

    reveal_disc(world_, g.map, g.true_pose.position(), kUgvReveal, nullptr);

    if (g.graph.wants_rebuild(g.map) && g.graph.rebuild(g.map)) {
      if (cfg_.terrain_mode == TerrainMode::kLearned && g.have_pred)
        g.graph.refresh_costs_learned(g.pred);
      else
        g.graph.refresh_costs_class_rank(g.map);
    }

    if (cfg_.scenario == Scenario::kHandoff) {
      scripted_goal_step(g, t);
    } else {
      if (tick % kDetectEvery == 0) detect_step(g, t);
      coordinate(g, t);
    }

    drive(g, prod, field);
    ++g.pano_seq;
  }

  void detect_step(UgvAgent& g, double t) {
    const std::vector<Vec2> found = detect_goals(g.map, coordp_);
    if (found.empty()) return;
    std::vector<GoalEntry> known;
    for (const auto& [key, rec] : g.store.all()) {
      if (key.topic != Topic::kGoal) continue;
      known.push_back({{key.origin, key.seq}, decode_goal(rec.payload).position});
    }
    for (const Vec2& c : found) {
      if (!far_from_all(c, known, coordp_.dedup_dist)) continue;
      const GoalKey key{g.id, g.goal_seq++};
      g.store.put({Topic::kGoal, key.robot, key.seq}, 1, encode_goal({c, t}));
      known.push_back({key, c});
      trace_.event(t, strf("GOAL robot=%d seq=%u x=%.3f y=%.3f", key.robot, key.seq, c.x, c.y));
    }
  }

  void coordinate(UgvAgent& g, double t) {
    std::vector<GoalEntry> goals;
    std::vector<ClaimEntry> claims;
    std::vector<MarkEntry> visits, unreaches;
    board_inputs(g.store, &goals, &claims, &visits, &unreaches);
    const std::vector<GoalView> board =
        assemble_board(goals, claims, visits, unreaches, coordp_);

    if (g.has_claim) {
      const GoalView* view = find_view(board, g.claim_goal);
      if (view) {
        g.claim_pos = view->position;
        if (view->visited) {
          // Someone else finished it while we were en route.
          g.has_claim = false;
          publish_claim(g, false, t);
          trace_.event(t, strf("RELEASE robot=%d goal=%d:%u reason=done", g.id,
                               g.claim_goal.robot, g.claim_goal.seq));
          g.next_reselect = t;
        } else {
          for (const ClaimEntry& other : view->claims) {
            if (other.robot == g.id) continue;
            // Rank equals robot id: the configured priority order.
            const ConflictDecision d = resolve_conflict(g.id, g.id, other.robot, other.robot);
            if (d.yield) {
              g.has_claim = false;
              publish_claim(g, false, t);
              trace_.event(t, strf("YIELD robot=%d goal=%d:%u to=%d", g.id,
                                   g.claim_goal.robot, g.claim_goal.seq, other.robot));
              trace_.event(t, strf("RELEASE robot=%d goal=%d:%u reason=yield", g.id,
                                   g.claim_goal.robot, g.claim_goal.seq));
              g.next_reselect = t;
              break;
            }
          }
        }
      }
    }

    if (g.has_claim) {
      const double dist = distance(g.believed.position(), g.claim_pos);
      // A failed graph plan only counts against the claim once the goal's
      // area is mapped; before that the robot is still exploring toward it.
      const bool goal_mapped = g.map.class_at(g.claim_pos) != kUnknownClass;
      const bool feasible = g.plan_found || !goal_mapped;
      const ClaimStep step = g.progress.advance(t, dist, feasible, coordp_);
      if (step == ClaimStep::kVisited) {
        g.store.put({Topic::kVisit, g.id, g.visit_seq++}, 1,
                    encode_mark({g.claim_goal, t}));
        trace_.event(t, strf("VISIT robot=%d goal=%d:%u", g.id, g.claim_goal.robot,
                             g.claim_goal.seq));
        g.has_claim = false;
        publish_claim(g, false, t);
        g.next_reselect = t;
      } else if (step == ClaimStep::kUnreachable) {
        g.store.put({Topic::kUnreach, g.id, g.unreach_seq++}, 1,
                    encode_mark({g.claim_goal, t}));
        trace_.event(t, strf("UNREACH robot=%d goal=%d:%u", g.id, g.claim_goal.robot,
                             g.claim_goal.seq));
        g.has_claim = false;
        publish_claim(g, false, t);
        g.next_reselect = t;
      }
    }

    if (!g.has_claim && t >= g.next_reselect) {
      const auto sel = select_goal(g.believed.position(), g.id, board, coordp_);
      if (sel) {
        const GoalView* view = find_view(board, *sel);
        g.claim_goal = *sel;
        g.claim_pos = view ? view->position : g.believed.position();
        g.has_claim = true;
        g.progress = ClaimProgress{t, 0};
        g.plan_found = true;
        publish_claim(g, true, t);
        trace_.event(t, strf("CLAIM robot=%d goal=%d:%u", g.id, sel->robot, sel->seq));
      } else {
        g.next_reselect = t + coordp_.reselect_period;
      }
    }
  }

  // Handoff staging: robot k waits for k-1 visit marks on the shared manual
  // goal, then drives to it on the inherited map and scan record stream.
  void scripted_goal_step(UgvAgent& g, double t) {
    if (g.done) return;
    if (!g.active) {
      int visit_marks = 0;
      for (const auto& [key, rec] : g.store.all())
        if (key.topic == Topic::kVisit) ++visit_marks;
      if (visit_marks < g.id - 1) return;
      g.active = true;
    }
    if (!g.has_claim) {
      g.claim_goal = {0, 0};
      g.claim_pos = *cfg_.manual_goal;
      g.has_claim = true;
      g.progress = ClaimProgress{t, 0};
      publish_claim(g, true, t);
      trace_.event(t, strf("CLAIM robot=%d goal=0:0", g.id));
      return;
    }
    if (distance(g.believed.position(), g.claim_pos) <= coordp_.visit_radius) {
      g.store.put({Topic::kVisit, g.id, g.visit_seq++}, 1, encode_mark({g.claim_goal, t}));
      trace_.event(t, strf("VISIT robot=%d goal=0:0", g.id));
      g.has_claim = false;
      publish_claim(g, false, t);
      g.done = true;
      g.cmd_v = g.cmd_w = 0.0;
    }
  }

  void drive(UgvAgent& g, const TerrainProducts& prod, const ProbeField& field) {
    if (!g.active || g.done || !g.has_claim) {
      g.cmd_v = g.cmd_w = 0.0;
      return;
    }
    const GraphPlan plan = g.graph.plan(g.believed.position(), g.claim_pos);
    g.plan_found = plan.found;
    Vec2 target = g.claim_pos;
    if (plan.found) {
      std::vector<Vec2> poly;
      poly.reserve(plan.nodes.size() + 1);
      for (int32_t node : plan.nodes) poly.push_back(g.graph.nodes()[size_t(node)].pos);
      poly.push_back(g.claim_pos);
      target = carrot_on_path(poly, g.believed.position(), kLookahead);
    }
    Vec2 local_goal;
    const uint64_t stream =
        derive_stream(cfg_.seed, uint64_t(g.id), kStreamLocalGoal, g.pano_seq);
    if (!g.lp.select_local_goal(prod.scan, target, stream, &local_goal)) {
      if (getenv("AGNAV_DEBUG") && g.id == atoi(getenv("AGNAV_DEBUG")))
        fprintf(stderr, "t=? r=%d pose=(%.2f,%.2f,%.2f) tgt=(%.1f,%.1f) found=%d SELFAIL\n",
                g.id, g.true_pose.x, g.true_pose.y, g.true_pose.yaw, target.x, target.y,
                int(plan.found));
      g.cmd_v = g.cmd_w = 0.0;
      return;
    }
    const LocalPlanner::Command cmd = g.lp.plan(prod, field, g.believed, local_goal);
    if (getenv("AGNAV_DEBUG") && g.id == atoi(getenv("AGNAV_DEBUG")))
      fprintf(stderr,
              "r=%d pose=(%.2f,%.2f,%.2f) tgt=(%.1f,%.1f) found=%d og=%d lg=(%.2f,%.2f) "
              "cmd=(%.2f,%.2f) blocked=%d\n",
              g.id, g.true_pose.x, g.true_pose.y, g.true_pose.yaw, target.x, target.y,
              int(plan.found), int(plan.off_graph), local_goal.x, local_goal.y, cmd.v,
              cmd.w, int(cmd.blocked));
    // Recovery turn. The rollout window is anchored on the previous command,
    // so a waypoint behind the robot leaves stillness as a local optimum (all
    // v=0 rollouts tie on goal cost and clearance picks the heading), and a
    // blocked verdict has no way out at all. The turn must latch until the
    // robot actually faces the waypoint; a one-tick nudge gets undone by the
    // next rollout round.
    const Vec2 to{target.x - g.believed.x, target.y - g.believed.y};
    const double bearing = wrap_angle(std::atan2(to.y, to.x) - g.believed.yaw);
    const bool stalled =
        std::abs(bearing) > 1.8 && cmd.v < 0.1 && to.norm() > 1.5;
    if (stalled) g.recovering = true;
    if (g.recovering && std::abs(bearing) < 0.5) g.recovering = false;
    if (cmd.blocked || g.recovering) {
      g.cmd_v = 0.0;
      g.cmd_w = bearing >= 0.0 ? 1.0 : -1.0;
      return;
    }
    g.cmd_v = cmd.v;
    g.cmd_w = cmd.w;
  }

  void step_motion(UgvAgent& g, double t) {
    (void)t;
    const double yaw = g.true_pose.yaw;
    const Vec2 cur = g.true_pose.position();
    const Vec2 next{cur.x + g.cmd_v * kDt * std::cos(yaw),
                    cur.y + g.cmd_v * kDt * std::sin(yaw)};
    const double rise = world_.surface_at(next) - world_.surface_at(cur);
    if (rise <= kClimbLimit) {
      g.true_pose.x = next.x;
      g.true_pose.y = next.y;
      g.distance += distance(cur, next);
    }
    g.true_pose.yaw = wrap_angle(g.true_pose.yaw + g.cmd_w * kDt);

    // Localization noise is drawn fresh every tick; it never integrates.
    g.believed = g.true_pose;
    g.believed.x += g.noise.gaussian(0.0, 0.05);
    g.believed.y += g.noise.gaussian(0.0, 0.05);
    g.believed.yaw = wrap_angle(g.believed.yaw + g.noise.gaussian(0.0, 0.01));
  }

  void step_uav(double t, long tick) {
    UavAgent& u = *uav_;
    std::vector<UgvBelief> beliefs;
    for (const auto& [key, rec] : u.store.all()) {
      if (key.topic != Topic::kPose) continue;
      if (key.origin < 1 || key.origin > cfg_.ugvs) continue;
      const PosePayload p = decode_pose(rec.payload);
      beliefs.push_back({key.origin, p.pose.position(), p.time, p.has_goal, p.goal});
    }
    const UavPlanner::Command cmd = u.planner.tick(t, kDt, u.pos, beliefs, u.full_synced);
    u.full_synced.clear();
    u.pos = u.pos + cmd.velocity * kDt;
    if (cmd.mode != u.last_mode || cmd.target_robot != u.last_target) {
      trace_.event(t, strf("UAV mode=%s target=%d wp=%zu", uav_mode_name(cmd.mode),
                           cmd.target_robot, u.planner.waypoint_index()));
      u.last_mode = cmd.mode;
      u.last_target = cmd.target_robot;
    }
    if (tick % kSenseEvery == 0)
      reveal_disc(world_, u.map, u.pos, UavParams{}.reveal_radius, &u.pending_cells);
  }

  void step_comms(double t) {
    for (auto& g : ugvs_) {
      const PosePayload pp{g->believed, t, g->has_claim, g->claim_pos};
      g->store.put({Topic::kPose, g->id, 0}, ++g->pose_ver, encode_pose(pp));
    }
    if (uav_ && !uav_->pending_cells.empty()) {
      MapCellsPayload mc;
      mc.cells.reserve(uav_->pending_cells.size());
      for (uint32_t idx : uav_->pending_cells) {
        const int cx = int(idx % uint32_t(uav_->map.width()));
        const int cy = int(idx / uint32_t(uav_->map.width()));
        mc.cells.push_back({idx, uav_->map.classes.at(cx, cy),
                            uav_->map.color.at(cx, cy)[0], uav_->map.color.at(cx, cy)[1],
                            uav_->map.color.at(cx, cy)[2], uav_->map.elevation.at(cx, cy)});
      }
      uav_->pending_cells.clear();
      uav_->store.put({Topic::kMapCells, kUavId, uav_->map_seq++}, 1, encode_map_cells(mc));
    }

    std::vector<SyncNode> nodes;
    nodes.push_back({0, base_pos_, &base_store_});
    for (auto& g : ugvs_) nodes.push_back({g->id, g->true_pose.position(), &g->store});
    if (uav_) nodes.push_back({kUavId, uav_->pos, &uav_->store});
    const std::vector<TransferStat> stats = sync_tick(nodes, policy_);
    for (const TransferStat& s : stats)
      trace_.event(t, strf("SYNC a=%d b=%d moved=%d full=%d", s.a, s.b, s.moved,
                           s.full ? 1 : 0));

    if (uav_) {
      for (const auto& g : ugvs_)
        if (distance(uav_->pos, g->true_pose.position()) <= policy_.full_range)
          uav_->full_synced.push_back(g->id);
    }

    for (auto& g : ugvs_) consume_records(*g);

    for (size_t i = 0; i < ugvs_.size(); ++i)
      for (size_t j = i + 1; j < ugvs_.size(); ++j) {
        const bool close = distance(ugvs_[i]->true_pose.position(),
                                    ugvs_[j]->true_pose.position()) <= kContactDist;
        auto& flag = contact_[{ugvs_[i]->id, ugvs_[j]->id}];
        if (close && !flag)
          trace_.event(t, strf("CONTACT a=%d b=%d", ugvs_[i]->id, ugvs_[j]->id));
        flag = close;
      }
  }

  void consume_records(UgvAgent& g) {
    for (const auto& [key, rec] : g.store.all()) {
      if (key.topic == Topic::kScan) {
        if (key.origin == g.id || g.consumed.count(key)) continue;
        g.consumed.insert(key);
        const ReachabilityScan scan = parse_scan(rec.payload);
        if (cfg_.terrain_mode != TerrainMode::kClassRankFrozen)
          g.graph.integrate_scan(scan, true);
        if (cfg_.terrain_mode == TerrainMode::kLearned)
          g.learner.add_scan_labels(scan, g.map);
      } else if (key.topic == Topic::kMapCells) {
        if (g.consumed.count(key)) continue;
        g.consumed.insert(key);
        const MapCellsPayload mc = decode_map_cells(rec.payload);
        for (const auto& c : mc.cells) {
          const int cx = int(c.index % uint32_t(g.map.width()));
          const int cy = int(c.index / uint32_t(g.map.width()));
          if (!g.map.classes.in_bounds(cx, cy) || g.map.known.at(cx, cy)) continue;
          g.map.classes.at(cx, cy) = c.cls;
          g.map.color.at(cx, cy) = {c.r, c.g, c.b};
          g.map.elevation.at(cx, cy) = c.elevation;
          g.map.known.at(cx, cy) = 1;
        }
      }
    }
  }

  MissionConfig cfg_;
  const WorldModel& world_;
  TerrainParams tp_;
  CoordParams coordp_;
  SyncPolicy policy_;
  Vec2 base_pos_;
  ReplicaStore base_store_;
  std::vector<std::unique_ptr<UgvAgent>> ugvs_;
  std::unique_ptr<UavAgent> uav_;
  std::map<std::pair<int, int>, bool> contact_;
  TraceLog trace_;
};

}  // namespace

WorldModel world_for(const MissionConfig& cfg) {
  if (!cfg.world_dir.empty()) return load_world(cfg.world_dir);
  return generate_world(cfg.world, cfg.world_seed, cfg.clusters, cfg.roadblocks);
}

MissionResult run_mission(const MissionConfig& cfg, const WorldModel& world) {
  if (world.starts.empty()) throw std::runtime_error("mission: world has no start poses");
  Sim sim(cfg, world);
  return sim.run();
}

MissionResult run_mission(const MissionConfig& cfg) {
  const WorldModel world = world_for(cfg);
  return run_mission(cfg, world);
}

}  // namespace agnav
