#include <cmath>
#include <functional>
#include <set>

#include "core/rng.hpp"
#include "core/trav_graph.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace agnav;

namespace {

TravClassConfig drivable_config() {
  return {{kRoad, kSidewalk, kGrass}, {kBuilding, kVehicle, kPerson}};
}

/// Wide-open scan centered on a pose: everything within radius is certified.
ReachabilityScan open_scan(const Pose2& pose, double radius, bool obstacle_rim) {
  ReachabilityScan s;
  s.cols = 128;
  s.pose = pose;
  s.safe.assign(128, float(radius));
  s.obstacle.assign(128, obstacle_rim ? 1 : 0);
  return s;
}

/// Cheapest start-goal cost over non-infinite edges by exhaustive search.
double brute_force_cost(const TravGraph& g, int32_t s, int32_t t) {
  const auto& nodes = g.nodes();
  const auto& edges = g.edges();
  std::vector<double> best(nodes.size(), 1e18);
  best[s] = 0.0;
  // Bellman-Ford: no heap, no tie-breaking subtleties to mirror.
  for (size_t it = 0; it + 1 < nodes.size(); ++it) {
    bool changed = false;
    for (const GraphEdge& e : edges) {
      const double c = g.effective_edge_cost(e);
      if (c > 1e17) continue;
      if (best[e.a] + c < best[e.b]) best[e.b] = best[e.a] + c, changed = true;
      if (best[e.b] + c < best[e.a]) best[e.a] = best[e.b] + c, changed = true;
    }
    if (!changed) break;
  }
  return best[t];
}

}  // namespace

TEST_SUITE("trav_graph") {

TEST_CASE("placement covers every drivable cell and stays off obstacles") {
  SemanticOrthomap m = fixtures::make_map(60, 60, kRoad);
  fixtures::paint(m, 20, 20, 32, 32, kBuilding);
  TravGraph g{TravGraphParams{}, drivable_config()};
  REQUIRE(g.rebuild(m));

  REQUIRE(g.nodes().size() >= 2);
  for (const GraphNode& n : g.nodes()) {
    int cx, cy;
    REQUIRE(m.cell_of(n.pos, &cx, &cy));
    CHECK(m.classes.at(cx, cy) != kBuilding);
  }
  const auto& cover = g.coverage();
  for (int y = 0; y < 60; ++y) {
    for (int x = 0; x < 60; ++x) {
      if (m.classes.at(x, y) == kBuilding)
        CHECK(cover.at(x, y) == -1);
      else
        CHECK(cover.at(x, y) >= 0);
    }
  }

  TravGraph g2{TravGraphParams{}, drivable_config()};
  g2.rebuild(m);
  REQUIRE(g2.nodes().size() == g.nodes().size());
  for (size_t i = 0; i < g.nodes().size(); ++i) {
    CHECK(g2.nodes()[i].pos.x == g.nodes()[i].pos.x);
    CHECK(g2.nodes()[i].pos.y == g.nodes()[i].pos.y);
  }
}

TEST_CASE("growing the known map keeps the old graph intact") {
  SemanticOrthomap m = fixtures::make_map(80, 40, kRoad);
  fixtures::hide(m, 40, 0, 80, 40);
  TravGraph g{TravGraphParams{}, drivable_config()};
  REQUIRE(g.rebuild(m));
  const size_t n0 = g.nodes().size(), e0 = g.edges().size();
  REQUIRE(n0 >= 1);
  std::vector<Vec2> old_pos;
  for (const GraphNode& n : g.nodes()) old_pos.push_back(n.pos);

  for (int y = 0; y < 40; ++y)
    for (int x = 40; x < 80; ++x) m.known.at(x, y) = 1;
  CHECK(g.wants_rebuild(m));
  REQUIRE(g.rebuild(m));

  CHECK(g.nodes().size() > n0);
  CHECK(g.edges().size() > e0);
  for (size_t i = 0; i < n0; ++i) {
    CHECK(g.nodes()[i].pos.x == old_pos[i].x);
    CHECK(g.nodes()[i].pos.y == old_pos[i].y);
  }
  // Everything now known is covered again.
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 80; ++x) CHECK(g.coverage().at(x, y) >= 0);
  CHECK_FALSE(g.wants_rebuild(m));
}

TEST_CASE("a full wall splits the graph, a gap reconnects it") {
  SemanticOrthomap walled = fixtures::make_map(60, 60, kRoad);
  fixtures::paint(walled, 29, 0, 32, 60, kBuilding);
  TravGraph g{TravGraphParams{}, drivable_config()};
  g.rebuild(walled);
  GraphPlan cut = g.plan({7.0, 15.0}, {25.0, 15.0});
  CHECK_FALSE(cut.found);
  CHECK_FALSE(cut.off_graph);  // both sides have nodes, they just never meet

  SemanticOrthomap open = fixtures::make_map(60, 60, kRoad);
  fixtures::paint(open, 29, 0, 32, 26, kBuilding);
  fixtures::paint(open, 29, 34, 32, 60, kBuilding);
  TravGraph h{TravGraphParams{}, drivable_config()};
  h.rebuild(open);
  GraphPlan through = h.plan({7.0, 15.0}, {25.0, 15.0});
  REQUIRE(through.found);
  REQUIRE(through.nodes.size() >= 2);
  // The route threads the gap: some consecutive pair brackets the wall line.
  bool crosses = false;
  for (size_t i = 0; i + 1 < through.nodes.size(); ++i) {
    const double xa = h.nodes()[through.nodes[i]].pos.x;
    const double xb = h.nodes()[through.nodes[i + 1]].pos.x;
    if ((xa < 14.5) != (xb < 14.5)) crosses = true;
  }
  CHECK(crosses);
}

TEST_CASE("snapping falls back to a ring search and then gives up") {
  SemanticOrthomap m = fixtures::make_map(60, 60, kRoad);
  fixtures::paint(m, 20, 20, 40, 40, kBuilding);
  TravGraph g{TravGraphParams{}, drivable_config()};
  g.rebuild(m);

  CHECK(g.snap({5.0, 5.0}) >= 0);
  // Deep inside the building block: nearest covered cell is ~5m away.
  CHECK(g.snap({15.0, 15.0}) >= 0);

  SemanticOrthomap far = fixtures::make_map(120, 120, kRoad);
  fixtures::hide(far, 0, 0, 120, 80);
  TravGraph h{TravGraphParams{}, drivable_config()};
  h.rebuild(far);
  GraphPlan p = h.plan({30.0, 5.0}, {30.0, 55.0});
  CHECK_FALSE(p.found);
  CHECK(p.off_graph);
}

TEST_CASE("edge judgement against a scan star") {
  ReachabilityScan s = open_scan(Pose2{10.0, 10.0, 0.6}, 5.0, true);

  // Entirely inside the disc.
  CHECK(TravGraph::judge_edge(s, {11.0, 11.0}, {13.0, 9.0}, 3) == EdgeJudgement::kTrav);
  // One end far outside, boundary stop is an obstacle everywhere.
  CHECK(TravGraph::judge_edge(s, {11.0, 10.0}, {22.0, 10.0}, 3) == EdgeJudgement::kNotTrav);
  // Both ends beyond the rim on the same side: nothing to say.
  CHECK(TravGraph::judge_edge(s, {17.0, 10.0}, {22.0, 10.0}, 3) == EdgeJudgement::kUnknown);
  // Straight through: two crossings.
  CHECK(TravGraph::judge_edge(s, {2.0, 10.0}, {18.0, 10.0}, 3) == EdgeJudgement::kUnknown);
  // Degenerate edge.
  CHECK(TravGraph::judge_edge(s, {11.0, 11.0}, {11.0, 11.0}, 3) == EdgeJudgement::kUnknown);

  // Same exit, but the columns near the crossing ended in a gap instead of
  // an obstacle: the exit stops condemning the edge.
  ReachabilityScan gap = open_scan(Pose2{10.0, 10.0, 0.0}, 5.0, true);
  const int exit_col = gap.column_of(0.0);
  for (int o = -2; o <= 2; ++o)
    gap.obstacle[(exit_col + o + gap.cols) % gap.cols] = 0;
  CHECK(TravGraph::judge_edge(gap, {11.0, 10.0}, {22.0, 10.0}, 3) == EdgeJudgement::kUnknown);
}

TEST_CASE("observation state machine promotes, locks, and ignores hearsay") {
  SemanticOrthomap m = fixtures::make_map(60, 60, kRoad);
  TravGraphParams params;
  TravGraph g{params, drivable_config()};
  g.rebuild(m);
  REQUIRE(!g.edges().empty());

  // Aim scans at edge 0 specifically: sit on endpoint a, reach past b or not.
  const GraphEdge& e = g.edges()[0];
  const Vec2 a = g.nodes()[e.a].pos, b = g.nodes()[e.b].pos;
  const double len = distance(a, b);
  ReachabilityScan confirm = open_scan(Pose2{a.x, a.y, 0.0}, len + 2.0, true);
  ReachabilityScan deny = open_scan(Pose2{a.x, a.y, 0.0}, len * 0.5, true);

  const double model = g.edges()[0].model_cost;
  g.integrate_scan(confirm, false);
  CHECK(g.edges()[0].obs == EdgeObs::kNone);
  CHECK(g.effective_edge_cost(g.edges()[0]) == model);
  g.integrate_scan(confirm, true);  // remote confirmations count toward trav
  CHECK(g.edges()[0].obs == EdgeObs::kTrav);
  CHECK(g.effective_edge_cost(g.edges()[0]) ==
        doctest::Approx(params.edge_samples * -std::log(params.trav_prob)));

  // Remote denials: soft cost forever, never a lock.
  for (int i = 0; i < 10; ++i) g.integrate_scan(deny, true);
  CHECK_FALSE(g.edges()[0].locked);
  CHECK(g.edges()[0].obs == EdgeObs::kTrav);
  CHECK(g.effective_edge_cost(g.edges()[0]) ==
        doctest::Approx(params.edge_samples * -std::log(params.not_trav_prob)));

  // A later confirmation clears the hearsay.
  g.integrate_scan(confirm, false);
  CHECK(g.effective_edge_cost(g.edges()[0]) ==
        doctest::Approx(params.edge_samples * -std::log(params.trav_prob)));

  // Direct denials on a promoted edge need the longer tally, then lock.
  TravGraph::ScanStats st;
  int denials = 0;
  while (!g.edges()[0].locked) {
    st = g.integrate_scan(deny, false);
    REQUIRE(++denials <= params.lock_not_flip);
  }
  CHECK(denials == params.lock_not_flip);
  CHECK(st.locked >= 1);
  CHECK(g.edges()[0].obs == EdgeObs::kNotTrav);
  CHECK(g.effective_edge_cost(g.edges()[0]) > 1e17);

  // Locked is forever: confirmations no longer move it.
  g.integrate_scan(confirm, false);
  g.integrate_scan(confirm, false);
  CHECK(g.edges()[0].locked);
  CHECK(g.edges()[0].obs == EdgeObs::kNotTrav);
}

TEST_CASE("a fresh edge locks after the short tally") {
  SemanticOrthomap m = fixtures::make_map(60, 60, kRoad);
  TravGraphParams params;
  TravGraph g{params, drivable_config()};
  g.rebuild(m);
  REQUIRE(!g.edges().empty());
  const GraphEdge& e = g.edges()[0];
  const Vec2 a = g.nodes()[e.a].pos, b = g.nodes()[e.b].pos;
  ReachabilityScan deny = open_scan(Pose2{a.x, a.y, 0.0}, distance(a, b) * 0.5, true);
  for (int i = 0; i < params.lock_not; ++i) {
    CHECK_FALSE(g.edges()[0].locked);
    g.integrate_scan(deny, false);
  }
  CHECK(g.edges()[0].locked);
}

TEST_CASE("learned cost refresh renormalizes unknown samples") {
  SemanticOrthomap m = fixtures::make_map(40, 40, kRoad);
  TravGraph g{TravGraphParams{}, drivable_config()};
  g.rebuild(m);
  REQUIRE(!g.edges().empty());

  Grid<float> flat_prob(40, 40, 0.9f);
  g.refresh_costs_learned(flat_prob);
  for (const GraphEdge& e : g.edges())
    CHECK(e.model_cost == doctest::Approx(10 * -std::log(0.9)));

  Grid<float> unknown(40, 40, -1.0f);
  g.refresh_costs_learned(unknown);
  for (const GraphEdge& e : g.edges())
    CHECK(e.model_cost == doctest::Approx(10 * -std::log(0.5)));

  // Mixed: known cells at 0.2, the rest unknown; mean over known samples
  // scales to the full sample count.
  const GraphEdge& e = g.edges()[0];
  const Vec2 a = g.nodes()[e.a].pos, b = g.nodes()[e.b].pos;
  Grid<float> mixed(40, 40, -1.0f);
  int known_samples = 0;
  for (int i = 0; i < 10; ++i) {
    const Vec2 s = a + (b - a) * (i / 9.0);
    const int cx = int(std::floor(s.x / 0.5)), cy = int(std::floor(s.y / 0.5));
    if (i % 3 == 0) {
      mixed.at(cx, cy) = 0.2f;
      ++known_samples;
    }
  }
  REQUIRE(known_samples >= 2);
  g.refresh_costs_learned(mixed);
  // Every sampled known cell carries 0.2, so the renormalized mean is exact.
  CHECK(g.edges()[0].model_cost == doctest::Approx(10 * -std::log(0.2)));

  // Probabilities are clamped away from the log poles.
  Grid<float> ones(40, 40, 1.0f);
  g.refresh_costs_learned(ones);
  CHECK(g.edges()[0].model_cost == doctest::Approx(10 * -std::log(1.0 - 1e-4)));
}

TEST_CASE("class-rank costs order road under sidewalk under grass") {
  // Three horizontal bands: road south, sidewalk middle, grass north.
  SemanticOrthomap m = fixtures::make_map(80, 60, kRoad);
  fixtures::paint(m, 0, 20, 80, 40, kSidewalk);
  fixtures::paint(m, 0, 40, 80, 60, kGrass);
  TravGraph g{TravGraphParams{}, drivable_config()};
  g.rebuild(m);
  g.refresh_costs_class_rank(m);

  double best_road = 1e18, best_side = 1e18, best_grass = 1e18;
  for (const GraphEdge& e : g.edges()) {
    const Vec2 a = g.nodes()[e.a].pos, b = g.nodes()[e.b].pos;
    int worst = 0;
    for (int i = 0; i < 10; ++i) {
      const Vec2 s = a + (b - a) * (i / 9.0);
      worst = std::max(worst, int(m.class_at(s)));
    }
    if (worst == kRoad) best_road = std::min(best_road, e.model_cost);
    if (worst == kSidewalk) best_side = std::min(best_side, e.model_cost);
    if (worst == kGrass) best_grass = std::min(best_grass, e.model_cost);
  }
  REQUIRE(best_road < 1e17);
  REQUIRE(best_side < 1e17);
  REQUIRE(best_grass < 1e17);
  // Tier gaps dwarf the in-tier distance term.
  CHECK(best_road < 99.0);
  CHECK(best_side >= 99.0);
  CHECK(best_side < 9999.0);
  CHECK(best_grass >= 9999.0);

  // An edge with any obstacle or unknown sample is cut outright.
  SemanticOrthomap blocked = fixtures::make_map(80, 60, kRoad);
  fixtures::paint(blocked, 38, 0, 42, 60, kBuilding);
  TravGraph h{TravGraphParams{}, drivable_config()};
  h.rebuild(blocked);
  h.refresh_costs_class_rank(blocked);
  for (const GraphEdge& e : h.edges()) {
    const Vec2 a = h.nodes()[e.a].pos, b = h.nodes()[e.b].pos;
    bool touches = false;
    for (int i = 0; i < 10; ++i)
      if (blocked.class_at(a + (b - a) * (i / 9.0)) == kBuilding) touches = true;
    if (touches) CHECK(e.model_cost > 1e17);
  }
}

TEST_CASE("planning matches exhaustive search under random damage") {
  SemanticOrthomap m = fixtures::make_map(56, 56, kRoad);
  fixtures::paint(m, 24, 24, 34, 34, kBuilding);
  TravGraph g{TravGraphParams{}, drivable_config()};
  g.rebuild(m);
  g.refresh_costs_class_rank(m);
  REQUIRE(g.nodes().size() >= 4);
  REQUIRE(g.nodes().size() <= 24);

  Rng rng(41);
  int found_cases = 0;
  for (int trial = 0; trial < 400; ++trial) {
    for (GraphEdge& e : g.edges()) {
      e.locked = false;
      e.obs = EdgeObs::kNone;
      e.trav_count = 0;
      e.self_not_count = 0;
      e.remote_not_count = 0;
      const double roll = rng.uniform();
      if (roll < 0.25) {
        e.locked = true;
        e.obs = EdgeObs::kNotTrav;
      } else if (roll < 0.4) {
        e.remote_not_count = 1;
      } else if (roll < 0.55) {
        e.obs = EdgeObs::kTrav;
        e.trav_count = 2;
      }
    }
    const int32_t s = int32_t(rng.uniform_int(uint32_t(g.nodes().size())));
    const int32_t t = int32_t(rng.uniform_int(uint32_t(g.nodes().size())));
    GraphPlan p = g.plan(g.nodes()[s].pos, g.nodes()[t].pos);
    const double oracle = brute_force_cost(g, g.snap(g.nodes()[s].pos),
                                           g.snap(g.nodes()[t].pos));
    if (p.found) {
      ++found_cases;
      CHECK(p.cost == doctest::Approx(oracle));
      // The reported path exists, connects the snaps, and prices correctly.
      double along = 0.0;
      for (size_t i = 0; i + 1 < p.nodes.size(); ++i) {
        bool edge_ok = false;
        for (const GraphEdge& e : g.edges()) {
          if ((e.a == p.nodes[i] && e.b == p.nodes[i + 1]) ||
              (e.b == p.nodes[i] && e.a == p.nodes[i + 1])) {
            CHECK_FALSE(e.locked);
            along += g.effective_edge_cost(e);
            edge_ok = true;
            break;
          }
        }
        CHECK(edge_ok);
      }
      CHECK(along == doctest::Approx(p.cost));
    } else {
      CHECK(oracle > 1e17);
    }
  }
  CHECK(found_cases > 100);
}

}  // TEST_SUITE
