#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "plc/plc.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace plc;

namespace {

void check_path_invariants(const PlannedPath& p, const PlannerContext& ctx, CellIndex s, CellIndex t) {
  ASSERT_FALSE(p.empty());
  EXPECT_EQ(p.nodes.front().cell, s);
  EXPECT_EQ(p.nodes.back().cell, t);
  for (std::size_t i = 1; i < p.nodes.size(); ++i) {
    const CellIndex a = p.nodes[i - 1].cell;
    const CellIndex b = p.nodes[i].cell;
    const int dx = std::abs(a.x - b.x);
    const int dy = std::abs(a.y - b.y);
    ASSERT_TRUE(dx <= 1 && dy <= 1 && dx + dy > 0);
    ASSERT_TRUE(admissible(ctx, b));
  }
}

}  // namespace

TEST(EdgeCost, BaseTermOnly) {
  const OccupancyGrid g = test::straight_corridor(6.0, 4.0);
  const DistanceField df = distance_transform(g);
  CostWeights w;
  w.w_lanes = 0.0;
  const PlannerContext ctx{g, df, nullptr, {}, w};
  const CellIndex a = g.to_cell({3.0, 2.0});
  EXPECT_NEAR(edge_cost(ctx, a, 0, {a.x + 1, a.y}), 0.05, 1e-15);
}

TEST(EdgeCost, AlignedLaneTermIsZero) {
  const OccupancyGrid g = test::straight_corridor(6.0, 4.0);
  const DistanceField df = distance_transform(g);
  LaneField lanes(g.width(), g.height(), {}, Handedness::KeepLeft);
  const CellIndex a = g.to_cell({3.0, 2.0});
  lanes.set(a, {1.0, 0.0});
  CostWeights w;
  w.w_lanes = 3.0;
  const PlannerContext with{g, df, &lanes, {}, w};
  w.w_lanes = 0.0;
  const PlannerContext without{g, df, &lanes, {}, w};
  EXPECT_EQ(edge_cost(with, a, 0, {a.x + 1, a.y}), edge_cost(without, a, 0, {a.x + 1, a.y}));
  EXPECT_NEAR(edge_cost(with, a, 4, {a.x - 1, a.y}) - edge_cost(without, a, 4, {a.x - 1, a.y}),
              3.0 * 1.0 * 0.05, 1e-15);
}

TEST(EdgeCost, PersonAtChildAddsFullBuffer) {
  const OccupancyGrid g = test::straight_corridor(6.0, 4.0);
  const DistanceField df = distance_transform(g);
  const CellIndex a = g.to_cell({3.0, 2.0});
  const CellIndex b{a.x + 1, a.y};
  const std::vector<Vec2> persons{g.to_world(b)};
  CostWeights w;
  w.w_person = 2.0;
  const PlannerContext with{g, df, nullptr, persons, w};
  const PlannerContext without{g, df, nullptr, {}, w};
  EXPECT_NEAR(edge_cost(with, a, 0, b) - edge_cost(without, a, 0, b), 2.0, 1e-12);
}

TEST(EdgeCost, TurnAndInflationTerms) {
  const OccupancyGrid g = test::straight_corridor(6.0, 2.0);
  const DistanceField df = distance_transform(g);
  CostWeights w;
  const PlannerContext ctx{g, df, nullptr, {}, w};
  const CellIndex a = g.to_cell({3.0, 1.0});
  const double straight = edge_cost(ctx, a, 0, {a.x + 1, a.y});
  const double turned = edge_cost(ctx, a, 2, {a.x + 1, a.y});
  EXPECT_NEAR(turned - straight, 2 * w.w_turn, 1e-12);
  // Child 0.35 m from the wall: inside the inflation ramp.
  const CellIndex near = g.to_cell({3.0, 0.36});
  const double wall = df.distance(near);
  const double infl = std::max(0.0, 1.0 - (wall - w.robot_half_width) / w.r_inflation);
  EXPECT_GT(infl, 0.0);
  EXPECT_NEAR(edge_cost(ctx, {near.x - 1, near.y}, 0, near), 0.05 + w.w_inflation * infl, 1e-12);
  // Closer than half the robot width: blocked.
  const CellIndex blocked = g.to_cell({3.0, 0.2});
  EXPECT_EQ(edge_cost(ctx, {blocked.x - 1, blocked.y + 1}, 0, blocked), kBlocked);
}

TEST(EdgeCost, NonNeighborIsContractError) {
  const OccupancyGrid g = test::straight_corridor(6.0, 2.0);
  const DistanceField df = distance_transform(g);
  const PlannerContext ctx{g, df, nullptr, {}, {}};
  EXPECT_THROW(edge_cost(ctx, {10, 20}, 0, {12, 20}), ContractError);
}

TEST(Plan, GoalEqualsStart) {
  const OccupancyGrid g = test::straight_corridor(6.0, 2.0);
  const DistanceField df = distance_transform(g);
  const PlannerContext ctx{g, df, nullptr, {}, {}};
  const PlannedPath p = plan(Pose2{3.0, 1.0, 0.0}, Pose2{3.01, 1.01, 0.0}, ctx);
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(p.total_cost, 0.0);
}

TEST(Plan, StraightAxialPath) {
  OccupancyGrid g(10, 10, 0.05, {0.0, 0.0});
  g.set({0, 0}, Cell::Occupied);
  const DistanceField df = distance_transform(g);
  CostWeights w;
  w.w_inflation = 0.0;
  w.robot_half_width = 0.0;
  const PlannerContext ctx{g, df, nullptr, {}, w};
  const PlannedPath p = plan(Pose2{g.to_world({2, 5}), 0.0}, Pose2{g.to_world({7, 5}), 0.0}, ctx);
  EXPECT_NEAR(p.total_cost, 5 * w.step_cost * 0.05, 1e-15);
  ASSERT_EQ(p.size(), 6u);
  for (const auto& n : p.nodes) EXPECT_EQ(n.cell.y, 5);
}

TEST(Plan, UnreachableReportsFrontier) {
  OccupancyGrid g = test::straight_corridor(6.0, 2.0);
  g.fill_rect({2.9, 0.0}, {3.1, 2.0}, Cell::Occupied);
  const DistanceField df = distance_transform(g);
  const PlannerContext ctx{g, df, nullptr, {}, {}};
  try {
    plan(Pose2{1.0, 1.0, 0.0}, Pose2{5.0, 1.0, 0.0}, ctx);
    FAIL() << "expected UnreachableError";
  } catch (const UnreachableError& e) {
    EXPECT_GT(e.frontier_size(), 0u);
  }
}

TEST(Plan, LaneFieldPullsPathToLaneLine) {
  const OccupancyGrid g = test::straight_corridor(8.0, 2.0);
  const DistanceField df = distance_transform(g);
  const LaneField lanes = generate_lane_field(g, df);
  CostWeights w;
  w.w_lanes = 3.0;
  const PlannerContext ctx{g, df, &lanes, {}, w};
  // Robot drives toward -x; its left wall is y = 0.
  const PlannedPath p = plan(Pose2{7.4, 1.0, kPi}, Pose2{0.6, 0.45, kPi}, ctx);
  int on_line = 0;
  for (const auto& n : p.nodes) {
    if (n.point.x < 5.0 && n.point.x > 1.0) {
      EXPECT_NEAR(n.point.y, 0.45, 0.025 + 1e-9);
      ++on_line;
    }
  }
  EXPECT_GT(on_line, 50);
  EXPECT_EQ(p.total_cost, test::dijkstra_cost(ctx, Pose2{7.4, 1.0, kPi}, Pose2{0.6, 0.45, kPi}));
}

TEST(Plan, MonotoneLanePull) {
  const OccupancyGrid g = test::straight_corridor(8.0, 2.0);
  const DistanceField df = distance_transform(g);
  const LaneField lanes = generate_lane_field(g, df);
  double prev = std::numeric_limits<double>::infinity();
  for (double wl : {0.0, 1.0, 3.0, 10.0}) {
    CostWeights w;
    w.w_lanes = wl;
    const PlannerContext ctx{g, df, &lanes, {}, w};
    const PlannedPath p = plan(Pose2{7.4, 1.0, kPi}, Pose2{0.6, 1.0, kPi}, ctx);
    double sum = 0.0;
    for (const auto& n : p.nodes) sum += n.point.y;
    const double mean = sum / static_cast<double>(p.size());
    EXPECT_LE(mean, prev + 1e-12) << "w_lanes " << wl;
    prev = mean;
  }
}

TEST(Plan, ZeroLaneWeightIgnoresLaneField) {
  Rng rng(31);
  const OccupancyGrid g = test::straight_corridor(5.0, 2.0);
  const DistanceField df = distance_transform(g);
  LaneField noise(g.width(), g.height(), {}, Handedness::KeepLeft);
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) noise.set({x, y}, unit_from_angle(rng.uniform(-kPi, kPi)));
  }
  CostWeights w;
  w.w_lanes = 0.0;
  const PlannerContext a{g, df, nullptr, {}, w};
  const PlannerContext b{g, df, &noise, {}, w};
  const PlannedPath pa = plan(Pose2{4.4, 1.0, kPi}, Pose2{0.6, 0.7, kPi}, a);
  const PlannedPath pb = plan(Pose2{4.4, 1.0, kPi}, Pose2{0.6, 0.7, kPi}, b);
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pa.nodes[i].cell, pb.nodes[i].cell);
  EXPECT_EQ(pa.total_cost, pb.total_cost);
}

TEST(Plan, MatchesDijkstraOnRandomGrids) {
  Rng rng(2024);
  const auto t0 = std::chrono::steady_clock::now();
  int compared = 0;
  const double wl_values[3] = {0.0, 3.0, 10.0};
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 20 + static_cast<int>(rng.uniform() * 41);
    const int h = 20 + static_cast<int>(rng.uniform() * 41);
    const double res = rng.uniform() < 0.5 ? 0.05 : 0.1;
    const OccupancyGrid g = test::blocky_grid(rng, w, h, res);
    const DistanceField df = distance_transform(g);
    const LaneField lanes = generate_lane_field(g, df);
    CostWeights cw;
    cw.w_lanes = wl_values[trial % 3];
    cw.w_person = rng.uniform(0.0, 3.0);
    cw.w_turn = rng.uniform(0.0, 1.0);
    cw.w_inflation = rng.uniform(0.0, 6.0);
    cw.r_buffer = rng.uniform(0.3, 2.0);
    cw.r_inflation = rng.uniform(0.05, 0.6);
    cw.robot_half_width = rng.uniform(0.0, 0.2);
    std::vector<Vec2> persons;
    const int np = static_cast<int>(rng.uniform() * 4);
    for (int i = 0; i < np; ++i) {
      persons.push_back({rng.uniform(0.0, w * res), rng.uniform(0.0, h * res)});
    }
    const PlannerContext ctx{g, df, &lanes, persons, cw};
    std::vector<CellIndex> free;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (admissible(ctx, {x, y})) free.push_back({x, y});
      }
    }
    ASSERT_GE(free.size(), 2u);
    const CellIndex s = free[static_cast<std::size_t>(rng.uniform() * free.size())];
    const CellIndex t = free[static_cast<std::size_t>(rng.uniform() * free.size())];
    const Pose2 start{g.to_world(s), rng.uniform(-kPi, kPi)};
    const Pose2 goal{g.to_world(t), 0.0};
    const double want = test::dijkstra_cost(ctx, start, goal);
    if (want == std::numeric_limits<double>::infinity()) {
      EXPECT_THROW(plan(start, goal, ctx), UnreachableError);
      continue;
    }
    const PlannedPath p = plan(start, goal, ctx);
    EXPECT_EQ(p.total_cost, want) << "trial " << trial << " diff " << (p.total_cost - want);
    check_path_invariants(p, ctx, s, t);
    ++compared;
  }
  EXPECT_GE(compared, 40);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 30.0);
}
