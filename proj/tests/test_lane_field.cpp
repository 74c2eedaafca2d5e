#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "plc/plc.hpp"
#include "test_util.hpp"

using namespace plc;

namespace {

struct Corridor {
  OccupancyGrid grid = test::straight_corridor(6.0, 2.0);
  DistanceField dfield = distance_transform(grid);
};

}  // namespace

TEST(LaneField, KeepLeftDirectionsInCorridor) {
  Corridor c;
  const LaneField f = generate_lane_field(c.grid, c.dfield);
  const Vec2 low = f.at(c.grid.to_cell({3.0, 0.45}));
  const Vec2 high = f.at(c.grid.to_cell({3.0, 1.55}));
  EXPECT_NEAR(low.x, -1.0, 1e-12);
  EXPECT_NEAR(low.y, 0.0, 1e-12);
  EXPECT_NEAR(high.x, 1.0, 1e-12);
  EXPECT_NEAR(high.y, 0.0, 1e-12);
  // A robot moving along `low` has the y = 0 wall on its left.
  const Vec2 left = Pose2{0.0, 0.0, std::atan2(low.y, low.x)}.left();
  EXPECT_LT(left.y, -0.99);
}

TEST(LaneField, OccupiedCellsAreZero) {
  Corridor c;
  const LaneField f = generate_lane_field(c.grid, c.dfield);
  for (int y = 0; y < c.grid.height(); ++y) {
    for (int x = 0; x < c.grid.width(); ++x) {
      if (!c.grid.occupied({x, y})) continue;
      EXPECT_EQ(f.at({x, y}).x, 0.0);
      EXPECT_EQ(f.at({x, y}).y, 0.0);
    }
  }
}

TEST(LaneField, MagnitudeBoundedAndFullInBand) {
  Corridor c;
  const LaneFieldParams p;
  const LaneField f = generate_lane_field(c.grid, c.dfield, p);
  int in_band = 0;
  for (int y = 0; y < c.grid.height(); ++y) {
    for (int x = 0; x < c.grid.width(); ++x) {
      const CellIndex cell{x, y};
      const double m = norm(f.at(cell));
      ASSERT_LE(m, 1.0 + 1e-12);
      if (c.grid.occupied(cell)) continue;
      const double d = c.dfield.distance(cell);
      if (d >= p.d_min - 1e-9 && d <= p.d_wall + p.band + 1e-9) {
        ASSERT_NEAR(m, 1.0, 1e-12) << x << "," << y;
        ++in_band;
      }
      if (d < p.d_min - 1e-9) {
        ASSERT_EQ(m, 0.0);
      }
    }
  }
  EXPECT_GT(in_band, 0);
}

TEST(LaneField, FullMagnitudeCellsKeepWallOnLeft) {
  Corridor c;
  const LaneField f = generate_lane_field(c.grid, c.dfield);
  int checked = 0;
  for (int y = 0; y < c.grid.height(); ++y) {
    for (int x = 0; x < c.grid.width(); ++x) {
      const Vec2 v = f.at({x, y});
      if (std::abs(norm(v) - 1.0) > 1e-12) continue;
      const Vec2 n = c.dfield.direction({x, y});
      ASSERT_GT(v.x * n.y - v.y * n.x, 0.0);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(LaneField, KeepRightNegatesEveryVector) {
  ScenarioConfig cfg;
  cfg.scenario = ScenarioKind::BlindCorner;
  for (const OccupancyGrid& g : {Corridor{}.grid, build_scenario(cfg).grid}) {
    const DistanceField df = distance_transform(g);
    const LaneField l = generate_lane_field(g, df, {}, Handedness::KeepLeft);
    const LaneField r = generate_lane_field(g, df, {}, Handedness::KeepRight);
    for (int y = 0; y < g.height(); ++y) {
      for (int x = 0; x < g.width(); ++x) {
        ASSERT_EQ(r.at({x, y}).x, -l.at({x, y}).x);
        ASSERT_EQ(r.at({x, y}).y, -l.at({x, y}).y);
      }
    }
  }
}

TEST(LaneField, TapersTowardMedialAxis) {
  Corridor c;
  const LaneFieldParams p;
  const LaneField f = generate_lane_field(c.grid, c.dfield, p);
  double prev = 2.0;
  for (double y = 0.45; y <= 1.0 + 1e-9; y += 0.05) {
    const double m = norm(f.at(c.grid.to_cell({3.0, y + 1e-6})));
    EXPECT_LE(m, prev + 1e-12);
    prev = m;
  }
  EXPECT_NEAR(lane_magnitude(1.0, 1.0, p), p.medial_magnitude, 1e-12);
}

TEST(LaneField, RejectsNonPositiveDWall) {
  Corridor c;
  LaneFieldParams p;
  p.d_wall = 0.0;
  EXPECT_THROW(generate_lane_field(c.grid, c.dfield, p), ConfigError);
}

TEST(LaneCost, FixedTable) {
  struct Row {
    Vec2 v;
    Vec2 d;
  };
  const double s = std::sqrt(0.5);
  const std::array<Row, 20> table{{
      {{1, 0}, {1, 0}},
      {{1, 0}, {-1, 0}},
      {{0, 0}, {0, 1}},
      {{0.6, 0}, {1, 0}},
      {{0, 1}, {0, 1}},
      {{0, 1}, {0, -1}},
      {{1, 0}, {0, 1}},
      {{-1, 0}, {s, s}},
      {{s, s}, {s, s}},
      {{s, -s}, {s, s}},
      {{0.2, 0}, {-1, 0}},
      {{0.3, 0.4}, {0.6, 0.8}},
      {{-0.3, 0.4}, {0.8, -0.6}},
      {{0.5, 0.5}, {-s, -s}},
      {{0, -0.2}, {0, -1}},
      {{0.99, 0.1}, {1, 0}},
      {{-0.7, -0.7}, {-s, s}},
      {{0.1, 0.2}, {0.28, 0.96}},
      {{-1, 0}, {-1, 0}},
      {{0.8, -0.6}, {0.6, 0.8}},
  }};
  double worst = 0.0;
  for (const Row& r : table) {
    const double want = 0.5 - 0.5 * (r.v.x * r.d.x + r.v.y * r.d.y);
    worst = std::max(worst, std::abs(lane_cost(r.v, r.d) - want));
  }
  EXPECT_LE(worst, 1e-12);
  EXPECT_EQ(lane_cost({1, 0}, {1, 0}), 0.0);
  EXPECT_EQ(lane_cost({1, 0}, {-1, 0}), 1.0);
  EXPECT_EQ(lane_cost({0, 0}, {s, s}), 0.5);
  EXPECT_NEAR(lane_cost({0.6, 0}, {1, 0}), 0.2, 1e-15);
}

TEST(LaneCost, RangeAndComplement) {
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    const double r = std::sqrt(rng.uniform());
    const Vec2 v = unit_from_angle(rng.uniform(-kPi, kPi)) * r;
    const Vec2 d = unit_from_angle(rng.uniform(-kPi, kPi));
    const double a = lane_cost(v, d);
    ASSERT_GE(a, 0.0);
    ASSERT_LE(a, 1.0);
    ASSERT_NEAR(a + lane_cost(v, -d), 1.0, 1e-15);
  }
}

TEST(LaneCost, NonUnitDirectionIsAContractViolation) {
  EXPECT_THROW(lane_cost({1, 0}, {1.0 + 1e-6, 0.0}), ContractError);
  EXPECT_NO_THROW(lane_cost({1, 0}, {1.0 + 1e-10, 0.0}));
}
