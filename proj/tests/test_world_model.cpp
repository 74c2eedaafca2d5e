#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <string>

#include "plc/plc.hpp"
#include "test_util.hpp"

using namespace plc;

TEST(ParseMap, AllOccupied) {
  const OccupancyGrid g = parse_map("###\n###\n###\n", 1.0);
  EXPECT_EQ(g.width(), 3);
  EXPECT_EQ(g.height(), 3);
  EXPECT_EQ(g.count(Cell::Occupied), 9u);
}

TEST(ParseMap, SingleFreeCellInTheMiddle) {
  const OccupancyGrid g = parse_map("###\n#.#\n###", 1.0);
  EXPECT_EQ(g.count(Cell::Free), 1u);
  EXPECT_FALSE(g.occupied({1, 1}));
}

TEST(ParseMap, FirstLineIsTopRow) {
  const OccupancyGrid g = parse_map("#..\n...\n", 1.0);
  EXPECT_TRUE(g.occupied({0, 1}));
  EXPECT_FALSE(g.occupied({0, 0}));
}

TEST(ParseMap, CorridorBandWidth) {
  // 2 m x 20 m at 0.05 m, two-cell walls.
  const std::string text = test::corridor_text(40, 400, 2);
  const OccupancyGrid g = parse_map(text, 0.05);
  ASSERT_EQ(g.width(), 400);
  ASSERT_EQ(g.height(), 40);
  // brute force over the text itself
  int free_rows = 0;
  std::size_t pos = 0;
  for (int r = 0; r < 40; ++r) {
    const std::string line = text.substr(pos, 400);
    pos += 401;
    if (line.find('.') != std::string::npos) ++free_rows;
  }
  int grid_rows = 0;
  for (int y = 0; y < g.height(); ++y) {
    if (!g.occupied({200, y})) ++grid_rows;
  }
  EXPECT_EQ(free_rows, 36);
  EXPECT_EQ(grid_rows, 36);
  EXPECT_NEAR(grid_rows * g.resolution(), 1.8, 1e-12);
}

TEST(ParseMap, RaggedRowsRejected) {
  EXPECT_THROW(parse_map("###\n##\n###\n", 1.0), FormatError);
}

TEST(ParseMap, IllegalCharacterReportsPosition) {
  try {
    parse_map("###\n#x#\n###\n", 1.0);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
  }
}

TEST(ParseMap, AsciiRoundTrip) {
  Rng rng(3);
  const OccupancyGrid g = test::random_grid(rng, 17, 11, 0.3);
  EXPECT_EQ(parse_map(to_ascii(g), g.resolution(), g.origin()), g);
}

TEST(DistanceTransform, SingleCellCorner) {
  OccupancyGrid g(5, 5, 1.0);
  g.set({2, 2}, Cell::Occupied);
  const DistanceField df = distance_transform(g);
  EXPECT_NEAR(df.distance({0, 0}), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(df.distance({4, 4}), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_EQ(df.distance({2, 2}), 0.0);
}

TEST(DistanceTransform, CorridorDistanceAndDirection) {
  const OccupancyGrid g = test::straight_corridor(4.0, 2.0);
  const DistanceField df = distance_transform(g);
  const CellIndex c = g.to_cell({2.0, 0.5});
  EXPECT_NEAR(df.distance(c), 0.5, 1e-12);
  EXPECT_NEAR(df.direction(c).x, 0.0, 1e-12);
  EXPECT_NEAR(df.direction(c).y, -1.0, 1e-12);
}

TEST(DistanceTransform, AllFreeIsUnbounded) {
  const OccupancyGrid g(4, 4, 1.0);
  EXPECT_THROW(distance_transform(g), ConfigError);
}

namespace {

double brute_distance(const OccupancyGrid& g, CellIndex c) {
  double best = std::numeric_limits<double>::infinity();
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      if (g.occupied({x, y})) best = std::min(best, std::hypot(double(x - c.x), double(y - c.y)));
    }
  }
  return best * g.resolution();
}

}  // namespace

TEST(DistanceTransform, MatchesBruteForceOnRandomGrids) {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int w = 1 + static_cast<int>(rng.uniform() * 30);
    const int h = 1 + static_cast<int>(rng.uniform() * 30);
    const double fill = trial == 0 ? 0.3 : rng.uniform(0.01, 0.6);
    OccupancyGrid g(w, h, 0.05);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (rng.bernoulli(fill)) g.set({x, y}, Cell::Occupied);
      }
    }
    if (g.count(Cell::Occupied) == 0) g.set({0, 0}, Cell::Occupied);
    const DistanceField df = distance_transform(g);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const CellIndex c{x, y};
        const double want = brute_distance(g, c);
        ASSERT_NEAR(df.distance(c), want, 1e-12) << "trial " << trial << " cell " << x << "," << y;
        const CellIndex n = df.nearest(c);
        ASSERT_TRUE(g.occupied(n));
        ASSERT_NEAR(std::hypot(double(n.x - x), double(n.y - y)) * g.resolution(), want, 1e-12);
        if (want > 0.0) {
          ASSERT_NEAR(norm(df.direction(c)), 1.0, 1e-12);
        }
      }
    }
  }
}

TEST(Raycast, ZeroLengthRayInFreeCell) {
  const OccupancyGrid g = test::straight_corridor(20.0, 2.0);
  EXPECT_TRUE(raycast_clear(g, {5.0, 1.0}, {5.0, 1.0}));
}

TEST(Raycast, CorridorAxisIsClear) {
  const OccupancyGrid g = test::straight_corridor(20.0, 2.0);
  EXPECT_TRUE(raycast_clear(g, {4.0, 1.0}, {14.0, 1.0}));
}

TEST(Raycast, BlindCornerOccludes) {
  ScenarioConfig c;
  c.scenario = ScenarioKind::BlindCorner;
  const Scenario s = build_scenario(c);
  // One point on each leg, the inner corner between them.
  const Vec2 a{1.0, 4.0};
  const Vec2 b{-3.0, 1.0};
  EXPECT_FALSE(raycast_clear(s.grid, a, b));
  // brute-force walk of the segment at a tenth of a cell
  bool hit = false;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    hit = hit || s.grid.occupied_at(a + (b - a) * t);
  }
  EXPECT_TRUE(hit);
}

TEST(Raycast, OutOfBoundsThrows) {
  const OccupancyGrid g = test::straight_corridor(4.0, 2.0);
  EXPECT_THROW(raycast_clear(g, {1.0, 1.0}, {50.0, 1.0}), std::out_of_range);
}

TEST(Raycast, Symmetric) {
  Rng rng(5);
  const OccupancyGrid g = test::random_grid(rng, 40, 40, 0.08);
  const Vec2 lo = g.extent_min();
  const Vec2 hi = g.extent_max();
  for (int i = 0; i < 3000; ++i) {
    const Vec2 a{rng.uniform(lo.x, hi.x - 1e-9), rng.uniform(lo.y, hi.y - 1e-9)};
    const Vec2 b{rng.uniform(lo.x, hi.x - 1e-9), rng.uniform(lo.y, hi.y - 1e-9)};
    ASSERT_EQ(raycast_clear(g, a, b), raycast_clear(g, b, a));
  }
}

TEST(Footprint, CenteredInCorridorIsFree) {
  const OccupancyGrid g = test::straight_corridor(6.0, 2.0);
  EXPECT_FALSE(footprint_collides(g, Pose2{3.0, 1.0, 0.0}, Footprint{}));
}

TEST(Footprint, TooCloseToWall) {
  const OccupancyGrid g = test::straight_corridor(6.0, 2.0);
  EXPECT_TRUE(footprint_collides(g, Pose2{3.0, 0.2, 0.0}, Footprint{}));
}

TEST(Footprint, RotatedInNarrowGap) {
  const Footprint fp;
  // Extent across the gap of a rectangle turned 45 degrees.
  const double extent = (fp.length + fp.width) * std::sqrt(0.5);
  ASSERT_GT(extent, 1.0);
  const OccupancyGrid g = test::straight_corridor(6.0, 1.0);
  EXPECT_TRUE(footprint_collides(g, Pose2{3.0, 0.5, kPi / 4}, fp));
  EXPECT_FALSE(footprint_collides(g, Pose2{3.0, 0.5, 0.0}, Footprint{0.6, 0.5}));
}

TEST(Footprint, TranslationByWholeCells) {
  Rng rng(9);
  const OccupancyGrid g = test::random_grid(rng, 60, 60, 0.02);
  const int sx = 7;
  const int sy = 4;
  OccupancyGrid shifted(60 + sx, 60 + sy, g.resolution(), g.origin(), Cell::Occupied);
  for (int y = 0; y < 60; ++y) {
    for (int x = 0; x < 60; ++x) shifted.set({x + sx, y + sy}, g.at({x, y}));
  }
  const Footprint fp;
  for (int i = 0; i < 500; ++i) {
    const Pose2 p{rng.uniform(0.5, 2.4), rng.uniform(0.5, 2.4), rng.uniform(-kPi, kPi)};
    const Pose2 q{p.x + sx * g.resolution(), p.y + sy * g.resolution(), p.theta};
    ASSERT_EQ(footprint_collides(g, p, fp), footprint_collides(shifted, q, fp)) << i;
  }
}

TEST(FootprintChecker, MatchesDenseSampling) {
  Rng rng(21);
  std::vector<OccupancyGrid> maps;
  maps.push_back(build_scenario(ScenarioConfig{}).grid);
  ScenarioConfig blind;
  blind.scenario = ScenarioKind::BlindCorner;
  maps.push_back(build_scenario(blind).grid);
  maps.push_back(test::random_grid(rng, 70, 50, 0.03));
  maps.push_back(test::random_grid(rng, 40, 40, 0.0));
  const Footprint fp;
  for (const OccupancyGrid& g : maps) {
    const DistanceField df = distance_transform(g);
    const FootprintChecker checker(g, df, fp);
    const Vec2 lo = g.extent_min();
    const Vec2 hi = g.extent_max();
    int hits = 0;
    for (int i = 0; i < 20000; ++i) {
      const Pose2 p{rng.uniform(lo.x, hi.x - 1e-9), rng.uniform(lo.y, hi.y - 1e-9),
                    rng.uniform(-kPi, kPi)};
      const bool want = footprint_collides(g, p, fp);
      hits += want;
      ASSERT_EQ(checker.collides(p), want) << p.x << "," << p.y << "," << p.theta;
    }
    EXPECT_GT(hits, 0);
  }
}
