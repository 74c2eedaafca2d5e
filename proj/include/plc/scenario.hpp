#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plc/behavior.hpp"
#include "plc/distance_field.hpp"
#include "plc/errors.hpp"
#include "plc/geometry.hpp"
#include "plc/global_planner.hpp"
#include "plc/lane_field.hpp"
#include "plc/local_planner.hpp"
#include "plc/occupancy_grid.hpp"
#include "plc/pedestrian.hpp"
#include "plc/perception.hpp"

namespace plc {

enum class ScenarioKind { FrontalApproach, BlindCorner };
enum class Turn { AtoB, APrimeToB };

inline std::string_view to_string(ScenarioKind k) {
  return k == ScenarioKind::FrontalApproach ? "frontal" : "blind";
}
inline std::string_view to_string(Turn t) { return t == Turn::AtoB ? "ab" : "aprime"; }
inline std::string_view to_string(Placement p) {
  return p == Placement::LeftSide ? "left" : "center";
}

inline ScenarioKind scenario_from_string(std::string_view s) {
  if (s == "frontal") return ScenarioKind::FrontalApproach;
  if (s == "blind") return ScenarioKind::BlindCorner;
  throw ConfigError("unknown scenario: " + std::string(s));
}
inline Turn turn_from_string(std::string_view s) {
  if (s == "ab") return Turn::AtoB;
  if (s == "aprime") return Turn::APrimeToB;
  throw ConfigError("unknown turn: " + std::string(s));
}
inline Placement placement_from_string(std::string_view s) {
  if (s == "left") return Placement::LeftSide;
  if (s == "center") return Placement::Center;
  throw ConfigError("unknown placement: " + std::string(s));
}

struct WorldParams {
  double resolution = 0.05;
  double corridor_width = 2.0;
  /// Frontal Approach corridor length.
  double corridor_length = 20.0;
  /// Blind Corner: length of each leg measured from the corner apex.
  double leg_length = 10.0;
  /// Blind Corner: robot start distance from the apex along its leg.
  double robot_start_from_apex = 8.0;
  double human_route_length = 15.0;
  /// Frontal Approach: robot-to-human distance at t = 0.
  double initial_separation = 15.0;
  /// Distance kept between the robot's start/goal and the corridor end caps.
  double end_margin = 1.0;
};

struct HarnessParams {
  double sim_dt = 0.05;
  double replan_period = 0.5;
  double max_sim_time = 120.0;
  /// The robot has reached its goal once it is this close to (or past) the goal line.
  double goal_tolerance = 0.1;
  /// People closer than this to the robot center are avoided by the local planner
  /// (short-range depth sensing).
  double short_range = 2.0;
  /// Tolerance to the d2 line for the lane-change completion metric.
  double lane_tolerance = 0.05;
};

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::FrontalApproach;
  Turn turn = Turn::AtoB;
  BehaviorMode behavior = BehaviorMode::PLC;
  std::uint64_t seed = 0;
  bool human_present = true;
  /// Overrides the Table 1 running placement when set.
  std::optional<Placement> placement;

  Footprint robot{};
  WorldParams world{};
  SensorModel sensor{};
  BayesParams bayes{};
  CostWeights planner{};
  LaneFieldParams lanes{};
  VelocityLimits limits{};
  DwaParams local_planner{};
  BehaviorParams behavior_params{};
  HumanParams human{};
  HarnessParams harness{};
};

/// Table 1 starting placement: side-running baselines in the frontal corridor,
/// center start for PLC and every Blind Corner task.
inline Placement default_placement(ScenarioKind kind, BehaviorMode mode) {
  if (kind == ScenarioKind::FrontalApproach && mode != BehaviorMode::PLC) {
    return Placement::LeftSide;
  }
  return Placement::Center;
}

inline Placement effective_placement(const ScenarioConfig& c) {
  return c.placement.value_or(default_placement(c.scenario, c.behavior));
}

namespace detail {

inline bool is_multiple(double a, double b) {
  const double r = a / b;
  return std::abs(r - std::round(r)) < 1e-9 && std::round(r) >= 1.0;
}

}  // namespace detail

inline void validate(const ScenarioConfig& c) {
  validate(c.sensor);
  validate(c.bayes);
  validate(c.planner);
  validate(c.limits);
  validate(c.behavior_params);
  validate(c.human);
  if (!(c.lanes.d_wall > 0.0)) throw ConfigError("lanes.d_wall must be positive");
  if (!(c.robot.length > 0.0) || !(c.robot.width > 0.0)) {
    throw ConfigError("robot footprint must be positive");
  }
  const WorldParams& w = c.world;
  if (!(w.resolution > 0.0) || !(w.corridor_width > c.robot.width)) {
    throw ConfigError("corridor must be wider than the robot");
  }
  const HarnessParams& h = c.harness;
  if (!(h.sim_dt > 0.0) || !(h.max_sim_time > 0.0)) throw ConfigError("invalid sim_dt/max_sim_time");
  if (!detail::is_multiple(h.replan_period, h.sim_dt) ||
      !detail::is_multiple(c.sensor.period(), h.sim_dt) ||
      !detail::is_multiple(c.limits.control_dt, h.sim_dt)) {
    throw ConfigError("sim_dt must divide the replan, sensor and control periods");
  }
  if (!detail::is_multiple(c.local_planner.horizon, c.local_planner.sim_dt)) {
    throw ConfigError("local_planner.horizon must be a multiple of its sim_dt");
  }
  if (c.scenario == ScenarioKind::FrontalApproach) {
    if (c.turn != Turn::AtoB) throw ConfigError("turn variants apply to the Blind Corner only");
    if (!(w.initial_separation > c.bayes.d_activation)) {
      throw ConfigError("initial_separation must exceed d_activation");
    }
    if (w.initial_separation + 2.0 * w.end_margin > w.corridor_length + 1e-9 ||
        w.human_route_length > w.initial_separation + 1e-9) {
      throw ConfigError("corridor too short for the configured separation and route");
    }
  } else {
    const double half_route = 0.5 * w.human_route_length;
    const double need = std::max({w.robot_start_from_apex, half_route, 2.0}) + w.end_margin;
    if (w.leg_length < need) throw ConfigError("blind corner legs too short");
    if (c.behavior != BehaviorMode::PLC && c.turn == Turn::APrimeToB) {
      throw ConfigError("the A'-B turn is only run with the PLC behavior");
    }
  }
}

/// Built world for one run.
struct Scenario {
  OccupancyGrid grid;
  DistanceField dfield;
  LaneField lanes;
  Pose2 robot_start;
  /// Robot route along the corridor centerline, start to end.
  std::vector<Vec2> robot_route;
  std::vector<Vec2> human_route;
  Placement placement = Placement::Center;
  double corridor_width = 2.0;

  /// Point on the route's final cross-section at `offset` from the robot's left wall.
  Vec2 goal_point(double offset) const {
    const Vec2 end = robot_route.back();
    const Vec2 dir = normalized(end - robot_route[robot_route.size() - 2]);
    return end + rotate_ccw90(dir) * (0.5 * corridor_width - offset);
  }

  Pose2 goal_pose(double offset) const {
    const Vec2 dir = robot_route.back() - robot_route[robot_route.size() - 2];
    return Pose2{goal_point(offset), std::atan2(dir.y, dir.x)};
  }

  /// Distance of `p` from the robot's left wall, measured across the nearest
  /// route segment.
  double left_offset(Vec2 p) const {
    double best = std::numeric_limits<double>::infinity();
    double offset = 0.0;
    for (std::size_t i = 1; i < robot_route.size(); ++i) {
      const Vec2 a = robot_route[i - 1];
      const Vec2 ab = robot_route[i] - a;
      const double len2 = dot(ab, ab);
      const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
      const double d = distance(p, a + ab * t);
      if (d < best) {
        best = d;
        offset = 0.5 * corridor_width - dot(p - a, rotate_ccw90(normalized(ab)));
      }
    }
    return offset;
  }

  /// True once the robot center is within `tol` of, or beyond, the goal line.
  bool reached(Vec2 p, double tol) const {
    const Vec2 end = robot_route.back();
    const Vec2 dir = normalized(end - robot_route[robot_route.size() - 2]);
    return dot(p - end, dir) >= -tol;
  }
};

namespace detail {

/// Grid covering [lo, hi] with cell centers on both boundaries, everything
/// occupied except cells whose centers lie strictly inside one of `rooms`.
inline OccupancyGrid carve(Vec2 lo, Vec2 hi, double res,
                           const std::vector<std::pair<Vec2, Vec2>>& rooms) {
  const int w = static_cast<int>(std::lround((hi.x - lo.x) / res)) + 1;
  const int h = static_cast<int>(std::lround((hi.y - lo.y) / res)) + 1;
  OccupancyGrid grid(w, h, res, lo - Vec2{0.5 * res, 0.5 * res}, Cell::Occupied);
  const double eps = 1e-6;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Vec2 c = grid.to_world({x, y});
      for (const auto& [a, b] : rooms) {
        if (c.x > a.x + eps && c.x < b.x - eps && c.y > a.y + eps && c.y < b.y - eps) {
          grid.set({x, y}, Cell::Free);
          break;
        }
      }
    }
  }
  return grid;
}

}  // namespace detail

/// Frontal Approach: corridor x in [0, L], y in [0, W]; the robot drives toward
/// -x with its left wall at y = 0 while the human walks toward +x on the
/// centerline. Blind Corner: an L of two corridors of width W meeting at a
/// right angle, apex (corridor-center intersection) at (W/2, W/2). The robot
/// leg runs along +y; the other leg runs toward -x (A-B, a right turn for the
/// robot) or +x (A'-B, a left turn).
inline Scenario build_scenario(const ScenarioConfig& config) {
  validate(config);
  const WorldParams& w = config.world;
  const double W = w.corridor_width;
  const double res = w.resolution;
  const double c = 0.5 * W;

  Scenario s;
  s.corridor_width = W;
  s.placement = effective_placement(config);
  const double start_offset = s.placement == Placement::LeftSide ? config.behavior_params.d1 : c;

  if (config.scenario == ScenarioKind::FrontalApproach) {
    const double L = w.corridor_length;
    s.grid = detail::carve({0.0, 0.0}, {L, W}, res, {{{0.0, 0.0}, {L, W}}});
    const double robot_x = L - w.end_margin;
    s.robot_route = {{robot_x, c}, {w.end_margin, c}};
    s.robot_start = Pose2{robot_x, start_offset, kPi};
    const double a = robot_x - w.initial_separation;
    s.human_route = {{a, c}, {a + w.human_route_length, c}};
  } else {
    const double leg = w.leg_length;
    const double sign = config.turn == Turn::AtoB ? -1.0 : 1.0;
    const Vec2 apex{c, c};
    std::vector<std::pair<Vec2, Vec2>> rooms;
    rooms.push_back({{0.0, 0.0}, {W, c + leg}});
    Vec2 lo{0.0, 0.0};
    Vec2 hi{W, c + leg};
    if (sign < 0) {
      rooms.push_back({{c - leg, 0.0}, {W, W}});
      lo.x = c - leg;
    } else {
      rooms.push_back({{0.0, 0.0}, {c + leg, W}});
      hi.x = c + leg;
    }
    s.grid = detail::carve(lo, hi, res, rooms);
    const Vec2 start{c, c + w.robot_start_from_apex};
    const Vec2 end{c + sign * (leg - w.end_margin), c};
    s.robot_route = {start, apex, end};
    // Heading -y; the left wall is at x = W.
    s.robot_start = Pose2{Vec2{W - start_offset, start.y}, -0.5 * kPi};
    const double half = 0.5 * w.human_route_length;
    s.human_route = {{c + sign * half, c}, apex, {c, c + half}};
  }
  if (!config.human_present) s.human_route.clear();

  s.dfield = distance_transform(s.grid);
  s.lanes = generate_lane_field(s.grid, s.dfield, config.lanes, Handedness::KeepLeft);
  return s;
}

/// Swaps in a different occupancy map (same frame as the built grid) and
/// rebuilds the distance and lane fields. Routes and start pose are kept, so
/// they must land on free cells.
inline Scenario with_map(Scenario s, OccupancyGrid grid, const ScenarioConfig& config) {
  if (grid.resolution() != s.grid.resolution()) throw ConfigError("map resolution differs from world.resolution");
  auto check = [&](Vec2 p, const char* what) {
    if (!grid.in_bounds(p) || grid.occupied_at(p)) {
      throw ConfigError(std::string("map blocks the ") + what);
    }
  };
  check(s.robot_start.position(), "robot start");
  for (const Vec2& p : s.robot_route) check(p, "robot route");
  for (const Vec2& p : s.human_route) check(p, "human route");
  s.grid = std::move(grid);
  s.dfield = distance_transform(s.grid);
  s.lanes = generate_lane_field(s.grid, s.dfield, config.lanes, Handedness::KeepLeft);
  return s;
}

/// ASCII map file ('#' occupied, '.' free, first line = top row), placed at the
/// origin of the scenario's own grid.
inline Scenario load_map_scenario(const std::string& path, const ScenarioConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open map", path);
  std::ostringstream text;
  text << in.rdbuf();
  Scenario s = build_scenario(config);
  const Vec2 origin = s.grid.origin();
  return with_map(std::move(s), parse_map(text.str(), config.world.resolution, origin), config);
}

}  // namespace plc
