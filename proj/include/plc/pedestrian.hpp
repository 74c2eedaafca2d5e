#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "plc/errors.hpp"
#include "plc/geometry.hpp"
#include "plc/occupancy_grid.hpp"

namespace plc {

struct HumanParams {
  double preferred_speed = 1.25;
  /// Free space kept between the human center and the robot footprint while passing.
  double lateral_clearance_min = 0.40;
  /// Narrowest robot-to-wall gap the human is willing to walk through.
  double stop_gap_min = 0.70;
  double radius = 0.25;
  /// Free space kept between the human disc and a wall when side-stepping.
  double wall_clearance = 0.30;
  double lookahead_length = 3.0;
  double lookahead_width = 1.2;
  double accel = 1.0;
  double decel = 1.0;
  /// Time constant of the lateral offset controller.
  double lateral_time_constant = 0.5;
  double max_lateral_speed = 0.6;
  double waypoint_tolerance = 0.3;
  /// Along-path distance behind the human the robot must reach before the
  /// side-step is released.
  double release_behind = 0.3;
};

inline void validate(const HumanParams& p) {
  if (!(p.preferred_speed > 0.0) || !(p.radius > 0.0) || !(p.accel > 0.0) || !(p.decel > 0.0) ||
      !(p.lateral_time_constant > 0.0) || !(p.max_lateral_speed > 0.0) ||
      !(p.waypoint_tolerance > 0.0) || !(p.lookahead_length > 0.0) ||
      !(p.lookahead_width > 0.0)) {
    throw ConfigError("human parameters must be positive");
  }
  if (p.lateral_clearance_min < 0.0 || p.stop_gap_min < 0.0 || p.wall_clearance < 0.0) {
    throw ConfigError("human clearances must be non-negative");
  }
}

struct HumanState {
  Vec2 position{};
  Vec2 velocity{};
  double speed = 0.0;
  std::vector<Vec2> route;
  /// Index of the waypoint currently walked toward.
  std::size_t next = 1;
  /// Lateral offset from the current route segment the human steers to (+ = left).
  double lateral_target = 0.0;
  /// +1 passing with the robot on the right, -1 on the left, 0 not passing.
  int passing = 0;
  bool waiting = false;
  bool arrived = false;

  double route_length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < route.size(); ++i) len += distance(route[i - 1], route[i]);
    return len;
  }
};

/// Human standing at the first waypoint, already walking at preferred speed.
inline HumanState make_human(std::vector<Vec2> route, const HumanParams& p = {}) {
  HumanState s;
  s.route = std::move(route);
  if (s.route.empty()) {
    s.arrived = true;
    return s;
  }
  s.position = s.route.front();
  s.next = 1;
  if (s.route.size() < 2) {
    s.arrived = true;
    return s;
  }
  s.speed = p.preferred_speed;
  s.velocity = normalized(s.route[1] - s.route[0]) * s.speed;
  return s;
}

namespace detail {

inline double march_to_wall(const OccupancyGrid& grid, Vec2 from, Vec2 dir, double max_len) {
  const double step = 0.5 * grid.resolution();
  for (double s = step; s <= max_len; s += step) {
    if (grid.occupied_at(from + dir * s)) return s;
  }
  return max_len;
}

}  // namespace detail

/// Rule-based reactive pedestrian. Deterministic.
inline HumanState step_human(HumanState s, const Pose2& robot, const Footprint& fp,
                             const OccupancyGrid& grid, double dt, const HumanParams& p = {}) {
  if (!(dt > 0.0)) throw ContractError("step_human: dt must be positive");
  if (s.arrived || s.next >= s.route.size()) {
    s.arrived = true;
    s.velocity = {};
    s.speed = 0.0;
    return s;
  }

  const Vec2 seg_from = s.route[s.next - 1];
  const Vec2 target = s.route[s.next];
  const Vec2 u = normalized(target - seg_from);
  const Vec2 n = rotate_ccw90(u);
  const double lateral_now = dot(s.position - seg_from, n);

  // Robot footprint extents in the walking frame, relative to the human.
  double a_min = std::numeric_limits<double>::infinity();
  double a_max = -a_min;
  double l_min = a_min;
  double l_max = -a_min;
  for (const Vec2& c : footprint_corners(robot, fp)) {
    const Vec2 r = c - s.position;
    a_min = std::min(a_min, dot(r, u));
    a_max = std::max(a_max, dot(r, u));
    l_min = std::min(l_min, dot(r, n));
    l_max = std::max(l_max, dot(r, n));
  }

  const double wall_left = detail::march_to_wall(grid, s.position, n, 5.0);
  const double wall_right = detail::march_to_wall(grid, s.position, -n, 5.0);
  const double edge_margin = p.radius + p.wall_clearance;
  const double half_box = 0.5 * p.lookahead_width;
  const bool in_box =
      a_max >= 0.0 && a_min <= p.lookahead_length && l_max >= -half_box && l_min <= half_box;
  const bool clear = l_min >= p.lateral_clearance_min || l_max <= -p.lateral_clearance_min;

  if (s.passing != 0 && a_max < -p.release_behind) s.passing = 0;

  double desired_speed = p.preferred_speed;
  s.waiting = false;
  if (s.passing == 0 && in_box && !clear) {
    const double gap_left = wall_left - l_max;
    const double gap_right = l_min + wall_right;
    if (gap_left >= p.stop_gap_min) {
      s.passing = 1;
    } else if (gap_right >= p.stop_gap_min) {
      s.passing = -1;
    } else {
      s.waiting = true;
      desired_speed = 0.0;
    }
  }

  if (s.passing == 1) {
    const double gap = wall_left - l_max;
    const double want = std::min(l_max + p.lateral_clearance_min, wall_left - edge_margin);
    const double floor = l_max + std::min(p.lateral_clearance_min, 0.5 * gap);
    s.lateral_target = lateral_now + std::max(want, floor);
  } else if (s.passing == -1) {
    const double gap = l_min + wall_right;
    const double want = std::max(l_min - p.lateral_clearance_min, -wall_right + edge_margin);
    const double ceil = l_min - std::min(p.lateral_clearance_min, 0.5 * gap);
    s.lateral_target = lateral_now + std::min(want, ceil);
  } else {
    s.lateral_target = 0.0;
  }

  // Do not walk into the robot while the side-step is still under way.
  const bool overlaps = l_min < p.radius && l_max > -p.radius;
  if (overlaps && a_max > 0.0 && a_min < p.radius + p.stop_gap_min) desired_speed = 0.0;

  if (s.speed < desired_speed) {
    s.speed = std::min(desired_speed, s.speed + p.accel * dt);
  } else {
    s.speed = std::max(desired_speed, s.speed - p.decel * dt);
  }

  // Side-steps stay possible while standing; the along-route component takes
  // whatever speed is left.
  const double v_lat = std::clamp((s.lateral_target - lateral_now) / p.lateral_time_constant,
                                  -p.max_lateral_speed, p.max_lateral_speed);
  const double v_along = std::sqrt(std::max(0.0, s.speed * s.speed - v_lat * v_lat));
  s.velocity = u * v_along + n * v_lat;

  const bool final_leg = s.next + 1 == s.route.size();
  const double remaining = dot(target - s.position, u);
  if (final_leg && v_along > 0.0 && remaining <= v_along * dt) {
    const double frac = std::max(0.0, remaining) / v_along;
    s.position = s.position + s.velocity * frac;
    s.arrived = true;
    s.next = s.route.size();
    return s;
  }

  const Vec2 moved = s.position + s.velocity * dt;
  if (!grid.occupied_at(moved)) s.position = moved;
  if (!final_leg && distance(s.position, target) <= p.waypoint_tolerance) {
    ++s.next;
  }
  return s;
}

}  // namespace plc
