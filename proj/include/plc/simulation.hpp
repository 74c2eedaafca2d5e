#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "plc/behavior.hpp"
#include "plc/collision.hpp"
#include "plc/global_planner.hpp"
#include "plc/local_planner.hpp"
#include "plc/pedestrian.hpp"
#include "plc/perception.hpp"
#include "plc/rng.hpp"
#include "plc/scenario.hpp"

namespace plc {

struct TickRecord {
  double t = 0.0;
  Pose2 robot{};
  VelocityCommand cmd{};
  double speed_cap = 0.0;
  double w_lanes = 0.0;
  double belief = 0.0;
  bool gate = false;
  Vec2 human{};
  double human_speed = 0.0;
  /// True center-to-center robot/human distance (NaN without a human).
  double separation = std::numeric_limits<double>::quiet_NaN();
  int n_detections = 0;
  /// Robot centerline distance from its left wall.
  double robot_left_offset = 0.0;
  bool human_arrived = false;
  bool robot_reached = false;
};

struct PathRecord {
  double t = 0.0;
  std::vector<Vec2> points;
};

struct TrajectoryLog {
  std::vector<TickRecord> ticks;
  std::vector<PathRecord> paths;
  double sim_dt = 0.05;
  double human_route_length = 0.0;
  double human_preferred_speed = 1.25;
  double d2 = 0.45;
  double lane_tolerance = 0.05;
  std::size_t sensor_ticks = 0;
  std::size_t replans = 0;
  std::size_t failed_replans = 0;
  bool timeout = false;
  bool collision = false;
  std::string collision_kind;

  bool has_human() const { return human_route_length > 0.0; }
};

namespace detail {

inline int ticks_per(double period, double dt) { return static_cast<int>(std::lround(period / dt)); }

}  // namespace detail

/// Runs one scenario on an already built world.
inline TrajectoryLog run(const ScenarioConfig& config, const Scenario& world) {
  const HarnessParams& hp = config.harness;
  const double dt = hp.sim_dt;
  const int sensor_every = detail::ticks_per(config.sensor.period(), dt);
  const int replan_every = detail::ticks_per(hp.replan_period, dt);
  const int control_every = detail::ticks_per(config.limits.control_dt, dt);
  const long max_ticks = std::lround(hp.max_sim_time / dt);

  TrajectoryLog log;
  log.sim_dt = dt;
  log.d2 = config.behavior_params.d2;
  log.lane_tolerance = hp.lane_tolerance;
  log.human_preferred_speed = config.human.preferred_speed;

  Rng rng(config.seed);
  const FootprintChecker checker(world.grid, world.dfield, config.robot);
  const LocalPlannerContext local{checker, config.limits, config.local_planner};
  Behavior behavior(config.behavior, world.placement, world.corridor_width,
                    config.behavior_params);

  const bool has_human = world.human_route.size() >= 2;
  HumanState human = make_human(world.human_route, config.human);
  log.human_route_length = has_human ? human.route_length() : 0.0;

  Pose2 robot = world.robot_start;
  VelocityCommand cmd{};
  Belief belief = Belief::from_probability(config.bayes.initial_probability);
  BehaviorDirective directive = behavior.directive(std::nullopt, false);
  std::vector<Detection> detections;
  std::optional<PlannedPath> path;
  bool robot_reached = false;
  bool collided = false;

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    robot_reached = robot_reached || world.reached(robot.position(), hp.goal_tolerance);

    if (!collided) {
      if (k % sensor_every == 0) {
        const std::vector<Vec2> persons =
            has_human ? std::vector<Vec2>{human.position} : std::vector<Vec2>{};
        detections = sense(robot, persons, world.grid, config.sensor, rng,
                           static_cast<long>(log.sensor_ticks));
        ++log.sensor_ticks;
        belief = bayes_step(belief, config.bayes, observed_ahead(detections, robot, config.bayes));
        directive =
            behavior.directive(nearest_detection_distance(detections, robot.position()),
                               belief.gate_on);
      }
      if (k % replan_every == 0) {
        ++log.replans;
        std::vector<Vec2> persons;
        for (const auto& d : detections) persons.push_back(d.position);
        CostWeights weights = config.planner;
        weights.w_lanes = directive.w_lanes;
        const PlannerContext ctx{world.grid, world.dfield, &world.lanes, persons, weights};
        try {
          path = plan(robot, world.goal_pose(directive.nominal_offset), ctx);
          PathRecord rec{t, {}};
          rec.points.reserve(path->size());
          for (const auto& n : path->nodes) rec.points.push_back(n.point);
          log.paths.push_back(std::move(rec));
        } catch (const UnreachableError&) {
          ++log.failed_replans;
        } catch (const ContractError&) {
          ++log.failed_replans;
        }
      }
      if (k % control_every == 0) {
        if (robot_reached || !path) {
          cmd = VelocityCommand{};
        } else {
          std::vector<Vec2> near;
          if (has_human && distance(human.position, robot.position()) <= hp.short_range) {
            near.push_back(human.position);
          }
          cmd = select_command(local, robot, cmd, *path, directive.speed_cap, near);
        }
      }
    }

    TickRecord rec;
    rec.t = t;
    rec.robot = robot;
    rec.cmd = cmd;
    rec.speed_cap = directive.speed_cap;
    rec.w_lanes = directive.w_lanes;
    rec.belief = belief.probability();
    rec.gate = belief.gate_on;
    rec.n_detections = static_cast<int>(detections.size());
    rec.robot_left_offset = world.left_offset(robot.position());
    rec.robot_reached = robot_reached;
    if (has_human) {
      rec.human = human.position;
      rec.human_speed = norm(human.velocity);
      rec.separation = distance(human.position, robot.position());
      rec.human_arrived = human.arrived;
    }
    log.ticks.push_back(rec);

    if (collided) break;
    if ((!has_human || human.arrived) && robot_reached) break;
    if (k >= max_ticks) {
      log.timeout = true;
      break;
    }

    robot = integrate(robot, cmd, dt);
    if (has_human) human = step_human(human, robot, config.robot, world.grid, dt, config.human);

    if (!world.grid.in_bounds(robot.position()) || checker.collides(robot)) {
      collided = true;
      log.collision = true;
      log.collision_kind = "wall";
    } else if (has_human &&
               distance_to_footprint(robot, config.robot, human.position) < config.human.radius) {
      collided = true;
      log.collision = true;
      log.collision_kind = "human";
    }
  }
  return log;
}

inline TrajectoryLog run(const ScenarioConfig& config) {
  return run(config, build_scenario(config));
}

}  // namespace plc
