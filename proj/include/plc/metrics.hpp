#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "plc/simulation.hpp"

namespace plc {

struct MetricsReport {
  std::optional<double> human_time;
  std::optional<double> human_efficiency;
  std::optional<double> robot_time;
  /// Raw center-to-center distance; NaN without a human.
  double min_separation = std::numeric_limits<double>::quiet_NaN();
  int collisions = 0;
  std::optional<double> activation_separation;
  std::optional<double> lane_change_complete_separation;
  double robot_path_length = 0.0;
  bool timeout = false;
  double duration = 0.0;
};

inline MetricsReport compute_metrics(const TrajectoryLog& log) {
  MetricsReport m;
  m.timeout = log.timeout;
  m.collisions = log.collision ? 1 : 0;
  if (log.ticks.empty()) return m;
  m.duration = log.ticks.back().t;

  bool gate_seen = false;
  bool lane_seen = false;
  for (std::size_t i = 0; i < log.ticks.size(); ++i) {
    const TickRecord& r = log.ticks[i];
    if (i > 0) m.robot_path_length += distance(log.ticks[i - 1].robot.position(), r.robot.position());
    if (!m.robot_time && r.robot_reached) m.robot_time = r.t;
    if (!log.has_human()) continue;
    if (!m.human_time && r.human_arrived) m.human_time = r.t;
    if (std::isnan(m.min_separation) || r.separation < m.min_separation) m.min_separation = r.separation;
    if (!gate_seen && r.gate) {
      gate_seen = true;
      m.activation_separation = r.separation;
    }
    if (gate_seen && !lane_seen && std::abs(r.robot_left_offset - log.d2) <= log.lane_tolerance) {
      lane_seen = true;
      m.lane_change_complete_separation = r.separation;
    }
  }
  if (!log.timeout && m.human_time && *m.human_time > 0.0) {
    const double free_time = log.human_route_length / log.human_preferred_speed;
    m.human_efficiency = free_time / *m.human_time;
  }
  return m;
}

}  // namespace plc
