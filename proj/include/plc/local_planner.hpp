#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "plc/collision.hpp"
#include "plc/errors.hpp"
#include "plc/geometry.hpp"
#include "plc/global_planner.hpp"

namespace plc {

struct VelocityLimits {
  double v_forward_max = 0.4;
  double v_backward_max = 0.0;
  double v_lateral_max = 0.2;
  double omega_max = 1.0;
  double a_linear_max = 0.5;
  double a_angular_max = 2.0;
  double control_dt = 0.1;
};

inline void validate(const VelocityLimits& l) {
  if (!(l.v_forward_max > 0) || !(l.v_lateral_max > 0) || !(l.omega_max > 0) ||
      !(l.a_linear_max > 0) || !(l.a_angular_max > 0) || !(l.control_dt > 0) ||
      l.v_backward_max < 0) {
    throw ConfigError("velocity limits must be positive");
  }
}

/// Robot-frame velocity command for the omnidirectional base.
struct VelocityCommand {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;

  double translation_speed() const { return std::hypot(vx, vy); }
  bool is_zero() const { return vx == 0.0 && vy == 0.0 && omega == 0.0; }
  bool operator==(const VelocityCommand&) const = default;
};

struct DwaParams {
  double horizon = 1.5;
  double sim_dt = 0.05;
  int samples_vx = 7;
  int samples_vy = 5;
  int samples_omega = 7;
  double w_path = 1.0;
  double w_heading = 0.3;
  double w_clearance = 0.5;
  double w_velocity = 0.2;
  double clearance_saturation = 0.5;
  /// Lateral distance from the path at which the proximity score reaches zero.
  double path_tolerance = 0.10;
  /// Share of along-path progress in the path term; the rest is proximity.
  double progress_share = 0.5;
  /// Spacing of the rollout samples averaged by the proximity term.
  double proximity_sample_period = 0.25;
  /// Short-range person avoidance: body radius plus margin around sensed people.
  double person_radius = 0.25;
  double person_margin = 0.05;
};

/// First-order integration of a robot-frame command.
inline Pose2 integrate(const Pose2& pose, const VelocityCommand& cmd, double dt) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return Pose2{pose.x + (cmd.vx * c - cmd.vy * s) * dt, pose.y + (cmd.vx * s + cmd.vy * c) * dt,
               pose.theta + cmd.omega * dt};
}

inline std::vector<Pose2> rollout(const Pose2& pose, const VelocityCommand& cmd, double horizon,
                                  double sim_dt) {
  const double ratio = horizon / sim_dt;
  const double steps = std::round(ratio);
  if (!(sim_dt > 0.0) || std::abs(ratio - steps) > 1e-9) {
    throw ContractError("rollout: horizon must be an integral multiple of sim_dt");
  }
  std::vector<Pose2> out;
  out.reserve(static_cast<std::size_t>(steps));
  Pose2 p = pose;
  for (int i = 0; i < static_cast<int>(steps); ++i) {
    p = integrate(p, cmd, sim_dt);
    out.push_back(p);
  }
  return out;
}

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n <= 1 || lo == hi) return {lo};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

inline std::pair<double, double> window(double current, double accel, double dt, double lo_abs,
                                        double hi_abs) {
  double lo = std::clamp(current - accel * dt, lo_abs, hi_abs);
  double hi = std::clamp(current + accel * dt, lo_abs, hi_abs);
  return {std::min(lo, hi), std::max(lo, hi)};
}

}  // namespace detail

/// Reachable command grid around `current`, clipped to the absolute limits and
/// to a translational speed of `speed_cap`. The zero command is always present.
inline std::vector<VelocityCommand> sample_window(const VelocityCommand& current,
                                                  const VelocityLimits& limits,
                                                  double speed_cap,
                                                  const DwaParams& params = {}) {
  if (speed_cap < 0.0) throw ContractError("sample_window: speed_cap must be non-negative");
  const double dt = limits.control_dt;
  const double cap_x = std::min(speed_cap, limits.v_forward_max);
  const double cap_back = std::min(speed_cap, limits.v_backward_max);
  const double cap_y = std::min(speed_cap, limits.v_lateral_max);
  const auto [vx_lo, vx_hi] = detail::window(current.vx, limits.a_linear_max, dt, -cap_back, cap_x);
  const auto [vy_lo, vy_hi] = detail::window(current.vy, limits.a_linear_max, dt, -cap_y, cap_y);
  const auto [w_lo, w_hi] = detail::window(current.omega, limits.a_angular_max, dt,
                                           -limits.omega_max, limits.omega_max);

  std::vector<VelocityCommand> out;
  std::set<std::tuple<double, double, double>> seen;
  auto add = [&](VelocityCommand c) {
    if (seen.emplace(c.vx, c.vy, c.omega).second) out.push_back(c);
  };
  for (double vx : detail::linspace(vx_lo, vx_hi, params.samples_vx)) {
    for (double vy : detail::linspace(vy_lo, vy_hi, params.samples_vy)) {
      for (double w : detail::linspace(w_lo, w_hi, params.samples_omega)) {
        VelocityCommand c{vx, vy, w};
        const double speed = c.translation_speed();
        if (speed > speed_cap) {
          const double k = speed_cap / speed;
          c.vx *= k;
          c.vy *= k;
        }
        add(c);
      }
    }
  }
  add(VelocityCommand{});
  return out;
}

/// Polyline view of a planned path with arc length and smoothed tangents.
class PathTracker {
 public:
  explicit PathTracker(const PlannedPath& path, int tangent_span = 3) {
    if (path.empty()) throw ContractError("path tracker: empty path");
    pts_.reserve(path.size());
    for (const auto& n : path.nodes) pts_.push_back(n.point);
    arc_.assign(pts_.size(), 0.0);
    for (std::size_t i = 1; i < pts_.size(); ++i) arc_[i] = arc_[i - 1] + distance(pts_[i - 1], pts_[i]);
    tangent_.resize(pts_.size());
    const int n = static_cast<int>(pts_.size());
    for (int i = 0; i < n; ++i) {
      const int a = std::max(0, i - tangent_span);
      const int b = std::min(n - 1, i + tangent_span);
      const Vec2 d = pts_[static_cast<std::size_t>(b)] - pts_[static_cast<std::size_t>(a)];
      tangent_[static_cast<std::size_t>(i)] =
          norm(d) > 0.0 ? std::atan2(d.y, d.x) : path.nodes[static_cast<std::size_t>(i)].heading;
    }
  }

  struct Projection {
    std::size_t segment = 0;
    double arc = 0.0;
    double lateral = 0.0;
    double tangent = 0.0;
  };

  std::size_t size() const { return pts_.size(); }
  double length() const { return arc_.back(); }
  Vec2 end() const { return pts_.back(); }

  /// Closest point over segments [first, last] (clamped to the path).
  Projection project(Vec2 p, std::size_t first = 0,
                     std::size_t last = std::numeric_limits<std::size_t>::max()) const {
    Projection best;
    if (pts_.size() == 1) {
      best.lateral = distance(p, pts_[0]);
      best.tangent = tangent_[0];
      return best;
    }
    const std::size_t n_seg = pts_.size() - 1;
    last = std::min(last, n_seg - 1);
    first = std::min(first, last);
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = first; j <= last; ++j) {
      const Vec2 a = pts_[j];
      const Vec2 ab = pts_[j + 1] - a;
      const double len2 = dot(ab, ab);
      const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
      const double d = distance(p, a + ab * t);
      if (d < best_d) {
        best_d = d;
        best.segment = j;
        best.arc = arc_[j] + t * std::sqrt(len2);
        best.lateral = d;
        best.tangent = t < 0.5 ? tangent_[j] : tangent_[j + 1];
      }
    }
    return best;
  }

 private:
  std::vector<Vec2> pts_;
  std::vector<double> arc_;
  std::vector<double> tangent_;
};

struct LocalPlannerContext {
  const FootprintChecker& checker;
  VelocityLimits limits = {};
  DwaParams params = {};
};

struct ScoredCommand {
  VelocityCommand command{};
  double score = -std::numeric_limits<double>::infinity();
  bool feasible = false;
  // Unweighted terms, each in [0, 1] except progress in [-1, 1].
  double progress = 0.0;
  double proximity = 0.0;
  double heading = 0.0;
  double clearance = 0.0;
  double velocity = 0.0;
};

namespace detail {

inline bool rollout_hits_person(std::span<const Pose2> poses, const Pose2& start,
                                const Footprint& fp, std::span<const Vec2> people, double radius) {
  for (const Vec2& q : people) {
    const double now = distance_to_footprint(start, fp, q);
    for (const auto& p : poses) {
      const double d = distance_to_footprint(p, fp, q);
      if (d < radius && d < now) return true;
    }
  }
  return false;
}

}  // namespace detail

/// Scores every candidate of the dynamic window; infeasible candidates keep
/// feasible == false. Exposed for testing and diagnostics.
inline std::vector<ScoredCommand> score_window(const LocalPlannerContext& ctx, const Pose2& pose,
                                               const VelocityCommand& current,
                                               const PlannedPath& path, double speed_cap,
                                               std::span<const Vec2> people = {}) {
  if (path.empty()) throw ContractError("select_command: empty path");
  const DwaParams& prm = ctx.params;
  const PathTracker tracker(path);
  const auto here = tracker.project(pose.position());
  const double res = ctx.checker.grid().resolution();
  const std::size_t reach = static_cast<std::size_t>(
      std::ceil((ctx.limits.v_forward_max * prm.horizon + 1.0) / res));
  const std::size_t first = here.segment > 5 ? here.segment - 5 : 0;
  const std::size_t last = here.segment + reach;
  const double progress_norm = ctx.limits.v_forward_max * prm.horizon;
  const double radius = prm.person_radius + prm.person_margin;
  const std::size_t stride = static_cast<std::size_t>(
      std::max(1L, std::lround(prm.proximity_sample_period / prm.sim_dt)));

  std::vector<ScoredCommand> out;
  for (const auto& cmd : sample_window(current, ctx.limits, speed_cap, prm)) {
    ScoredCommand sc{cmd};
    const auto poses = rollout(pose, cmd, prm.horizon, prm.sim_dt);
    bool hit = false;
    for (const auto& p : poses) {
      if (!ctx.checker.grid().in_bounds(p.position()) || ctx.checker.collides(p)) {
        hit = true;
        break;
      }
    }
    if (!hit && !people.empty()) {
      hit = detail::rollout_hits_person(poses, pose, ctx.checker.footprint(), people, radius);
    }
    if (!hit) {
      const Pose2& end = poses.back();
      const auto proj = tracker.project(end.position(), first, last);
      const double progress = std::clamp((proj.arc - here.arc) / progress_norm, -1.0, 1.0);
      // Proximity averaged over evenly spaced rollout samples ending at the
      // terminal pose, so reaching the path early scores higher than late.
      double proximity = 0.0;
      int samples = 0;
      for (std::size_t i = poses.size(); i > 0; i = i > stride ? i - stride : 0) {
        const double lat = i == poses.size()
                               ? proj.lateral
                               : tracker.project(poses[i - 1].position(), first, last).lateral;
        proximity += 1.0 - std::min(1.0, lat / prm.path_tolerance);
        ++samples;
      }
      proximity /= samples;
      const double path_score =
          prm.progress_share * progress + (1.0 - prm.progress_share) * proximity;
      const double heading_score = 0.5 * (1.0 + std::cos(end.theta - proj.tangent));
      const double clearance =
          std::min(ctx.checker.min_center_distance(poses), prm.clearance_saturation) /
          prm.clearance_saturation;
      const double velocity = cmd.translation_speed() / ctx.limits.v_forward_max;
      sc.score = prm.w_path * path_score + prm.w_heading * heading_score +
                 prm.w_clearance * clearance + prm.w_velocity * velocity;
      sc.feasible = true;
      sc.progress = progress;
      sc.proximity = proximity;
      sc.heading = heading_score;
      sc.clearance = clearance;
      sc.velocity = velocity;
    }
    out.push_back(sc);
  }
  return out;
}

/// Dynamic-window command selection. Returns the zero command when every
/// candidate rollout collides.
inline VelocityCommand select_command(const LocalPlannerContext& ctx, const Pose2& pose,
                                      const VelocityCommand& current, const PlannedPath& path,
                                      double speed_cap, std::span<const Vec2> people = {}) {
  const auto scored = score_window(ctx, pose, current, path, speed_cap, people);
  const ScoredCommand* best = nullptr;
  for (const auto& sc : scored) {
    if (sc.feasible && (best == nullptr || sc.score > best->score)) best = &sc;
  }
  return best ? best->command : VelocityCommand{};
}

}  // namespace plc
