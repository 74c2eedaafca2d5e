#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "plc/collision.hpp"
#include "plc/errors.hpp"
#include "plc/geometry.hpp"
#include "plc/occupancy_grid.hpp"
#include "plc/rng.hpp"

namespace plc {

/// Parametric stand-in for the camera/LiDAR person detector.
struct SensorModel {
  double max_range = 12.0;
  double fov_half_angle = kPi;
  double p_detect = 0.90;
  double p_false_positive_per_tick = 0.005;
  double position_noise_sigma = 0.10;
  double tick_rate = 10.0;
  /// Extra probability of dropping a true detection (used for robustness trials).
  double forced_dropout = 0.0;

  double period() const { return 1.0 / tick_rate; }
};

struct Detection {
  Vec2 position{};
  long tick = 0;
  bool false_positive = false;
};

inline void validate(const SensorModel& m) {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(m.p_detect) || !prob(m.p_false_positive_per_tick) || !prob(m.forced_dropout)) {
    throw ConfigError("sensor probabilities must lie in [0, 1]");
  }
  if (!(m.max_range > 0.0) || !(m.tick_rate > 0.0) || m.position_noise_sigma < 0.0) {
    throw ConfigError("sensor range, rate and noise must be positive");
  }
}

/// Range-, FOV- and occlusion-limited detections of `persons` with Gaussian
/// position noise, plus at most one false positive per tick.
inline std::vector<Detection> sense(const Pose2& robot, std::span<const Vec2> persons,
                                    const OccupancyGrid& grid, const SensorModel& model,
                                    Rng& rng, long tick = 0) {
  std::vector<Detection> out;
  const Vec2 origin = robot.position();
  auto clamp_to_map = [&](Vec2 p) {
    const Vec2 lo = grid.extent_min();
    const Vec2 hi = grid.extent_max();
    const double eps = 1e-9;
    return Vec2{std::clamp(p.x, lo.x + eps, hi.x - eps), std::clamp(p.y, lo.y + eps, hi.y - eps)};
  };

  for (const Vec2& person : persons) {
    const Vec2 rel = person - origin;
    const double range = norm(rel);
    if (range > model.max_range) continue;
    if (range > 0.0) {
      const double bearing = normalize_angle(std::atan2(rel.y, rel.x) - robot.theta);
      if (std::abs(bearing) > model.fov_half_angle) continue;
    }
    if (!grid.in_bounds(person) || !raycast_clear(grid, origin, person)) continue;
    if (!rng.bernoulli(model.p_detect)) continue;
    if (model.forced_dropout > 0.0 && rng.bernoulli(model.forced_dropout)) continue;
    Vec2 measured = person;
    if (model.position_noise_sigma > 0.0) {
      measured.x += rng.normal(0.0, model.position_noise_sigma);
      measured.y += rng.normal(0.0, model.position_noise_sigma);
    }
    out.push_back({clamp_to_map(measured), tick, false});
  }

  if (model.p_false_positive_per_tick > 0.0 && rng.bernoulli(model.p_false_positive_per_tick)) {
    constexpr int kTries = 64;
    for (int i = 0; i < kTries; ++i) {
      const double r = model.max_range * std::sqrt(rng.uniform());
      const double a = 2.0 * kPi * rng.uniform();
      const Vec2 p = origin + Vec2{r * std::cos(a), r * std::sin(a)};
      if (grid.in_bounds(p) && !grid.occupied_at(p)) {
        out.push_back({p, tick, true});
        break;
      }
    }
  }
  return out;
}

struct BayesParams {
  double d_activation = 8.0;
  double eps_on = 0.80;
  double eps_off = 0.10;
  double p_hit = 0.50;
  double p_miss_false = 0.02;
  double persistence = 0.995;
  /// Half-angle of the "in front of the robot" sector.
  double sector_half_angle = kPi / 3.0;
  double initial_probability = 0.5;
};

inline void validate(const BayesParams& p) {
  auto open_prob = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open_prob(p.p_hit) || !open_prob(p.p_miss_false) || !open_prob(p.initial_probability)) {
    throw ConfigError("bayes likelihoods and prior must lie strictly inside (0, 1)");
  }
  if (p.persistence < 0.0 || p.persistence > 1.0) throw ConfigError("persistence out of range");
  if (!(p.eps_off < p.eps_on)) throw ConfigError("eps_off must be below eps_on");
  if (!(p.d_activation > 0.0)) throw ConfigError("d_activation must be positive");
}

inline double probability_from_log_odds(double l) { return 1.0 / (1.0 + std::exp(-l)); }
inline double log_odds_from_probability(double p) { return std::log(p / (1.0 - p)); }

/// Belief that a person is ahead within d_activation, with a hysteresis gate.
struct Belief {
  double log_odds = 0.0;
  bool gate_on = false;

  double probability() const { return probability_from_log_odds(log_odds); }

  static Belief from_probability(double p, bool gate = false) {
    return {log_odds_from_probability(p), gate};
  }
};

/// One predict/update cycle of the binary Bayes filter.
inline Belief bayes_step(const Belief& belief, const BayesParams& p, bool observed) {
  const double b = belief.probability();
  const double predicted = p.persistence * b + (1.0 - p.persistence) * (1.0 - b);
  double l = log_odds_from_probability(std::clamp(predicted, 1e-12, 1.0 - 1e-12));
  l += observed ? std::log(p.p_hit / p.p_miss_false)
                : std::log((1.0 - p.p_hit) / (1.0 - p.p_miss_false));
  Belief next{l, belief.gate_on};
  const double posterior = next.probability();
  if (posterior >= p.eps_on) {
    next.gate_on = true;
  } else if (posterior <= p.eps_off) {
    next.gate_on = false;
  }
  return next;
}

/// True iff some detection lies within d_activation and inside the frontal sector.
inline bool observed_ahead(std::span<const Detection> detections, const Pose2& robot,
                           const BayesParams& p) {
  for (const auto& d : detections) {
    const Vec2 rel = d.position - robot.position();
    const double range = norm(rel);
    if (range > p.d_activation) continue;
    if (range == 0.0) return true;
    const double bearing = normalize_angle(std::atan2(rel.y, rel.x) - robot.theta);
    if (std::abs(bearing) <= p.sector_half_angle) return true;
  }
  return false;
}

/// Distance from the robot center to the nearest detection, if any.
inline std::optional<double> nearest_detection_distance(std::span<const Detection> detections,
                                                        Vec2 robot) {
  std::optional<double> best;
  for (const auto& d : detections) {
    const double r = distance(d.position, robot);
    if (!best || r < *best) best = r;
  }
  return best;
}

}  // namespace plc
