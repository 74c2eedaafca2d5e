#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "plc/errors.hpp"

namespace plc {

enum class BehaviorMode { Constant, Stop, SlowDown, PLC };
enum class Placement { LeftSide, Center };

inline std::string_view to_string(BehaviorMode m) {
  switch (m) {
    case BehaviorMode::Constant: return "constant";
    case BehaviorMode::Stop: return "stop";
    case BehaviorMode::SlowDown: return "slow";
    case BehaviorMode::PLC: return "plc";
  }
  return "constant";
}

inline BehaviorMode behavior_from_string(std::string_view s) {
  if (s == "constant") return BehaviorMode::Constant;
  if (s == "stop") return BehaviorMode::Stop;
  if (s == "slow" || s == "slowdown") return BehaviorMode::SlowDown;
  if (s == "plc") return BehaviorMode::PLC;
  throw ConfigError("unknown behavior: " + std::string(s));
}

struct BehaviorParams {
  double nominal_speed = 0.4;
  double slow_speed = 0.15;
  double trigger_distance = 1.2;
  /// Added to the trigger on measured separation: one sensor period of closing
  /// at walking speed plus detection noise, so the cap is already in force when
  /// the true separation reaches trigger_distance.
  double trigger_lead = 0.45;
  double release_hysteresis = 0.2;
  /// Consecutive sensor ticks without any detection before a stop/slow latch opens.
  int absent_release_ticks = 10;
  double d1 = 0.65;
  double d2 = 0.45;
  double w_lanes_active = 3.0;
};

inline void validate(const BehaviorParams& p) {
  if (p.nominal_speed < 0.0 || p.nominal_speed > 0.4) {
    throw ConfigError("nominal_speed must lie in [0, 0.4]");
  }
  if (p.slow_speed < 0.0 || p.slow_speed > p.nominal_speed) {
    throw ConfigError("slow_speed must lie in [0, nominal_speed]");
  }
  if (!(p.trigger_distance > 0.0) || p.trigger_lead < 0.0 || p.release_hysteresis < 0.0 ||
      p.absent_release_ticks < 1) {
    throw ConfigError("invalid stop/slow trigger parameters");
  }
  if (!(p.d1 > 0.0) || !(p.d2 > 0.0) || p.w_lanes_active < 0.0) {
    throw ConfigError("invalid running offsets or lane weight");
  }
}

struct BehaviorDirective {
  double speed_cap = 0.4;
  double w_lanes = 0.0;
  /// Robot centerline distance from the left wall.
  double nominal_offset = 0.0;

  bool operator==(const BehaviorDirective&) const = default;
};

/// Directive layer for one run. Holds the stop/slow hysteresis latch; every
/// other output is a pure function of the current inputs.
class Behavior {
 public:
  Behavior(BehaviorMode mode, Placement placement, double corridor_width,
           BehaviorParams params = {})
      : mode_(mode), placement_(placement), center_(0.5 * corridor_width), params_(params) {}

  BehaviorMode mode() const { return mode_; }
  Placement placement() const { return placement_; }
  bool latched() const { return latched_; }

  /// `separation` is the distance to the nearest raw detection this sensor
  /// tick, or empty when nothing was detected.
  BehaviorDirective directive(std::optional<double> separation, bool gate_on) {
    BehaviorDirective d;
    d.speed_cap = params_.nominal_speed;
    d.nominal_offset = placement_ == Placement::LeftSide ? params_.d1 : center_;
    switch (mode_) {
      case BehaviorMode::Constant:
        break;
      case BehaviorMode::Stop:
        update_latch(separation);
        if (latched_) d.speed_cap = 0.0;
        break;
      case BehaviorMode::SlowDown:
        update_latch(separation);
        if (latched_) d.speed_cap = params_.slow_speed;
        break;
      case BehaviorMode::PLC:
        d.nominal_offset = center_;
        if (gate_on) {
          d.w_lanes = params_.w_lanes_active;
          d.nominal_offset = params_.d2;
        }
        break;
    }
    return d;
  }

 private:
  void update_latch(std::optional<double> separation) {
    if (!separation) {
      if (++absent_ticks_ >= params_.absent_release_ticks) latched_ = false;
      return;
    }
    absent_ticks_ = 0;
    const double on = params_.trigger_distance + params_.trigger_lead;
    if (*separation <= on) {
      latched_ = true;
    } else if (*separation > on + params_.release_hysteresis) {
      latched_ = false;
    }
  }

  BehaviorMode mode_;
  Placement placement_;
  double center_;
  BehaviorParams params_;
  bool latched_ = false;
  int absent_ticks_ = 0;
};

}  // namespace plc
