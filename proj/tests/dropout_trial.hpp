#pragma once

#include <algorithm>
#include <cstdint>

#include "plc/plc.hpp"

namespace plc::test {

/// Robot parked in the frontal corridor facing a person who walks in from
/// 12 m to 2 m and back out to 10 m. Activation is the first tick the gate is
/// on with the person inside d_activation (a false positive can switch it on
/// earlier, and it then correctly decays). From then on detections drop an
/// extra 10%. Returns true when the gate stays on at every later sensor tick
/// while the true separation is within d_activation.
inline bool dropout_trial(std::uint64_t seed, const ScenarioConfig& base = {},
                          double dropout = 0.1) {
  ScenarioConfig c = base;
  c.scenario = ScenarioKind::FrontalApproach;
  c.human_present = false;
  const Scenario world = build_scenario(c);
  const Pose2 robot{19.0, 1.0, kPi};
  SensorModel sensor = c.sensor;
  Rng rng(seed);
  Belief belief = Belief::from_probability(c.bayes.initial_probability);
  const double speed = c.human.preferred_speed;
  const double dt = sensor.period();
  double sep = 12.0;
  bool approaching = true;
  bool activated = false;
  for (long tick = 0; tick < 1000; ++tick) {
    const Vec2 person{robot.x - sep, 1.0};
    const Vec2 persons[1] = {person};
    const auto det = sense(robot, persons, world.grid, sensor, rng, tick);
    belief = bayes_step(belief, c.bayes, observed_ahead(det, robot, c.bayes));
    if (belief.gate_on && !activated && sep <= c.bayes.d_activation) {
      activated = true;
      sensor.forced_dropout = dropout;
    }
    if (activated && sep <= c.bayes.d_activation && !belief.gate_on) return false;
    if (approaching) {
      sep -= speed * dt;
      if (sep <= 2.0) approaching = false;
    } else {
      sep += speed * dt;
      if (sep >= 10.0) break;
    }
  }
  return activated;
}

}  // namespace plc::test
