#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "plc/errors.hpp"
#include "plc/scenario.hpp"

namespace plc {

namespace detail {

using ojson = nlohmann::ordered_json;

/// Reads `key` into `out` when present; rejects wrong types with the key path.
template <typename T>
void read(const ojson& j, const char* section, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config: ") + section + "." + key + " has the wrong type");
  }
}

inline void check_keys(const ojson& j, const char* section, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(std::string("config: section ") + section + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* name : keys) known = known || k == name;
    if (!known) throw ConfigError(std::string("config: unknown key ") + section + "." + k);
  }
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const ScenarioConfig& c) {
  detail::ojson j;
  j["scenario"] = to_string(c.scenario);
  j["turn"] = to_string(c.turn);
  j["behavior"] = to_string(c.behavior);
  j["seed"] = c.seed;
  j["human_present"] = c.human_present;
  j["placement"] = c.placement ? detail::ojson(to_string(*c.placement)) : detail::ojson(nullptr);
  j["robot"] = {{"length", c.robot.length}, {"width", c.robot.width}};
  j["world"] = {{"resolution", c.world.resolution},
                {"corridor_width", c.world.corridor_width},
                {"corridor_length", c.world.corridor_length},
                {"leg_length", c.world.leg_length},
                {"robot_start_from_apex", c.world.robot_start_from_apex},
                {"human_route_length", c.world.human_route_length},
                {"initial_separation", c.world.initial_separation},
                {"end_margin", c.world.end_margin}};
  j["sensor"] = {{"max_range", c.sensor.max_range},
                 {"fov_half_angle", c.sensor.fov_half_angle},
                 {"p_detect", c.sensor.p_detect},
                 {"p_false_positive_per_tick", c.sensor.p_false_positive_per_tick},
                 {"position_noise_sigma", c.sensor.position_noise_sigma},
                 {"tick_rate", c.sensor.tick_rate},
                 {"forced_dropout", c.sensor.forced_dropout}};
  j["bayes"] = {{"d_activation", c.bayes.d_activation},
                {"eps_on", c.bayes.eps_on},
                {"eps_off", c.bayes.eps_off},
                {"p_hit", c.bayes.p_hit},
                {"p_miss_false", c.bayes.p_miss_false},
                {"persistence", c.bayes.persistence},
                {"sector_half_angle", c.bayes.sector_half_angle},
                {"initial_probability", c.bayes.initial_probability}};
  j["planner"] = {{"w_person", c.planner.w_person},
                  {"w_turn", c.planner.w_turn},
                  {"w_inflation", c.planner.w_inflation},
                  {"step_cost", c.planner.step_cost},
                  {"r_buffer", c.planner.r_buffer},
                  {"r_inflation", c.planner.r_inflation},
                  {"robot_half_width", c.planner.robot_half_width}};
  j["lanes"] = {{"d_wall", c.lanes.d_wall},
                {"band", c.lanes.band},
                {"d_min", c.lanes.d_min},
                {"medial_magnitude", c.lanes.medial_magnitude},
                {"max_probe", c.lanes.max_probe}};
  j["local_planner"] = {{"v_forward_max", c.limits.v_forward_max},
                        {"v_backward_max", c.limits.v_backward_max},
                        {"v_lateral_max", c.limits.v_lateral_max},
                        {"omega_max", c.limits.omega_max},
                        {"a_linear_max", c.limits.a_linear_max},
                        {"a_angular_max", c.limits.a_angular_max},
                        {"control_dt", c.limits.control_dt},
                        {"horizon", c.local_planner.horizon},
                        {"sim_dt", c.local_planner.sim_dt},
                        {"samples_vx", c.local_planner.samples_vx},
                        {"samples_vy", c.local_planner.samples_vy},
                        {"samples_omega", c.local_planner.samples_omega},
                        {"w_path", c.local_planner.w_path},
                        {"w_heading", c.local_planner.w_heading},
                        {"w_clearance", c.local_planner.w_clearance},
                        {"w_velocity", c.local_planner.w_velocity},
                        {"clearance_saturation", c.local_planner.clearance_saturation},
                        {"path_tolerance", c.local_planner.path_tolerance},
                        {"progress_share", c.local_planner.progress_share},
                        {"proximity_sample_period", c.local_planner.proximity_sample_period},
                        {"person_radius", c.local_planner.person_radius},
                        {"person_margin", c.local_planner.person_margin}};
  j["behavior_params"] = {{"nominal_speed", c.behavior_params.nominal_speed},
                          {"slow_speed", c.behavior_params.slow_speed},
                          {"trigger_distance", c.behavior_params.trigger_distance},
                          {"trigger_lead", c.behavior_params.trigger_lead},
                          {"release_hysteresis", c.behavior_params.release_hysteresis},
                          {"absent_release_ticks", c.behavior_params.absent_release_ticks},
                          {"d1", c.behavior_params.d1},
                          {"d2", c.behavior_params.d2},
                          {"w_lanes_active", c.behavior_params.w_lanes_active}};
  j["human"] = {{"preferred_speed", c.human.preferred_speed},
                {"lateral_clearance_min", c.human.lateral_clearance_min},
                {"stop_gap_min", c.human.stop_gap_min},
                {"radius", c.human.radius},
                {"wall_clearance", c.human.wall_clearance},
                {"lookahead_length", c.human.lookahead_length},
                {"lookahead_width", c.human.lookahead_width},
                {"accel", c.human.accel},
                {"decel", c.human.decel},
                {"lateral_time_constant", c.human.lateral_time_constant},
                {"max_lateral_speed", c.human.max_lateral_speed},
                {"waypoint_tolerance", c.human.waypoint_tolerance},
                {"release_behind", c.human.release_behind}};
  j["harness"] = {{"sim_dt", c.harness.sim_dt},
                  {"replan_period", c.harness.replan_period},
                  {"max_sim_time", c.harness.max_sim_time},
                  {"goal_tolerance", c.harness.goal_tolerance},
                  {"short_range", c.harness.short_range},
                  {"lane_tolerance", c.harness.lane_tolerance}};
  return j;
}

/// Overlays `j` on `base`. Missing keys keep their current values; unknown keys
/// and wrong types are rejected. The result is validated.
inline ScenarioConfig config_from_json(const nlohmann::ordered_json& j, ScenarioConfig base = {}) {
  using detail::check_keys;
  using detail::read;
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(j, "config",
             {"scenario", "turn", "behavior", "seed", "human_present", "placement", "robot", "world",
              "sensor", "bayes", "planner", "lanes", "local_planner", "behavior_params", "human",
              "harness"});
  ScenarioConfig c = base;
  std::string text;
  if (j.contains("scenario")) {
    read(j, "config", "scenario", text);
    c.scenario = scenario_from_string(text);
  }
  if (j.contains("turn")) {
    read(j, "config", "turn", text);
    c.turn = turn_from_string(text);
  }
  if (j.contains("behavior")) {
    read(j, "config", "behavior", text);
    c.behavior = behavior_from_string(text);
  }
  read(j, "config", "seed", c.seed);
  read(j, "config", "human_present", c.human_present);
  if (j.contains("placement")) {
    if (j["placement"].is_null()) {
      c.placement.reset();
    } else {
      read(j, "config", "placement", text);
      c.placement = placement_from_string(text);
    }
  }
  if (j.contains("robot")) {
    const auto& s = j["robot"];
    check_keys(s, "robot", {"length", "width"});
    read(s, "robot", "length", c.robot.length);
    read(s, "robot", "width", c.robot.width);
  }
  if (j.contains("world")) {
    const auto& s = j["world"];
    check_keys(s, "world",
               {"resolution", "corridor_width", "corridor_length", "leg_length",
                "robot_start_from_apex", "human_route_length", "initial_separation", "end_margin"});
    read(s, "world", "resolution", c.world.resolution);
    read(s, "world", "corridor_width", c.world.corridor_width);
    read(s, "world", "corridor_length", c.world.corridor_length);
    read(s, "world", "leg_length", c.world.leg_length);
    read(s, "world", "robot_start_from_apex", c.world.robot_start_from_apex);
    read(s, "world", "human_route_length", c.world.human_route_length);
    read(s, "world", "initial_separation", c.world.initial_separation);
    read(s, "world", "end_margin", c.world.end_margin);
  }
  if (j.contains("sensor")) {
    const auto& s = j["sensor"];
    check_keys(s, "sensor",
               {"max_range", "fov_half_angle", "p_detect", "p_false_positive_per_tick",
                "position_noise_sigma", "tick_rate", "forced_dropout"});
    read(s, "sensor", "max_range", c.sensor.max_range);
    read(s, "sensor", "fov_half_angle", c.sensor.fov_half_angle);
    read(s, "sensor", "p_detect", c.sensor.p_detect);
    read(s, "sensor", "p_false_positive_per_tick", c.sensor.p_false_positive_per_tick);
    read(s, "sensor", "position_noise_sigma", c.sensor.position_noise_sigma);
    read(s, "sensor", "tick_rate", c.sensor.tick_rate);
    read(s, "sensor", "forced_dropout", c.sensor.forced_dropout);
  }
  if (j.contains("bayes")) {
    const auto& s = j["bayes"];
    check_keys(s, "bayes",
               {"d_activation", "eps_on", "eps_off", "p_hit", "p_miss_false", "persistence",
                "sector_half_angle", "initial_probability"});
    read(s, "bayes", "d_activation", c.bayes.d_activation);
    read(s, "bayes", "eps_on", c.bayes.eps_on);
    read(s, "bayes", "eps_off", c.bayes.eps_off);
    read(s, "bayes", "p_hit", c.bayes.p_hit);
    read(s, "bayes", "p_miss_false", c.bayes.p_miss_false);
    read(s, "bayes", "persistence", c.bayes.persistence);
    read(s, "bayes", "sector_half_angle", c.bayes.sector_half_angle);
    read(s, "bayes", "initial_probability", c.bayes.initial_probability);
  }
  if (j.contains("planner")) {
    const auto& s = j["planner"];
    check_keys(s, "planner",
               {"w_person", "w_turn", "w_inflation", "step_cost", "r_buffer", "r_inflation",
                "robot_half_width"});
    read(s, "planner", "w_person", c.planner.w_person);
    read(s, "planner", "w_turn", c.planner.w_turn);
    read(s, "planner", "w_inflation", c.planner.w_inflation);
    read(s, "planner", "step_cost", c.planner.step_cost);
    read(s, "planner", "r_buffer", c.planner.r_buffer);
    read(s, "planner", "r_inflation", c.planner.r_inflation);
    read(s, "planner", "robot_half_width", c.planner.robot_half_width);
  }
  if (j.contains("lanes")) {
    const auto& s = j["lanes"];
    check_keys(s, "lanes", {"d_wall", "band", "d_min", "medial_magnitude", "max_probe"});
    read(s, "lanes", "d_wall", c.lanes.d_wall);
    read(s, "lanes", "band", c.lanes.band);
    read(s, "lanes", "d_min", c.lanes.d_min);
    read(s, "lanes", "medial_magnitude", c.lanes.medial_magnitude);
    read(s, "lanes", "max_probe", c.lanes.max_probe);
  }
  if (j.contains("local_planner")) {
    const auto& s = j["local_planner"];
    check_keys(s, "local_planner",
               {"v_forward_max", "v_backward_max", "v_lateral_max", "omega_max", "a_linear_max",
                "a_angular_max", "control_dt", "horizon", "sim_dt", "samples_vx", "samples_vy",
                "samples_omega", "w_path", "w_heading", "w_clearance", "w_velocity",
                "clearance_saturation", "path_tolerance", "progress_share",
                "proximity_sample_period", "person_radius", "person_margin"});
    read(s, "local_planner", "v_forward_max", c.limits.v_forward_max);
    read(s, "local_planner", "v_backward_max", c.limits.v_backward_max);
    read(s, "local_planner", "v_lateral_max", c.limits.v_lateral_max);
    read(s, "local_planner", "omega_max", c.limits.omega_max);
    read(s, "local_planner", "a_linear_max", c.limits.a_linear_max);
    read(s, "local_planner", "a_angular_max", c.limits.a_angular_max);
    read(s, "local_planner", "control_dt", c.limits.control_dt);
    read(s, "local_planner", "horizon", c.local_planner.horizon);
    read(s, "local_planner", "sim_dt", c.local_planner.sim_dt);
    read(s, "local_planner", "samples_vx", c.local_planner.samples_vx);
    read(s, "local_planner", "samples_vy", c.local_planner.samples_vy);
    read(s, "local_planner", "samples_omega", c.local_planner.samples_omega);
    read(s, "local_planner", "w_path", c.local_planner.w_path);
    read(s, "local_planner", "w_heading", c.local_planner.w_heading);
    read(s, "local_planner", "w_clearance", c.local_planner.w_clearance);
    read(s, "local_planner", "w_velocity", c.local_planner.w_velocity);
    read(s, "local_planner", "clearance_saturation", c.local_planner.clearance_saturation);
    read(s, "local_planner", "path_tolerance", c.local_planner.path_tolerance);
    read(s, "local_planner", "progress_share", c.local_planner.progress_share);
    read(s, "local_planner", "proximity_sample_period", c.local_planner.proximity_sample_period);
    read(s, "local_planner", "person_radius", c.local_planner.person_radius);
    read(s, "local_planner", "person_margin", c.local_planner.person_margin);
  }
  if (j.contains("behavior_params")) {
    const auto& s = j["behavior_params"];
    check_keys(s, "behavior_params",
               {"nominal_speed", "slow_speed", "trigger_distance", "trigger_lead", "release_hysteresis",
                "absent_release_ticks", "d1", "d2", "w_lanes_active"});
    read(s, "behavior_params", "nominal_speed", c.behavior_params.nominal_speed);
    read(s, "behavior_params", "slow_speed", c.behavior_params.slow_speed);
    read(s, "behavior_params", "trigger_distance", c.behavior_params.trigger_distance);
    read(s, "behavior_params", "trigger_lead", c.behavior_params.trigger_lead);
    read(s, "behavior_params", "release_hysteresis", c.behavior_params.release_hysteresis);
    read(s, "behavior_params", "absent_release_ticks", c.behavior_params.absent_release_ticks);
    read(s, "behavior_params", "d1", c.behavior_params.d1);
    read(s, "behavior_params", "d2", c.behavior_params.d2);
    read(s, "behavior_params", "w_lanes_active", c.behavior_params.w_lanes_active);
  }
  if (j.contains("human")) {
    const auto& s = j["human"];
    check_keys(s, "human",
               {"preferred_speed", "lateral_clearance_min", "stop_gap_min", "radius",
                "wall_clearance", "lookahead_length", "lookahead_width", "accel", "decel",
                "lateral_time_constant", "max_lateral_speed", "waypoint_tolerance",
                "release_behind"});
    read(s, "human", "preferred_speed", c.human.preferred_speed);
    read(s, "human", "lateral_clearance_min", c.human.lateral_clearance_min);
    read(s, "human", "stop_gap_min", c.human.stop_gap_min);
    read(s, "human", "radius", c.human.radius);
    read(s, "human", "wall_clearance", c.human.wall_clearance);
    read(s, "human", "lookahead_length", c.human.lookahead_length);
    read(s, "human", "lookahead_width", c.human.lookahead_width);
    read(s, "human", "accel", c.human.accel);
    read(s, "human", "decel", c.human.decel);
    read(s, "human", "lateral_time_constant", c.human.lateral_time_constant);
    read(s, "human", "max_lateral_speed", c.human.max_lateral_speed);
    read(s, "human", "waypoint_tolerance", c.human.waypoint_tolerance);
    read(s, "human", "release_behind", c.human.release_behind);
  }
  if (j.contains("harness")) {
    const auto& s = j["harness"];
    check_keys(s, "harness",
               {"sim_dt", "replan_period", "max_sim_time", "goal_tolerance", "short_range",
                "lane_tolerance"});
    read(s, "harness", "sim_dt", c.harness.sim_dt);
    read(s, "harness", "replan_period", c.harness.replan_period);
    read(s, "harness", "max_sim_time", c.harness.max_sim_time);
    read(s, "harness", "goal_tolerance", c.harness.goal_tolerance);
    read(s, "harness", "short_range", c.harness.short_range);
    read(s, "harness", "lane_tolerance", c.harness.lane_tolerance);
  }
  validate(c);
  return c;
}

inline ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file", path);
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return config_from_json(j, base);
}

}  // namespace plc
