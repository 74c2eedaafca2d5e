#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plc/plc.hpp"

namespace fs = std::filesystem;
using namespace plc;

namespace {

struct RunArgs {
  std::string scenario;
  std::string turn;
  std::string behavior;
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string map;
  std::string out;
  bool dump_lanes = false;
  bool no_human = false;
};

ScenarioConfig resolve(const RunArgs& a) {
  ScenarioConfig c;
  if (!a.config.empty()) c = load_config(a.config);
  if (!a.scenario.empty()) c.scenario = scenario_from_string(a.scenario);
  if (!a.turn.empty()) c.turn = turn_from_string(a.turn);
  if (!a.behavior.empty()) c.behavior = behavior_from_string(a.behavior);
  if (a.seed) c.seed = *a.seed;
  if (a.no_human) c.human_present = false;
  validate(c);
  return c;
}

void print_summary(const ScenarioConfig& c, const MetricsReport& m) {
  auto show = [](const std::optional<double>& v) {
    char buf[32];
    if (!v) return std::string("-");
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return std::string(buf);
  };
  std::printf("%s/%s/%s seed %llu: efficiency %s  human %s s  robot %s s  min sep %.3f m  "
              "activation %s m  collisions %d%s\n",
              std::string(to_string(c.scenario)).c_str(), std::string(to_string(c.turn)).c_str(),
              std::string(to_string(c.behavior)).c_str(), static_cast<unsigned long long>(c.seed),
              show(m.human_efficiency).c_str(), show(m.human_time).c_str(),
              show(m.robot_time).c_str(), m.min_separation, show(m.activation_separation).c_str(),
              m.collisions, m.timeout ? "  TIMEOUT" : "");
}

int cmd_run(const RunArgs& a) {
  const ScenarioConfig c = resolve(a);
  fs::create_directories(a.out);
  const Scenario world = a.map.empty() ? build_scenario(c) : load_map_scenario(a.map, c);
  const TrajectoryLog log = run(c, world);
  const MetricsReport m = compute_metrics(log);
  export_run(a.out, c, world, log, m);
  if (a.dump_lanes) {
    const std::string path = a.out + "/lane_field.csv";
    std::ofstream os(path);
    if (!os) throw IoError("cannot write", path);
    world.lanes.write_csv(os);
  }
  print_summary(c, m);
  return 0;
}

struct TaskSpec {
  std::string id;
  ScenarioConfig config;
};

int cmd_batch(const std::string& matrix_path, const std::string& out_dir) {
  std::ifstream in(matrix_path);
  if (!in) throw IoError("cannot open matrix", matrix_path);
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("matrix " + matrix_path + ": " + e.what());
  }
  ScenarioConfig base;
  if (j.contains("config")) {
    fs::path p = j["config"].get<std::string>();
    if (p.is_relative()) p = fs::path(matrix_path).parent_path() / p;
    base = load_config(p.string());
  }
  const std::uint64_t first = j.value("first_seed", 0ULL);
  const std::uint64_t count = j.value("seeds", 20ULL);
  std::vector<TaskSpec> tasks;
  for (const auto& t : j.at("tasks")) {
    nlohmann::ordered_json overlay = t;
    const std::string id = overlay.value("id", std::string("task"));
    overlay.erase("id");
    tasks.push_back({id, config_from_json(overlay, base)});
  }

  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  std::printf("%-8s %-8s %-7s %-9s %6s %9s %9s %9s %5s %5s\n", "task", "scenario", "turn",
              "behavior", "runs", "eff_mean", "eff_min", "min_sep", "coll", "tout");
  for (const TaskSpec& task : tasks) {
    double eff_sum = 0.0;
    double eff_min = 1e9;
    int eff_n = 0;
    double min_sep = 1e9;
    int collisions = 0;
    int timeouts = 0;
    double act_sum = 0.0;
    int act_n = 0;
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (std::uint64_t s = first; s < first + count; ++s) {
      ScenarioConfig c = task.config;
      c.seed = s;
      const Scenario world = build_scenario(c);
      const TrajectoryLog log = run(c, world);
      const MetricsReport m = compute_metrics(log);
      if (m.human_efficiency) {
        eff_sum += *m.human_efficiency;
        eff_min = std::min(eff_min, *m.human_efficiency);
        ++eff_n;
      }
      if (!std::isnan(m.min_separation)) min_sep = std::min(min_sep, m.min_separation);
      collisions += m.collisions;
      timeouts += m.timeout ? 1 : 0;
      if (m.activation_separation) {
        act_sum += *m.activation_separation;
        ++act_n;
      }
      runs.push_back(metrics_json(m, c, log));
      if (!out_dir.empty()) {
        const std::string dir = out_dir + "/" + task.id + "/seed_" + std::to_string(s);
        fs::create_directories(dir);
        export_run(dir, c, world, log, m);
      }
    }
    const double eff_mean = eff_n ? eff_sum / eff_n : 0.0;
    std::printf("%-8s %-8s %-7s %-9s %6llu %9.3f %9.3f %9.3f %5d %5d\n", task.id.c_str(),
                std::string(to_string(task.config.scenario)).c_str(),
                std::string(to_string(task.config.turn)).c_str(),
                std::string(to_string(task.config.behavior)).c_str(),
                static_cast<unsigned long long>(count), eff_mean, eff_n ? eff_min : 0.0, min_sep,
                collisions, timeouts);
    nlohmann::ordered_json row;
    row["id"] = task.id;
    row["scenario"] = to_string(task.config.scenario);
    row["turn"] = to_string(task.config.turn);
    row["behavior"] = to_string(task.config.behavior);
    row["runs"] = count;
    row["efficiency_mean"] = eff_n ? nlohmann::ordered_json(eff_mean) : nlohmann::ordered_json(nullptr);
    row["min_separation"] = min_sep;
    row["collisions"] = collisions;
    row["timeouts"] = timeouts;
    row["activation_separation_mean"] =
        act_n ? nlohmann::ordered_json(act_sum / act_n) : nlohmann::ordered_json(nullptr);
    row["per_seed"] = runs;
    summary.push_back(row);
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream os(out_dir + "/summary.json");
    if (!os) throw IoError("cannot write", out_dir + "/summary.json");
    os << summary.dump(2) << '\n';
  }
  return 0;
}

int cmd_plot(const std::string& log_path, std::string config_path, std::string paths_path,
             std::string out_path, const std::string& map_path) {
  const fs::path dir = fs::path(log_path).parent_path();
  if (config_path.empty() && fs::exists(dir / "config.json")) config_path = (dir / "config.json").string();
  if (paths_path.empty() && fs::exists(dir / "paths.csv")) paths_path = (dir / "paths.csv").string();
  if (out_path.empty()) out_path = fs::path(log_path).replace_extension(".svg").string();
  const ScenarioConfig c = config_path.empty() ? ScenarioConfig{} : load_config(config_path);
  TrajectoryLog log = read_csv(log_path);
  if (!paths_path.empty()) log.paths = read_paths_csv(paths_path);
  const Scenario world = map_path.empty() ? build_scenario(c) : load_map_scenario(map_path, c);
  write_text_file(out_path, render_svg(world.grid, log));
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proactive lane-change navigation simulator"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and export its logs");
  run_cmd->add_option("--scenario", ra.scenario, "frontal | blind")
      ->check(CLI::IsMember({"frontal", "blind"}));
  run_cmd->add_option("--turn", ra.turn, "ab | aprime (blind corner only)")
      ->check(CLI::IsMember({"ab", "aprime"}));
  run_cmd->add_option("--behavior", ra.behavior, "constant | stop | slow | plc")
      ->check(CLI::IsMember({"constant", "stop", "slow", "plc"}));
  run_cmd->add_option("--seed", ra.seed, "RNG seed");
  run_cmd->add_option("--config", ra.config, "JSON config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--map", ra.map, "ASCII map replacing the scenario walls")->check(CLI::ExistingFile);
  run_cmd->add_option("--out", ra.out, "Output directory")->required();
  run_cmd->add_flag("--dump-lane-field", ra.dump_lanes, "Also write lane_field.csv");
  run_cmd->add_flag("--no-human", ra.no_human, "Run without the pedestrian");

  std::string matrix;
  std::string batch_out;
  auto* batch_cmd = app.add_subcommand("batch", "Sweep a task matrix over seeds");
  batch_cmd->add_option("--matrix", matrix, "Matrix JSON file")->required()->check(CLI::ExistingFile);
  batch_cmd->add_option("--out", batch_out, "Write per-run logs and summary.json here");

  std::string plot_log;
  std::string plot_config;
  std::string plot_paths;
  std::string plot_out;
  std::string plot_map;
  auto* plot_cmd = app.add_subcommand("plot", "Render a trajectory CSV as SVG");
  plot_cmd->add_option("--log", plot_log, "trajectory.csv")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--config", plot_config, "Config used for the run (default: config.json next to the log)");
  plot_cmd->add_option("--paths", plot_paths, "paths.csv (default: next to the log)");
  plot_cmd->add_option("--out", plot_out, "SVG file (default: log name with .svg)");
  plot_cmd->add_option("--map", plot_map, "ASCII map used for the run")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    if (run_cmd->parsed()) return cmd_run(ra);
    if (batch_cmd->parsed()) return cmd_batch(matrix, batch_out);
    if (plot_cmd->parsed()) return cmd_plot(plot_log, plot_config, plot_paths, plot_out, plot_map);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
