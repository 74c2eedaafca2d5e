#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "plc/config.hpp"
#include "plc/errors.hpp"
#include "plc/metrics.hpp"
#include "plc/scenario.hpp"
#include "plc/simulation.hpp"

namespace plc {

inline constexpr const char* kCsvHeader =
    "t,robot_x,robot_y,robot_theta,cmd_vx,cmd_vy,cmd_omega,speed_cap,w_lanes,belief,gate,"
    "human_x,human_y,human_speed,separation,n_detections";

/// Fixed-precision rows so identical runs give identical bytes. Human columns
/// are left empty when the run has no human.
inline void write_csv(std::ostream& os, const TrajectoryLog& log) {
  os << kCsvHeader << '\n';
  char buf[512];
  const bool human = log.has_human();
  for (const TickRecord& r : log.ticks) {
    int n = std::snprintf(buf, sizeof buf, "%.2f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%d,",
                          r.t, r.robot.x, r.robot.y, r.robot.theta, r.cmd.vx, r.cmd.vy,
                          r.cmd.omega, r.speed_cap, r.w_lanes, r.belief, r.gate ? 1 : 0);
    if (human) {
      n += std::snprintf(buf + n, sizeof buf - static_cast<std::size_t>(n), "%.6f,%.6f,%.6f,%.6f,",
                         r.human.x, r.human.y, r.human_speed, r.separation);
    } else {
      n += std::snprintf(buf + n, sizeof buf - static_cast<std::size_t>(n), ",,,,");
    }
    std::snprintf(buf + n, sizeof buf - static_cast<std::size_t>(n), "%d\n", r.n_detections);
    os << buf;
  }
}

inline std::string to_csv(const TrajectoryLog& log) {
  std::ostringstream os;
  write_csv(os, log);
  return os.str();
}

/// Planned paths, one row per path point.
inline void write_paths_csv(std::ostream& os, const TrajectoryLog& log) {
  os << "t,index,x,y\n";
  char buf[128];
  for (const PathRecord& p : log.paths) {
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.2f,%zu,%.4f,%.4f\n", p.t, i, p.points[i].x, p.points[i].y);
      os << buf;
    }
  }
}

namespace detail {

inline nlohmann::ordered_json opt(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json metrics_json(const MetricsReport& m, const ScenarioConfig& c,
                                           const TrajectoryLog& log) {
  nlohmann::ordered_json j;
  j["scenario"] = to_string(c.scenario);
  j["turn"] = to_string(c.turn);
  j["behavior"] = to_string(c.behavior);
  j["seed"] = c.seed;
  j["human_time"] = detail::opt(m.human_time);
  j["human_efficiency"] = detail::opt(m.human_efficiency);
  j["robot_time"] = detail::opt(m.robot_time);
  j["min_separation"] =
      std::isnan(m.min_separation) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(m.min_separation);
  j["collisions"] = m.collisions;
  j["collision_kind"] = log.collision_kind;
  j["activation_separation"] = detail::opt(m.activation_separation);
  j["lane_change_complete_separation"] = detail::opt(m.lane_change_complete_separation);
  j["robot_path_length"] = m.robot_path_length;
  j["timeout"] = m.timeout;
  j["duration"] = m.duration;
  j["sensor_ticks"] = log.sensor_ticks;
  j["replans"] = log.replans;
  j["failed_replans"] = log.failed_replans;
  return j;
}

/// Reads a trajectory CSV back. Only the columns needed for plotting and
/// metrics are restored.
inline TrajectoryLog read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open log", path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw FormatError(path + ": unexpected CSV header");
  TrajectoryLog log;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 16) throw FormatError(path + ": row " + std::to_string(row) + " has wrong field count");
    try {
      TickRecord r;
      r.t = std::stod(f[0]);
      r.robot = {std::stod(f[1]), std::stod(f[2]), std::stod(f[3])};
      r.cmd = {std::stod(f[4]), std::stod(f[5]), std::stod(f[6])};
      r.speed_cap = std::stod(f[7]);
      r.w_lanes = std::stod(f[8]);
      r.belief = std::stod(f[9]);
      r.gate = f[10] == "1";
      if (!f[11].empty()) {
        r.human = {std::stod(f[11]), std::stod(f[12])};
        r.human_speed = std::stod(f[13]);
        r.separation = std::stod(f[14]);
        log.human_route_length = 1.0;
      }
      r.n_detections = std::stoi(f[15]);
      log.ticks.push_back(r);
    } catch (const std::logic_error&) {
      throw FormatError(path + ": row " + std::to_string(row) + " is not numeric");
    }
  }
  return log;
}

inline std::vector<PathRecord> read_paths_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open paths", path);
  std::string line;
  std::getline(in, line);
  std::vector<PathRecord> out;
  while (std::getline(in, line)) {
    const auto f = detail::split_csv_line(line);
    if (f.size() != 4) throw FormatError(path + ": bad paths row");
    const double t = std::stod(f[0]);
    if (f[1] == "0" || out.empty()) out.push_back({t, {}});
    out.back().points.push_back({std::stod(f[2]), std::stod(f[3])});
  }
  return out;
}

/// Top-down overlay: walls, 1 m grid, planned paths, then one polyline per agent.
inline std::string render_svg(const OccupancyGrid& grid, const TrajectoryLog& log,
                              double px_per_m = 40.0) {
  const Vec2 lo = grid.extent_min();
  const Vec2 hi = grid.extent_max();
  const double w = (hi.x - lo.x) * px_per_m;
  const double h = (hi.y - lo.y) * px_per_m;
  char buf[256];
  auto X = [&](double x) { return (x - lo.x) * px_per_m; };
  auto Y = [&](double y) { return (hi.y - y) * px_per_m; };

  std::ostringstream os;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.2f %.2f\">\n",
                w, h, w, h);
  os << buf << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  os << "<g id=\"walls\" fill=\"#444\">\n";
  const double res = grid.resolution();
  for (int y = 0; y < grid.height(); ++y) {
    int x = 0;
    while (x < grid.width()) {
      if (!grid.occupied({x, y})) {
        ++x;
        continue;
      }
      const int start = x;
      while (x < grid.width() && grid.occupied({x, y})) ++x;
      const double x0 = grid.origin().x + start * res;
      const double y1 = grid.origin().y + (y + 1) * res;
      std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\"/>\n",
                    X(x0), Y(y1), (x - start) * res * px_per_m, res * px_per_m);
      os << buf;
    }
  }
  os << "</g>\n<g id=\"grid\" stroke=\"#ccc\" stroke-width=\"0.5\">\n";
  for (double gx = std::ceil(lo.x); gx <= hi.x; gx += 1.0) {
    std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"0\" x2=\"%.2f\" y2=\"%.2f\"/>\n", X(gx), X(gx), h);
    os << buf;
  }
  for (double gy = std::ceil(lo.y); gy <= hi.y; gy += 1.0) {
    std::snprintf(buf, sizeof buf, "<line x1=\"0\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/>\n", Y(gy), w, Y(gy));
    os << buf;
  }
  os << "</g>\n";

  auto polyline = [&](const std::vector<Vec2>& pts, const char* attrs) {
    os << "<polyline " << attrs << " fill=\"none\" points=\"";
    for (const Vec2& p : pts) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(p.x), Y(p.y));
      os << buf;
    }
    os << "\"/>\n";
  };

  os << "<g id=\"paths\" stroke=\"#9c6\" stroke-width=\"1\" opacity=\"0.5\">\n";
  for (const PathRecord& p : log.paths) polyline(p.points, "class=\"path\"");
  os << "</g>\n";

  std::vector<Vec2> robot;
  std::vector<Vec2> human;
  for (const TickRecord& r : log.ticks) {
    robot.push_back(r.robot.position());
    if (log.has_human()) human.push_back(r.human);
  }
  polyline(robot, "class=\"agent\" id=\"robot\" stroke=\"#1a7f8e\" stroke-width=\"4\"");
  if (!human.empty()) polyline(human, "class=\"agent\" id=\"human\" stroke=\"#d2552b\" stroke-width=\"4\"");
  os << "</svg>\n";
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write", path);
  out << text;
  if (!out) throw IoError("write failed", path);
}

/// Files written by one run into `dir`.
struct RunOutputs {
  std::string trajectory_csv;
  std::string paths_csv;
  std::string metrics_json;
  std::string config_json;
  std::string svg;
};

inline RunOutputs export_run(const std::string& dir, const ScenarioConfig& config,
                             const Scenario& world, const TrajectoryLog& log,
                             const MetricsReport& metrics) {
  RunOutputs o{dir + "/trajectory.csv", dir + "/paths.csv", dir + "/metrics.json",
               dir + "/config.json", dir + "/trajectory.svg"};
  write_text_file(o.trajectory_csv, to_csv(log));
  std::ostringstream paths;
  write_paths_csv(paths, log);
  write_text_file(o.paths_csv, paths.str());
  write_text_file(o.metrics_json, metrics_json(metrics, config, log).dump(2) + "\n");
  write_text_file(o.config_json, to_json(config).dump(2) + "\n");
  write_text_file(o.svg, render_svg(world.grid, log));
  return o;
}

}  // namespace plc
