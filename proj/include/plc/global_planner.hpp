#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "plc/distance_field.hpp"
#include "plc/errors.hpp"
#include "plc/geometry.hpp"
#include "plc/lane_field.hpp"
#include "plc/occupancy_grid.hpp"

namespace plc {

struct CostWeights {
  double w_lanes = 0.0;
  double w_person = 0.1;
  double w_turn = 0.3;
  double w_inflation = 5.0;
  double step_cost = 1.0;
  double r_buffer = 1.5;
  double r_inflation = 0.125;
  double robot_half_width = 0.325;
};

inline void validate(const CostWeights& w) {
  if (w.w_lanes < 0 || w.w_person < 0 || w.w_turn < 0 || w.w_inflation < 0 || w.step_cost < 0) {
    throw ConfigError("cost weights must be non-negative");
  }
  if (!(w.r_buffer > 0.0) || !(w.r_inflation > 0.0)) {
    throw ConfigError("buffer and inflation radii must be positive");
  }
}

struct PlannerContext {
  const OccupancyGrid& grid;
  const DistanceField& dfield;
  const LaneField* lanes = nullptr;
  std::span<const Vec2> persons = {};
  CostWeights weights = {};
};

/// Eight discrete headings, index k at k * 45 degrees.
inline constexpr std::array<CellIndex, 8> kHeadingSteps{
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

inline int heading_index(double theta) {
  const int k = static_cast<int>(std::lround(normalize_angle(theta) / (kPi / 4.0)));
  return ((k % 8) + 8) % 8;
}

inline int heading_index(CellIndex step) {
  for (int k = 0; k < 8; ++k) {
    if (kHeadingSteps[static_cast<std::size_t>(k)] == step) return k;
  }
  return -1;
}

inline double heading_angle(int k) { return normalize_angle(k * kPi / 4.0); }

inline int turn_steps(int a, int b) {
  if (a < 0 || b < 0) return 0;
  const int d = std::abs(a - b) % 8;
  return std::min(d, 8 - d);
}

inline constexpr double kBlocked = std::numeric_limits<double>::infinity();

inline bool admissible(const PlannerContext& ctx, CellIndex c) {
  return ctx.grid.in_bounds(c) && !ctx.grid.occupied(c) &&
         ctx.dfield.distance(c) >= ctx.weights.robot_half_width - 1e-9;
}

inline double person_buffer(const PlannerContext& ctx, Vec2 p) {
  if (ctx.persons.empty()) return 0.0;
  double nearest = std::numeric_limits<double>::infinity();
  for (const Vec2& q : ctx.persons) nearest = std::min(nearest, distance(p, q));
  return std::max(0.0, 1.0 - nearest / ctx.weights.r_buffer);
}

inline double inflation(const PlannerContext& ctx, CellIndex c) {
  const double wall = ctx.dfield.distance(c);
  return std::max(0.0, 1.0 - (wall - ctx.weights.robot_half_width) / ctx.weights.r_inflation);
}

/// Composite cost of moving from `parent` (entered with heading index
/// `parent_heading`, or -1 at the start) to the 8-neighbor `child`. Returns
/// kBlocked when the child is not admissible.
inline double edge_cost(const PlannerContext& ctx, CellIndex parent, int parent_heading,
                        CellIndex child) {
  const CellIndex step{child.x - parent.x, child.y - parent.y};
  const int heading = heading_index(step);
  if (heading < 0) throw ContractError("edge_cost: child is not an 8-neighbor of parent");
  if (!admissible(ctx, child)) return kBlocked;

  const CostWeights& w = ctx.weights;
  const double res = ctx.grid.resolution();
  const bool diagonal = step.x != 0 && step.y != 0;
  const double length = diagonal ? res * std::sqrt(2.0) : res;

  double cost = w.step_cost * length;
  if (w.w_lanes > 0.0 && ctx.lanes != nullptr) {
    const Vec2 dir = normalized(Vec2{static_cast<double>(step.x), static_cast<double>(step.y)});
    cost += w.w_lanes * lane_cost(ctx.lanes->at(parent), dir) * length;
  }
  if (w.w_person > 0.0) cost += w.w_person * person_buffer(ctx, ctx.grid.to_world(child));
  if (w.w_turn > 0.0) cost += w.w_turn * turn_steps(parent_heading, heading);
  if (w.w_inflation > 0.0) cost += w.w_inflation * inflation(ctx, child);
  return cost;
}

struct PathNode {
  CellIndex cell{};
  Vec2 point{};
  double heading = 0.0;
};

struct PlannedPath {
  std::vector<PathNode> nodes;
  double total_cost = 0.0;
  std::size_t expanded = 0;

  bool empty() const { return nodes.empty(); }
  std::size_t size() const { return nodes.size(); }
};

namespace detail {

/// Per-plan precomputation of the child-cell terms of edge_cost. The sums are
/// formed in the same order as edge_cost, so costs are bit-identical.
struct EdgeCostCache {
  std::vector<std::uint8_t> ok;
  std::vector<double> person;
  std::vector<double> inflation;
  std::array<double, 8> length{};
  std::array<Vec2, 8> dir{};

  explicit EdgeCostCache(const PlannerContext& ctx) {
    const OccupancyGrid& grid = ctx.grid;
    const std::size_t n = grid.size();
    ok.assign(n, 0);
    person.assign(n, 0.0);
    inflation.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const CellIndex c = grid.cell_of(i);
      if (!admissible(ctx, c)) continue;
      ok[i] = 1;
      if (ctx.weights.w_person > 0.0) person[i] = person_buffer(ctx, grid.to_world(c));
      if (ctx.weights.w_inflation > 0.0) inflation[i] = plc::inflation(ctx, c);
    }
    const double res = grid.resolution();
    for (std::size_t k = 0; k < 8; ++k) {
      const CellIndex st = kHeadingSteps[k];
      length[k] = (st.x != 0 && st.y != 0) ? res * std::sqrt(2.0) : res;
      dir[k] = normalized(Vec2{static_cast<double>(st.x), static_cast<double>(st.y)});
    }
  }

  /// Cost-to-go of the relaxation without lane and turn terms (both >= 0), by
  /// a backward Dijkstra over cells. Consistent, hence an admissible heuristic.
  std::vector<double> relaxed_cost_to_go(const PlannerContext& ctx, CellIndex goal) const {
    const OccupancyGrid& grid = ctx.grid;
    const CostWeights& w = ctx.weights;
    std::vector<double> h(grid.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    const std::size_t gi = grid.index(goal);
    h[gi] = 0.0;
    open.push({0.0, gi});
    while (!open.empty()) {
      const auto [d, v] = open.top();
      open.pop();
      if (d > h[v]) continue;
      const CellIndex cv = grid.cell_of(v);
      double enter = 0.0;
      if (w.w_person > 0.0) enter += w.w_person * person[v];
      if (w.w_inflation > 0.0) enter += w.w_inflation * inflation[v];
      for (std::size_t k = 0; k < 8; ++k) {
        const CellIndex u{cv.x - kHeadingSteps[k].x, cv.y - kHeadingSteps[k].y};
        if (!grid.in_bounds(u)) continue;
        const std::size_t ui = grid.index(u);
        const double nd = d + w.step_cost * length[k] + enter;
        if (nd < h[ui]) {
          h[ui] = nd;
          if (ok[ui]) open.push({nd, ui});
        }
      }
    }
    return h;
  }

  double cost(const PlannerContext& ctx, CellIndex parent,
              int parent_heading, std::size_t child_idx, int heading) const {
    if (!ok[child_idx]) return kBlocked;
    const CostWeights& w = ctx.weights;
    const double len = length[static_cast<std::size_t>(heading)];
    double c = w.step_cost * len;
    if (w.w_lanes > 0.0 && ctx.lanes != nullptr) {
      c += w.w_lanes * lane_cost(ctx.lanes->at(parent), dir[static_cast<std::size_t>(heading)]) * len;
    }
    if (w.w_person > 0.0) c += w.w_person * person[child_idx];
    if (w.w_turn > 0.0) c += w.w_turn * turn_steps(parent_heading, heading);
    if (w.w_inflation > 0.0) c += w.w_inflation * inflation[child_idx];
    return c;
  }
};

}  // namespace detail

/// Grid A* over (cell, incoming heading). Ties break on lower f, then lower h,
/// then row-major cell order, then heading index.
inline PlannedPath plan(const Pose2& start, const Pose2& goal, const PlannerContext& ctx) {
  const OccupancyGrid& grid = ctx.grid;
  const CellIndex s = grid.to_cell(start.position());
  const CellIndex g = grid.to_cell(goal.position());
  if (!grid.in_bounds(s) || grid.occupied(s)) throw ContractError("plan: start is not a free cell");
  if (!admissible(ctx, g)) throw ContractError("plan: goal is not an admissible cell");

  const int start_heading = heading_index(start.theta);
  if (s == g) {
    PlannedPath p;
    p.nodes.push_back({s, grid.to_world(s), heading_angle(start_heading)});
    return p;
  }

  const detail::EdgeCostCache cache(ctx);
  // Shaved by a relative 1e-12 so summation-order rounding cannot make it
  // exceed the true cost-to-go.
  const std::vector<double> h_cell = cache.relaxed_cost_to_go(ctx, g);
  auto heuristic = [&](CellIndex c) { return h_cell[grid.index(c)] * (1.0 - 1e-12); };

  const std::size_t n_states = grid.size() * 8;
  std::vector<double> cost(n_states, std::numeric_limits<double>::infinity());
  std::vector<std::int64_t> parent(n_states, -1);
  std::vector<std::uint8_t> closed(n_states, 0);

  struct Entry {
    double f;
    double h;
    std::size_t cell;
    int heading;
    double g;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    if (a.cell != b.cell) return a.cell > b.cell;
    return a.heading > b.heading;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

  const std::size_t s_idx = grid.index(s);
  const std::size_t s_state = s_idx * 8 + static_cast<std::size_t>(start_heading);
  cost[s_state] = 0.0;
  const double h0 = heuristic(s);
  open.push({h0, h0, s_idx, start_heading, 0.0});

  std::size_t expanded = 0;
  std::int64_t goal_state = -1;
  while (!open.empty()) {
    const Entry e = open.top();
    open.pop();
    const std::size_t state = e.cell * 8 + static_cast<std::size_t>(e.heading);
    if (closed[state] || e.g > cost[state]) continue;
    closed[state] = 1;
    ++expanded;
    const CellIndex c = grid.cell_of(e.cell);
    if (c == g) {
      goal_state = static_cast<std::int64_t>(state);
      break;
    }
    for (int k = 0; k < 8; ++k) {
      const CellIndex step = kHeadingSteps[static_cast<std::size_t>(k)];
      const CellIndex nb{c.x + step.x, c.y + step.y};
      if (!grid.in_bounds(nb)) continue;
      const std::size_t nb_idx = grid.index(nb);
      const double ec = cache.cost(ctx, c, e.heading, nb_idx, k);
      if (ec == kBlocked) continue;
      const std::size_t nb_state = nb_idx * 8 + static_cast<std::size_t>(k);
      if (closed[nb_state]) continue;
      const double ng = e.g + ec;
      if (ng < cost[nb_state]) {
        cost[nb_state] = ng;
        parent[nb_state] = static_cast<std::int64_t>(state);
        const double h = heuristic(nb);
        if (h == std::numeric_limits<double>::infinity()) continue;
        open.push({ng + h, h, nb_idx, k, ng});
      }
    }
  }

  if (goal_state < 0) throw UnreachableError("plan: goal unreachable", expanded);

  PlannedPath path;
  path.total_cost = cost[static_cast<std::size_t>(goal_state)];
  path.expanded = expanded;
  for (std::int64_t st = goal_state; st >= 0; st = parent[static_cast<std::size_t>(st)]) {
    const std::size_t cell_idx = static_cast<std::size_t>(st) / 8;
    const int heading = static_cast<int>(static_cast<std::size_t>(st) % 8);
    const CellIndex c = grid.cell_of(cell_idx);
    path.nodes.push_back({c, grid.to_world(c), heading_angle(heading)});
  }
  std::reverse(path.nodes.begin(), path.nodes.end());
  return path;
}

}  // namespace plc
