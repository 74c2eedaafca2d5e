#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <vector>

#include "plc/distance_field.hpp"
#include "plc/errors.hpp"
#include "plc/geometry.hpp"
#include "plc/occupancy_grid.hpp"

namespace plc {

enum class Handedness { KeepLeft, KeepRight };

struct LaneFieldParams {
  /// Target lateral offset of the lane center from the wall.
  double d_wall = 0.45;
  /// Full magnitude extends to d_wall + band; beyond it the magnitude tapers.
  double band = 0.0;
  /// No lane information closer to a wall than this (robot half-width).
  double d_min = 0.325;
  double medial_magnitude = 0.2;
  /// Ray length used to find the opposite wall when measuring the local width.
  double max_probe = 10.0;
};

/// Per-cell keep-left (or keep-right) travel direction, |v| <= 1.
class LaneField {
 public:
  LaneField() = default;
  LaneField(int width, int height, LaneFieldParams params, Handedness hand)
      : width_(width), height_(height), params_(params), handedness_(hand),
        vectors_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {}

  int width() const { return width_; }
  int height() const { return height_; }
  const LaneFieldParams& params() const { return params_; }
  double d_wall() const { return params_.d_wall; }
  Handedness handedness() const { return handedness_; }

  Vec2 at(CellIndex c) const { return vectors_[index(c)]; }
  void set(CellIndex c, Vec2 v) { vectors_[index(c)] = v; }

  /// CSV rows: cell_x,cell_y,vx,vy
  void write_csv(std::ostream& os) const {
    os << "cell_x,cell_y,vx,vy\n";
    char buf[96];
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        const Vec2 v = at({x, y});
        std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%.6f\n", x, y, v.x, v.y);
        os << buf;
      }
    }
  }

 private:
  std::size_t index(CellIndex c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  int width_ = 0;
  int height_ = 0;
  LaneFieldParams params_{};
  Handedness handedness_ = Handedness::KeepLeft;
  std::vector<Vec2> vectors_;
};

/// Travel direction that keeps the wall in direction `wall_dir` on the chosen side.
inline Vec2 lane_tangent(Vec2 wall_dir, Handedness hand) {
  return hand == Handedness::KeepLeft ? rotate_cw90(wall_dir) : rotate_ccw90(wall_dir);
}

/// Magnitude profile over wall distance `d` for a passage of local half-width
/// `half_width`.
inline double lane_magnitude(double d, double half_width, const LaneFieldParams& p) {
  constexpr double kEps = 1e-9;
  if (d < p.d_min - kEps) return 0.0;
  const double full_until = p.d_wall + p.band;
  if (d <= full_until + kEps || half_width <= full_until) return 1.0;
  const double t = (d - full_until) / (half_width - full_until);
  return std::clamp(1.0 - (1.0 - p.medial_magnitude) * t, p.medial_magnitude, 1.0);
}

namespace detail {

inline double probe_opposite_wall(const OccupancyGrid& grid, Vec2 from, Vec2 dir,
                                  double max_len) {
  const double step = 0.5 * grid.resolution();
  for (double s = step; s <= max_len; s += step) {
    if (grid.occupied_at(from + dir * s)) return s + 0.5 * grid.resolution();
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Builds the lane field by rotating the nearest-wall direction by -90 deg
/// (KeepLeft) or +90 deg (KeepRight). Cells on the medial axis, where two walls
/// are equidistant within half a cell, follow the 4-neighbor majority; isolated
/// ones get a zero vector.
inline LaneField generate_lane_field(const OccupancyGrid& grid, const DistanceField& dfield,
                                     LaneFieldParams params = {},
                                     Handedness hand = Handedness::KeepLeft) {
  if (!(params.d_wall > 0.0)) throw ConfigError("d_wall must be positive");
  if (dfield.width() != grid.width() || dfield.height() != grid.height()) {
    throw ContractError("distance field does not match grid");
  }

  const int w = grid.width();
  const int h = grid.height();
  const double res = grid.resolution();
  LaneField field(w, h, params, hand);

  struct Candidate {
    bool ambiguous = false;
    Vec2 own{};
    Vec2 alt{};
    double magnitude = 0.0;
  };
  std::vector<Candidate> cand(grid.size());

  constexpr std::array<CellIndex, 8> kNeighbors8{
      {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const CellIndex c{x, y};
      if (grid.occupied(c)) continue;
      const double d = dfield.distance(c);
      const Vec2 n = dfield.direction(c);
      Candidate& k = cand[grid.index(c)];
      k.own = lane_tangent(n, hand);

      const CellIndex site = dfield.nearest(c);
      for (const auto& off : kNeighbors8) {
        const CellIndex nb{x + off.x, y + off.y};
        if (!grid.in_bounds(nb)) continue;
        const CellIndex other = dfield.nearest(nb);
        if (other == site) continue;
        const Vec2 to_other{static_cast<double>(other.x - x), static_cast<double>(other.y - y)};
        const double d_other = norm(to_other) * res;
        const Vec2 n_other = normalized(to_other);
        if (d_other <= d + 0.5 * res && dot(n_other, n) < 0.5) {
          k.ambiguous = true;
          k.alt = lane_tangent(n_other, hand);
          break;
        }
      }

      const double opposite =
          detail::probe_opposite_wall(grid, grid.to_world(c), -n, params.max_probe);
      const double half_width = 0.5 * (d + opposite);
      k.magnitude = lane_magnitude(d, half_width, params);
    }
  }

  constexpr std::array<CellIndex, 4> kNeighbors4{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const CellIndex c{x, y};
      if (grid.occupied(c)) continue;
      const Candidate& k = cand[grid.index(c)];
      if (k.magnitude == 0.0) continue;
      if (!k.ambiguous) {
        field.set(c, k.own * k.magnitude);
        continue;
      }
      int votes_own = 0;
      int votes_alt = 0;
      int voters = 0;
      for (const auto& off : kNeighbors4) {
        const CellIndex nb{x + off.x, y + off.y};
        if (!grid.in_bounds(nb) || grid.occupied(nb)) continue;
        const Candidate& kn = cand[grid.index(nb)];
        if (kn.ambiguous || kn.magnitude == 0.0) continue;
        ++voters;
        votes_own += dot(kn.own, k.own) > 0.0;
        votes_alt += dot(kn.own, k.alt) > 0.0;
      }
      if (voters == 0) continue;
      const Vec2 t = votes_alt > votes_own ? k.alt : k.own;
      field.set(c, t * k.magnitude);
    }
  }
  return field;
}

/// Lane-following edge cost 0.5 - 0.5 v.d for a unit edge direction d.
inline double lane_cost(Vec2 v, Vec2 edge_dir) {
  if (std::abs(norm(edge_dir) - 1.0) > 1e-9) {
    throw ContractError("lane_cost: edge direction must be a unit vector");
  }
  return 0.5 - 0.5 * dot(v, edge_dir);
}

}  // namespace plc
