#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "plc/distance_field.hpp"
#include "plc/geometry.hpp"
#include "plc/occupancy_grid.hpp"

namespace plc {

/// True iff the segment crosses no occupied cell. The segment is supersampled at
/// half-resolution steps from the lexicographically smaller endpoint, so the
/// result does not depend on argument order.
inline bool raycast_clear(const OccupancyGrid& grid, Vec2 from, Vec2 to) {
  if (!grid.in_bounds(from) || !grid.in_bounds(to)) {
    throw std::out_of_range("raycast endpoint outside the map");
  }
  if (to.x < from.x || (to.x == from.x && to.y < from.y)) std::swap(from, to);
  const double step = 0.5 * grid.resolution();
  const double len = distance(from, to);
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const Vec2 p{from.x + t * (to.x - from.x), from.y + t * (to.y - from.y)};
    if (grid.occupied_at(p)) return false;
  }
  return true;
}

namespace detail {

struct SampleLattice {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
};

inline SampleLattice footprint_lattice(const Footprint& fp, double resolution) {
  const double step = 0.5 * resolution;
  SampleLattice s;
  s.nx = static_cast<int>(std::ceil(fp.length / step)) + 1;
  s.ny = static_cast<int>(std::ceil(fp.width / step)) + 1;
  s.dx = fp.length / (s.nx - 1);
  s.dy = fp.width / (s.ny - 1);
  return s;
}

}  // namespace detail

namespace detail {

/// World position of lattice sample (i, j); shared by every collision path so
/// all of them see bit-identical sample coordinates.
inline Vec2 lattice_point(const Pose2& pose, double c, double s, const Footprint& fp,
                          const SampleLattice& lat, int i, int j) {
  const double lx = -fp.half_length() + i * lat.dx;
  const double ly = -fp.half_width() + j * lat.dy;
  return {pose.x + (c * lx - s * ly), pose.y + (s * lx + c * ly)};
}

}  // namespace detail

/// True iff any sample of the oriented rectangle (spacing <= resolution/2, edges
/// included) falls in an occupied or out-of-map cell.
inline bool footprint_collides(const OccupancyGrid& grid, const Pose2& pose,
                               const Footprint& fp) {
  if (!grid.in_bounds(pose.position())) throw std::out_of_range("pose outside the map");
  const auto lat = detail::footprint_lattice(fp, grid.resolution());
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      if (grid.occupied_at(detail::lattice_point(pose, c, s, fp, lat, i, j))) return true;
    }
  }
  return false;
}

/// Same predicate as footprint_collides, accelerated with the distance field.
/// Two disc covers of the rectangle (5 large, then 5x3 small) prove a pose free
/// when every disc sits farther than radius + resolution * sqrt(2) from the
/// nearest occupied cell. Otherwise only the occupied cells under the
/// rectangle's bounding box are visited, and for each one the few lattice
/// samples that can fall inside it are tested with the dense check's own
/// arithmetic, so the answer is identical to footprint_collides.
/// Only occupied cells with a free 8-neighbour need visiting once one sample is
/// known free: neighbouring samples are at most half a cell apart, so walking
/// the lattice from a free sample to an occupied one crosses such a cell first.
class FootprintChecker {
 public:
  FootprintChecker(const OccupancyGrid& grid, const DistanceField& dfield, Footprint fp)
      : grid_(&grid), dfield_(&dfield), fp_(fp),
        lattice_(detail::footprint_lattice(fp, grid.resolution())),
        margin_(grid.resolution() * std::sqrt(2.0)),
        reach_x_(fp.half_length() + 0.75 * grid.resolution()),
        reach_y_(fp.half_width() + 0.75 * grid.resolution()) {
    rim_start_.reserve(static_cast<std::size_t>(grid.height()) + 1);
    for (int y = 0; y < grid.height(); ++y) {
      rim_start_.push_back(rim_x_.size());
      for (int x = 0; x < grid.width(); ++x) {
        if (!grid.occupied({x, y})) continue;
        bool edge = false;
        for (int dy = -1; dy <= 1 && !edge; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const CellIndex n{x + dx, y + dy};
            if (grid.in_bounds(n) && !grid.occupied(n)) {
              edge = true;
              break;
            }
          }
        }
        if (edge) rim_x_.push_back(x);
      }
    }
    rim_start_.push_back(rim_x_.size());
    constexpr int kCols = 5;
    constexpr int kRows = 3;
    const double seg = fp.length / kCols;
    const double lane = fp.width / kRows;
    large_radius_ = std::hypot(0.5 * seg, fp.half_width());
    small_radius_ = std::hypot(0.5 * seg, 0.5 * lane);
    for (int k = 0; k < kCols; ++k) {
      const double x = -fp.half_length() + (k + 0.5) * seg;
      large_[static_cast<std::size_t>(k)] = {x, 0.0};
      for (int j = 0; j < kRows; ++j) {
        small_[static_cast<std::size_t>(k * kRows + j)] = {x, -fp.half_width() + (j + 0.5) * lane};
      }
    }
  }

  const Footprint& footprint() const { return fp_; }
  const OccupancyGrid& grid() const { return *grid_; }
  const DistanceField& dfield() const { return *dfield_; }

  bool collides(const Pose2& pose) const {
    if (!grid_->in_bounds(pose.position())) throw std::out_of_range("pose outside the map");
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    auto world = [&](double lx, double ly) {
      return Vec2{pose.x + c * lx - s * ly, pose.y + s * lx + c * ly};
    };
    if (discs_clear(world, large_, large_radius_) || discs_clear(world, small_, small_radius_)) {
      return false;
    }
    return lattice_hits(pose, c, s);
  }

  /// Minimum over the rollout of the center's wall distance.
  double min_center_distance(std::span<const Pose2> poses) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : poses) best = std::min(best, dfield_->distance_at(*grid_, p.position()));
    return best;
  }

 private:
  bool lattice_hits(const Pose2& pose, double c, double s) const {
    const OccupancyGrid& g = *grid_;
    const auto corners = footprint_corners(pose, fp_);
    Vec2 lo = corners[0];
    Vec2 hi = corners[0];
    for (const Vec2& q : corners) {
      lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
      hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
    }
    const CellIndex c0 = g.to_cell(lo);
    const CellIndex c1 = g.to_cell(hi);
    if (!g.in_bounds(CellIndex{c0.x - 1, c0.y - 1}) || !g.in_bounds(CellIndex{c1.x + 1, c1.y + 1})) {
      // Samples may leave the map; use the plain lattice, corners first.
      for (int j : {0, lattice_.ny - 1}) {
        for (int i : {0, lattice_.nx - 1}) {
          if (g.occupied_at(detail::lattice_point(pose, c, s, fp_, lattice_, i, j))) return true;
        }
      }
      for (int j = 0; j < lattice_.ny; ++j) {
        for (int i = 0; i < lattice_.nx; ++i) {
          if (g.occupied_at(detail::lattice_point(pose, c, s, fp_, lattice_, i, j))) return true;
        }
      }
      return false;
    }
    if (g.occupied_at(detail::lattice_point(pose, c, s, fp_, lattice_, 0, 0))) return true;
    const double res = g.resolution();
    const Vec2 origin = g.origin();
    constexpr double kSlack = 1e-6;
    for (int y = c0.y - 1; y <= c1.y + 1; ++y) {
      const auto row_begin = rim_x_.begin() + static_cast<std::ptrdiff_t>(rim_start_[y]);
      const auto row_end = rim_x_.begin() + static_cast<std::ptrdiff_t>(rim_start_[y + 1]);
      for (auto it = std::lower_bound(row_begin, row_end, c0.x - 1);
           it != row_end && *it <= c1.x + 1; ++it) {
        const int x = *it;
        const CellIndex cell{x, y};
        {
          // Cheap reject: cell center farther from the rectangle than half a diagonal.
          const double wx = origin.x + (x + 0.5) * res - pose.x;
          const double wy = origin.y + (y + 0.5) * res - pose.y;
          if (std::abs(c * wx + s * wy) > reach_x_ || std::abs(-s * wx + c * wy) > reach_y_) {
            continue;
          }
        }
        // Cell square in lattice coordinates.
        double umin = std::numeric_limits<double>::infinity();
        double umax = -umin;
        double vmin = umin;
        double vmax = -umin;
        for (int k = 0; k < 4; ++k) {
          const double wx = origin.x + (x + (k & 1)) * res - pose.x;
          const double wy = origin.y + (y + (k >> 1)) * res - pose.y;
          const double lx = c * wx + s * wy;
          const double ly = -s * wx + c * wy;
          const double u = (lx + fp_.half_length()) / lattice_.dx;
          const double v = (ly + fp_.half_width()) / lattice_.dy;
          umin = std::min(umin, u);
          umax = std::max(umax, u);
          vmin = std::min(vmin, v);
          vmax = std::max(vmax, v);
        }
        const int i0 = std::max(0, static_cast<int>(std::ceil(umin - kSlack)));
        const int i1 = std::min(lattice_.nx - 1, static_cast<int>(std::floor(umax + kSlack)));
        const int j0 = std::max(0, static_cast<int>(std::ceil(vmin - kSlack)));
        const int j1 = std::min(lattice_.ny - 1, static_cast<int>(std::floor(vmax + kSlack)));
        for (int j = j0; j <= j1; ++j) {
          for (int i = i0; i <= i1; ++i) {
            if (g.to_cell(detail::lattice_point(pose, c, s, fp_, lattice_, i, j)) == cell) {
              return true;
            }
          }
        }
      }
    }
    return false;
  }

  template <typename World, std::size_t N>
  bool discs_clear(const World& world, const std::array<Vec2, N>& centers, double r) const {
    const Vec2 lo = grid_->extent_min();
    const Vec2 hi = grid_->extent_max();
    for (const Vec2& off : centers) {
      const Vec2 p = world(off.x, off.y);
      if (p.x - r < lo.x || p.y - r < lo.y || p.x + r >= hi.x || p.y + r >= hi.y) return false;
      if (dfield_->distance(grid_->to_cell(p)) <= r + margin_) return false;
    }
    return true;
  }

  const OccupancyGrid* grid_;
  const DistanceField* dfield_;
  Footprint fp_;
  detail::SampleLattice lattice_;
  double margin_ = 0.0;
  double reach_x_ = 0.0;
  double reach_y_ = 0.0;
  double large_radius_ = 0.0;
  double small_radius_ = 0.0;
  std::array<Vec2, 5> large_{};
  std::array<Vec2, 15> small_{};
  /// Occupied cells with at least one free 8-neighbour, as sorted x indices per row.
  std::vector<int> rim_x_;
  std::vector<std::size_t> rim_start_;
};

}  // namespace plc
