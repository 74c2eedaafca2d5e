#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "plc/errors.hpp"
#include "plc/geometry.hpp"
#include "plc/occupancy_grid.hpp"

namespace plc {

/// Exact Euclidean distance (cell center to cell center) from every cell to the
/// nearest occupied cell, with the unit direction toward it.
class DistanceField {
 public:
  DistanceField() = default;

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }

  double distance(CellIndex c) const { return distance_[index(c)]; }
  Vec2 direction(CellIndex c) const { return direction_[index(c)]; }
  CellIndex nearest(CellIndex c) const { return nearest_[index(c)]; }

  /// Distance at the cell containing `p`; 0 outside the map.
  double distance_at(const OccupancyGrid& grid, Vec2 p) const {
    const CellIndex c = grid.to_cell(p);
    return grid.in_bounds(c) ? distance(c) : 0.0;
  }

 private:
  friend DistanceField distance_transform(const OccupancyGrid& grid);

  std::size_t index(CellIndex c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.0;
  std::vector<double> distance_;
  std::vector<Vec2> direction_;
  std::vector<CellIndex> nearest_;
};

namespace detail {

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher), keeping the argmin.
// f[q] < 0 marks "no site in this column".
inline void envelope_1d(const std::vector<long long>& f, std::vector<long long>& d,
                        std::vector<int>& arg) {
  const int n = static_cast<int>(f.size());
  std::vector<int> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) + 1);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[static_cast<std::size_t>(q)] < 0) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -std::numeric_limits<double>::infinity();
      z[1] = std::numeric_limits<double>::infinity();
      continue;
    }
    auto intersect = [&](int p) {
      return (static_cast<double>(f[static_cast<std::size_t>(q)] + static_cast<long long>(q) * q) -
              static_cast<double>(f[static_cast<std::size_t>(p)] + static_cast<long long>(p) * p)) /
             (2.0 * (q - p));
    };
    double s = intersect(v[static_cast<std::size_t>(k)]);
    while (s <= z[static_cast<std::size_t>(k)]) {
      --k;
      s = intersect(v[static_cast<std::size_t>(k)]);
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) {
      d[static_cast<std::size_t>(q)] = -1;
      arg[static_cast<std::size_t>(q)] = -1;
    }
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
    const int p = v[static_cast<std::size_t>(j)];
    d[static_cast<std::size_t>(q)] =
        static_cast<long long>(q - p) * (q - p) + f[static_cast<std::size_t>(p)];
    arg[static_cast<std::size_t>(q)] = p;
  }
}

}  // namespace detail

/// Throws ConfigError("unbounded map") when the grid has no occupied cell.
inline DistanceField distance_transform(const OccupancyGrid& grid) {
  if (grid.count(Cell::Occupied) == 0) throw ConfigError("unbounded map");

  const int w = grid.width();
  const int h = grid.height();
  DistanceField df;
  df.width_ = w;
  df.height_ = h;
  df.resolution_ = grid.resolution();
  df.distance_.assign(grid.size(), 0.0);
  df.direction_.assign(grid.size(), Vec2{});
  df.nearest_.assign(grid.size(), CellIndex{});

  // Column pass: nearest occupied row within each column.
  std::vector<int> column_site(grid.size(), -1);
  for (int x = 0; x < w; ++x) {
    int last = -1;
    for (int y = 0; y < h; ++y) {
      if (grid.occupied({x, y})) last = y;
      column_site[grid.index({x, y})] = last;
    }
    last = -1;
    for (int y = h - 1; y >= 0; --y) {
      if (grid.occupied({x, y})) last = y;
      int& site = column_site[grid.index({x, y})];
      if (last >= 0 && (site < 0 || (last - y) < (y - site))) site = last;
    }
  }

  // Row pass over parabolas f(q) = (y - site_q)^2.
  std::vector<long long> f(static_cast<std::size_t>(w));
  std::vector<long long> d(static_cast<std::size_t>(w));
  std::vector<int> arg(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int s = column_site[grid.index({x, y})];
      f[static_cast<std::size_t>(x)] = s < 0 ? -1 : static_cast<long long>(y - s) * (y - s);
    }
    detail::envelope_1d(f, d, arg);
    for (int x = 0; x < w; ++x) {
      const std::size_t i = grid.index({x, y});
      const int q = arg[static_cast<std::size_t>(x)];
      const CellIndex site{q, column_site[grid.index({q, y})]};
      df.nearest_[i] = site;
      df.distance_[i] = std::sqrt(static_cast<double>(d[static_cast<std::size_t>(x)])) *
                        grid.resolution();
      if (d[static_cast<std::size_t>(x)] > 0) {
        df.direction_[i] = normalized(Vec2{static_cast<double>(site.x - x),
                                           static_cast<double>(site.y - y)});
      }
    }
  }
  return df;
}

}  // namespace plc
