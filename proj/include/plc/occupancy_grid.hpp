#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "plc/errors.hpp"
#include "plc/geometry.hpp"

namespace plc {

enum class Cell : std::uint8_t { Free = 0, Occupied = 1 };

struct CellIndex {
  int x = 0;
  int y = 0;
  auto operator<=>(const CellIndex&) const = default;
};

/// Binary raster map. Cell (0,0) has its lower-left corner at `origin`; cell
/// centers sit at origin + (i + 0.5) * resolution.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution, Vec2 origin = {},
                Cell fill = Cell::Free)
      : width_(width), height_(height), resolution_(resolution), origin_(origin) {
    if (width <= 0 || height <= 0) throw ConfigError("grid dimensions must be positive");
    if (!(resolution > 0.0)) throw ConfigError("grid resolution must be positive");
    cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(CellIndex c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  bool in_bounds(Vec2 p) const {
    const double lx = (p.x - origin_.x) / resolution_;
    const double ly = (p.y - origin_.y) / resolution_;
    return lx >= 0.0 && ly >= 0.0 && lx < width_ && ly < height_;
  }

  std::size_t index(CellIndex c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  CellIndex cell_of(std::size_t idx) const {
    return {static_cast<int>(idx % static_cast<std::size_t>(width_)),
            static_cast<int>(idx / static_cast<std::size_t>(width_))};
  }

  Cell at(CellIndex c) const { return cells_[index(c)]; }
  bool occupied(CellIndex c) const { return at(c) == Cell::Occupied; }
  void set(CellIndex c, Cell v) { cells_[index(c)] = v; }

  CellIndex to_cell(Vec2 p) const {
    return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
            static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
  }
  Vec2 to_world(CellIndex c) const {
    return {origin_.x + (c.x + 0.5) * resolution_, origin_.y + (c.y + 0.5) * resolution_};
  }

  /// Out-of-bounds points count as occupied (closed world).
  bool occupied_at(Vec2 p) const {
    const CellIndex c = to_cell(p);
    return !in_bounds(c) || occupied(c);
  }

  std::size_t count(Cell v) const {
    std::size_t n = 0;
    for (Cell c : cells_) n += (c == v);
    return n;
  }

  /// Marks every cell whose center lies in the axis-aligned box.
  void fill_rect(Vec2 lo, Vec2 hi, Cell v) {
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        const Vec2 c = to_world({x, y});
        if (c.x >= lo.x && c.x <= hi.x && c.y >= lo.y && c.y <= hi.y) set({x, y}, v);
      }
    }
  }

  Vec2 extent_min() const { return origin_; }
  Vec2 extent_max() const { return origin_ + Vec2{width_ * resolution_, height_ * resolution_}; }

  bool operator==(const OccupancyGrid&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.05;
  Vec2 origin_{};
  std::vector<Cell> cells_;
};

/// Parses a rectangular block of '#' (occupied) and '.' (free). The first text
/// line is the top row of the map (largest y).
inline OccupancyGrid parse_map(std::string_view text, double resolution, Vec2 origin = {}) {
  std::vector<std::string_view> rows;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view row = text.substr(start, end - start);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    rows.push_back(row);
    start = end + 1;
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty()) throw FormatError("map is empty");

  const std::size_t width = rows.front().size();
  if (width == 0) throw FormatError("map row 1 is empty");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw FormatError("ragged map: row " + std::to_string(r + 1) + " has " +
                        std::to_string(rows[r].size()) + " columns, expected " +
                        std::to_string(width));
    }
  }

  const int height = static_cast<int>(rows.size());
  OccupancyGrid grid(static_cast<int>(width), height, resolution, origin);
  for (int r = 0; r < height; ++r) {
    for (std::size_t col = 0; col < width; ++col) {
      const char ch = rows[static_cast<std::size_t>(r)][col];
      const CellIndex c{static_cast<int>(col), height - 1 - r};
      if (ch == '#') {
        grid.set(c, Cell::Occupied);
      } else if (ch != '.') {
        throw FormatError("illegal character '" + std::string(1, ch) + "' at row " +
                          std::to_string(r + 1) + ", column " + std::to_string(col + 1));
      }
    }
  }
  return grid;
}

inline std::string to_ascii(const OccupancyGrid& grid) {
  std::string out;
  out.reserve(static_cast<std::size_t>(grid.width() + 1) * static_cast<std::size_t>(grid.height()));
  for (int y = grid.height() - 1; y >= 0; --y) {
    for (int x = 0; x < grid.width(); ++x) out.push_back(grid.occupied({x, y}) ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

}  // namespace plc
