/*
 * Copyright 2026 The Imagine Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef IMAGINE_WORLD_H_
#define IMAGINE_WORLD_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "imagine/geometry.h"

namespace imagine {

inline constexpr int kNumLevels = 7;
inline constexpr double kDefaultCellSize = 0.04;
inline constexpr double kDefaultBodyRadius = 0.08;

// Static occupancy geometry of one level plus its spawn points. Immutable
// after construction, so a single instance can back many episodes.
//
// Cell (x, y) covers [x * cell_size, (x + 1) * cell_size) along each axis,
// with the world origin at the lower-left corner of cell (0, 0).
class GridWorld {
 public:
  // Validates every invariant: closed border, spawn points free and at least
  // `spawn_clearance` meters from any occupied cell, and all spawn points in
  // the component reachable from the first one. Throws std::invalid_argument.
  GridWorld(int width_cells, int height_cells, double cell_size,
            std::vector<std::uint8_t> occupancy, std::vector<Vec2> spawn_points,
            int level_id, double spawn_clearance = kDefaultBodyRadius);

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }
  int level_id() const { return level_id_; }
  const std::vector<Vec2>& spawn_points() const { return spawn_points_; }

  bool InBounds(CellIndex c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  int Index(CellIndex c) const { return c.y * width_ + c.x; }
  int cell_count() const { return width_ * height_; }

  CellIndex CellOf(Vec2 p) const {
    return {static_cast<int>(std::floor(p.x / cell_size_)),
            static_cast<int>(std::floor(p.y / cell_size_))};
  }
  Vec2 CellCenter(CellIndex c) const {
    return {(c.x + 0.5) * cell_size_, (c.y + 0.5) * cell_size_};
  }

  // Out-of-bounds cells count as occupied.
  bool IsOccupied(CellIndex c) const {
    return !InBounds(c) || occupancy_[Index(c)] != 0;
  }

  // True for free cells 4-connected to the first spawn point.
  bool IsExplorable(CellIndex c) const {
    return InBounds(c) && reachable_[Index(c)] != 0;
  }
  const std::vector<std::uint8_t>& reachable_mask() const { return reachable_; }

  int explorable_cell_count() const { return explorable_count_; }

  friend bool operator==(const GridWorld&, const GridWorld&) = default;

 private:
  int width_;
  int height_;
  double cell_size_;
  int level_id_;
  std::vector<std::uint8_t> occupancy_;
  std::vector<Vec2> spawn_points_;
  std::vector<std::uint8_t> reachable_;
  int explorable_count_ = 0;
};

inline bool IsOccupied(const GridWorld& world, CellIndex cell) {
  return world.IsOccupied(cell);
}
inline int ExplorableArea(const GridWorld& world) {
  return world.explorable_cell_count();
}

// A wall with openings; door rectangles are carved out of the wall.
struct RoomPartition {
  Rect wall;
  std::vector<Rect> doors;
};

// Parameters from which a level is generated.
struct LevelSpec {
  int level_id = 0;
  double width_m = 8.0;
  double height_m = 8.0;
  double cell_size = kDefaultCellSize;
  std::vector<Rect> wall_segments;
  std::vector<RoomPartition> room_partitions;
  int obstacle_count = 0;
  double obstacle_min_m = 0.3;
  double obstacle_max_m = 0.8;
  std::uint64_t seed = 0;
  std::vector<Vec2> spawn_points;
  double body_radius = kDefaultBodyRadius;
};

// Default geometry for level 0..6: square footprints of 8 + 2k meters with
// walls from level 1, obstacles from level 3, more rooms at level 4, denser
// obstacles at level 5, and a house-like layout at level 6.
LevelSpec DefaultLevelSpec(int level_id);

// Rasterizes a spec. Identical specs give identical worlds. Throws
// std::invalid_argument for out-of-range ids, nonpositive dimensions, or
// walls that cut a spawn point off from the first spawn point.
GridWorld BuildLevel(const LevelSpec& spec);

// Plain-text level format: a header line "width height cell_size_m level_id"
// followed by `height` rows of `width` characters, top row first.
// '#' occupied, '.' free, 'S' spawn (free; spawn at the cell center).
GridWorld ParseLevelText(std::string_view text,
                         double spawn_clearance = kDefaultBodyRadius);
std::string FormatLevelText(const GridWorld& world);
GridWorld LoadLevelFile(const std::filesystem::path& path,
                        double spawn_clearance = kDefaultBodyRadius);

}  // namespace imagine

#endif  // IMAGINE_WORLD_H_
