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

#include "imagine/world.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "imagine/random.h"

namespace imagine {
namespace {

constexpr double kWallThickness = 0.12;
constexpr double kDoorWidth = 1.0;

// 4-connected flood fill over free cells. Returns the visited mask.
std::vector<std::uint8_t> FloodFill(int width, int height,
                                    const std::vector<std::uint8_t>& occupancy,
                                    CellIndex start) {
  std::vector<std::uint8_t> visited(occupancy.size(), 0);
  if (start.x < 0 || start.y < 0 || start.x >= width || start.y >= height ||
      occupancy[start.y * width + start.x] != 0) {
    return visited;
  }
  std::vector<int> stack = {start.y * width + start.x};
  visited[stack.back()] = 1;
  while (!stack.empty()) {
    const int index = stack.back();
    stack.pop_back();
    const int x = index % width;
    const int y = index / width;
    const int neighbors[4][2] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
    for (const auto& n : neighbors) {
      if (n[0] < 0 || n[1] < 0 || n[0] >= width || n[1] >= height) continue;
      const int ni = n[1] * width + n[0];
      if (occupancy[ni] != 0 || visited[ni] != 0) continue;
      visited[ni] = 1;
      stack.push_back(ni);
    }
  }
  return visited;
}

CellIndex CellAt(Vec2 p, double cell_size) {
  return {static_cast<int>(std::floor(p.x / cell_size)),
          static_cast<int>(std::floor(p.y / cell_size))};
}

// Marks every cell whose center lies in `rect` and outside all `holes`.
void Fill(const Rect& rect, const std::vector<Rect>& holes, int width,
          int height, double cell_size, std::vector<std::uint8_t>& occupancy) {
  const int x0 = std::max(0, static_cast<int>(std::floor(rect.min_x / cell_size)));
  const int y0 = std::max(0, static_cast<int>(std::floor(rect.min_y / cell_size)));
  const int x1 = std::min(width - 1, static_cast<int>(std::ceil(rect.max_x / cell_size)));
  const int y1 = std::min(height - 1, static_cast<int>(std::ceil(rect.max_y / cell_size)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Vec2 center{(x + 0.5) * cell_size, (y + 0.5) * cell_size};
      if (!rect.Contains(center)) continue;
      const bool in_hole = std::any_of(holes.begin(), holes.end(),
                                       [&](const Rect& h) { return h.Contains(center); });
      if (!in_hole) occupancy[y * width + x] = 1;
    }
  }
}

bool SpawnsConnected(int width, int height, double cell_size,
                     const std::vector<std::uint8_t>& occupancy,
                     const std::vector<Vec2>& spawns) {
  const auto reach = FloodFill(width, height, occupancy, CellAt(spawns[0], cell_size));
  return std::all_of(spawns.begin(), spawns.end(), [&](Vec2 s) {
    const CellIndex c = CellAt(s, cell_size);
    return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height &&
           reach[c.y * width + c.x] != 0;
  });
}

Rect VerticalWall(double x, double y0, double y1) {
  return {x - kWallThickness / 2, y0, x + kWallThickness / 2, y1};
}
Rect HorizontalWall(double y, double x0, double x1) {
  return {x0, y - kWallThickness / 2, x1, y + kWallThickness / 2};
}
Rect VerticalDoor(double x, double y_center) {
  return {x - 1.0, y_center - kDoorWidth / 2, x + 1.0, y_center + kDoorWidth / 2};
}
Rect HorizontalDoor(double y, double x_center) {
  return {x_center - kDoorWidth / 2, y - 1.0, x_center + kDoorWidth / 2, y + 1.0};
}

}  // namespace

GridWorld::GridWorld(int width_cells, int height_cells, double cell_size,
                     std::vector<std::uint8_t> occupancy,
                     std::vector<Vec2> spawn_points, int level_id,
                     double spawn_clearance)
    : width_(width_cells),
      height_(height_cells),
      cell_size_(cell_size),
      level_id_(level_id),
      occupancy_(std::move(occupancy)),
      spawn_points_(std::move(spawn_points)) {
  if (width_ < 3 || height_ < 3 || !(cell_size_ > 0.0)) {
    throw std::invalid_argument("GridWorld: dimensions must be positive and at least 3 cells");
  }
  if (occupancy_.size() != static_cast<std::size_t>(width_) * height_) {
    throw std::invalid_argument("GridWorld: occupancy size does not match dimensions");
  }
  if (spawn_points_.empty()) {
    throw std::invalid_argument("GridWorld: at least one spawn point is required");
  }
  for (int x = 0; x < width_; ++x) {
    if (!occupancy_[x] || !occupancy_[(height_ - 1) * width_ + x]) {
      throw std::invalid_argument("GridWorld: border cells must be occupied");
    }
  }
  for (int y = 0; y < height_; ++y) {
    if (!occupancy_[y * width_] || !occupancy_[y * width_ + width_ - 1]) {
      throw std::invalid_argument("GridWorld: border cells must be occupied");
    }
  }
  for (const Vec2& spawn : spawn_points_) {
    const CellIndex c = CellOf(spawn);
    if (IsOccupied(c)) {
      throw std::invalid_argument("GridWorld: spawn point in an occupied cell");
    }
    const int reach = static_cast<int>(std::ceil(spawn_clearance / cell_size_)) + 1;
    for (int dy = -reach; dy <= reach; ++dy) {
      for (int dx = -reach; dx <= reach; ++dx) {
        const CellIndex n{c.x + dx, c.y + dy};
        if (!IsOccupied(n)) continue;
        const double nx = std::clamp(spawn.x, n.x * cell_size_, (n.x + 1) * cell_size_);
        const double ny = std::clamp(spawn.y, n.y * cell_size_, (n.y + 1) * cell_size_);
        if (std::hypot(spawn.x - nx, spawn.y - ny) < spawn_clearance) {
          throw std::invalid_argument(
              "GridWorld: spawn point closer than one body radius to an obstacle");
        }
      }
    }
  }
  reachable_ = FloodFill(width_, height_, occupancy_, CellOf(spawn_points_[0]));
  for (const Vec2& spawn : spawn_points_) {
    if (!reachable_[Index(CellOf(spawn))]) {
      throw std::invalid_argument("GridWorld: spawn point disconnected from the main free component");
    }
  }
  explorable_count_ =
      static_cast<int>(std::count(reachable_.begin(), reachable_.end(), 1));
}

LevelSpec DefaultLevelSpec(int level_id) {
  if (level_id < 0 || level_id >= kNumLevels) {
    throw std::invalid_argument("DefaultLevelSpec: level_id must be in [0, 6]");
  }
  LevelSpec spec;
  spec.level_id = level_id;
  spec.width_m = spec.height_m = 8.0 + 2.0 * level_id;
  spec.seed = 0x1a9e5eedULL + static_cast<std::uint64_t>(level_id);
  spec.spawn_points = {{1.0, 1.0}, {1.6, 1.0}, {1.0, 1.6}, {1.6, 1.6}};
  const double s = spec.width_m;
  switch (level_id) {
    case 0:
      break;
    case 1:
      spec.wall_segments = {VerticalWall(s / 2, 0.0, 0.6 * s),
                            HorizontalWall(0.75 * s, 0.7 * s, s)};
      break;
    case 2:
      spec.room_partitions = {
          {VerticalWall(s / 2, 0.0, s), {VerticalDoor(s / 2, 0.25 * s), VerticalDoor(s / 2, 0.75 * s)}}};
      spec.wall_segments = {HorizontalWall(0.6 * s, 0.0, 0.3 * s)};
      break;
    case 3:
      spec.room_partitions = {
          {VerticalWall(s / 2, 0.0, s), {VerticalDoor(s / 2, 0.25 * s), VerticalDoor(s / 2, 0.75 * s)}},
          {HorizontalWall(s / 2, s / 2, s), {HorizontalDoor(s / 2, 0.75 * s)}}};
      spec.obstacle_count = 6;
      break;
    case 4:
      spec.room_partitions = {
          {VerticalWall(s / 2, 0.0, s), {VerticalDoor(s / 2, 0.25 * s), VerticalDoor(s / 2, 0.75 * s)}},
          {HorizontalWall(s / 2, 0.0, s), {HorizontalDoor(s / 2, 0.25 * s), HorizontalDoor(s / 2, 0.75 * s)}},
          {VerticalWall(0.75 * s, s / 2, s), {VerticalDoor(0.75 * s, 0.8 * s)}}};
      spec.obstacle_count = 8;
      break;
    case 5:
      spec.room_partitions = {
          {VerticalWall(s / 2, 0.0, s), {VerticalDoor(s / 2, 0.25 * s), VerticalDoor(s / 2, 0.75 * s)}},
          {HorizontalWall(s / 2, 0.0, s), {HorizontalDoor(s / 2, 0.25 * s), HorizontalDoor(s / 2, 0.75 * s)}},
          {VerticalWall(0.75 * s, s / 2, s), {VerticalDoor(0.75 * s, 0.8 * s)}},
          {VerticalWall(0.25 * s, 0.0, s / 2), {VerticalDoor(0.25 * s, 0.3 * s)}}};
      spec.obstacle_count = 20;
      break;
    case 6: {
      // Central corridor with three rooms on each side.
      const double lo = 0.4 * s;
      const double hi = 0.55 * s;
      spec.room_partitions = {
          {HorizontalWall(lo, 0.0, s), {HorizontalDoor(lo, s / 6), HorizontalDoor(lo, s / 2), HorizontalDoor(lo, 5 * s / 6)}},
          {HorizontalWall(hi, 0.0, s), {HorizontalDoor(hi, s / 6), HorizontalDoor(hi, s / 2), HorizontalDoor(hi, 5 * s / 6)}}};
      spec.wall_segments = {VerticalWall(s / 3, 0.0, lo), VerticalWall(2 * s / 3, 0.0, lo),
                            VerticalWall(s / 3, hi, s), VerticalWall(2 * s / 3, hi, s)};
      spec.obstacle_count = 24;
      break;
    }
  }
  return spec;
}

GridWorld BuildLevel(const LevelSpec& spec) {
  if (spec.level_id < 0 || spec.level_id >= kNumLevels) {
    throw std::invalid_argument("BuildLevel: level_id must be in [0, 6]");
  }
  if (!(spec.width_m > 0.0) || !(spec.height_m > 0.0) || !(spec.cell_size > 0.0)) {
    throw std::invalid_argument("BuildLevel: dimensions must be positive");
  }
  if (spec.spawn_points.empty()) {
    throw std::invalid_argument("BuildLevel: at least one spawn point is required");
  }
  const int width = static_cast<int>(std::lround(spec.width_m / spec.cell_size));
  const int height = static_cast<int>(std::lround(spec.height_m / spec.cell_size));
  if (width < 3 || height < 3) {
    throw std::invalid_argument("BuildLevel: level smaller than 3x3 cells");
  }
  std::vector<std::uint8_t> occupancy(static_cast<std::size_t>(width) * height, 0);
  for (int x = 0; x < width; ++x) {
    occupancy[x] = occupancy[(height - 1) * width + x] = 1;
  }
  for (int y = 0; y < height; ++y) {
    occupancy[y * width] = occupancy[y * width + width - 1] = 1;
  }
  for (const Rect& wall : spec.wall_segments) {
    Fill(wall, {}, width, height, spec.cell_size, occupancy);
  }
  std::vector<Rect> doors;
  for (const RoomPartition& partition : spec.room_partitions) {
    Fill(partition.wall, partition.doors, width, height, spec.cell_size, occupancy);
    doors.insert(doors.end(), partition.doors.begin(), partition.doors.end());
  }
  if (!SpawnsConnected(width, height, spec.cell_size, occupancy, spec.spawn_points)) {
    throw std::invalid_argument("BuildLevel: walls disconnect a spawn point from the main free component");
  }

  Rng rng(spec.seed);
  const double margin = 0.5;
  int placed = 0;
  for (int attempt = 0; placed < spec.obstacle_count && attempt < 50 * spec.obstacle_count;
       ++attempt) {
    const double w = rng.Uniform(spec.obstacle_min_m, spec.obstacle_max_m);
    const double h = rng.Uniform(spec.obstacle_min_m, spec.obstacle_max_m);
    const double x = rng.Uniform(margin, spec.width_m - margin - w);
    const double y = rng.Uniform(margin, spec.height_m - margin - h);
    const Rect box{x, y, x + w, y + h};
    const Rect keep_out{box.min_x - 0.6, box.min_y - 0.6, box.max_x + 0.6, box.max_y + 0.6};
    const bool near_spawn = std::any_of(spec.spawn_points.begin(), spec.spawn_points.end(),
                                        [&](Vec2 p) { return keep_out.Contains(p); });
    const bool blocks_door = std::any_of(doors.begin(), doors.end(), [&](const Rect& d) {
      return keep_out.Intersects(d);
    });
    if (near_spawn || blocks_door) continue;
    auto candidate = occupancy;
    Fill(box, {}, width, height, spec.cell_size, candidate);
    if (!SpawnsConnected(width, height, spec.cell_size, candidate, spec.spawn_points)) continue;
    occupancy = std::move(candidate);
    ++placed;
  }

  return GridWorld(width, height, spec.cell_size, std::move(occupancy), spec.spawn_points,
                   spec.level_id, spec.body_radius);
}

GridWorld ParseLevelText(std::string_view text, double spawn_clearance) {
  std::istringstream in{std::string(text)};
  std::string header;
  if (!std::getline(in, header)) {
    throw std::invalid_argument("level text: missing header line");
  }
  std::istringstream header_stream(header);
  int width = 0;
  int height = 0;
  double cell_size = 0.0;
  int level_id = 0;
  if (!(header_stream >> width >> height >> cell_size >> level_id) || width <= 0 ||
      height <= 0 || !(cell_size > 0.0)) {
    throw std::invalid_argument("level text: header must be 'width height cell_size_m level_id'");
  }
  std::vector<std::uint8_t> occupancy(static_cast<std::size_t>(width) * height, 0);
  std::vector<Vec2> spawns;
  std::vector<std::string> rows;
  std::string line;
  while (static_cast<int>(rows.size()) < height && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    rows.push_back(line);
  }
  if (static_cast<int>(rows.size()) != height) {
    throw std::invalid_argument("level text: expected " + std::to_string(height) + " rows");
  }
  for (int r = 0; r < height; ++r) {
    const std::string& row = rows[r];
    if (static_cast<int>(row.size()) != width) {
      throw std::invalid_argument("level text: row " + std::to_string(r + 2) + " has wrong width");
    }
    const int y = height - 1 - r;
    for (int x = 0; x < width; ++x) {
      switch (row[x]) {
        case '#':
          occupancy[y * width + x] = 1;
          break;
        case '.':
          break;
        case 'S':
          spawns.push_back({(x + 0.5) * cell_size, (y + 0.5) * cell_size});
          break;
        default:
          throw std::invalid_argument("level text: unexpected character on row " +
                                      std::to_string(r + 2));
      }
    }
  }
  return GridWorld(width, height, cell_size, std::move(occupancy), std::move(spawns),
                   level_id, spawn_clearance);
}

std::string FormatLevelText(const GridWorld& world) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), world.cell_size());
  std::string out = std::to_string(world.width()) + " " + std::to_string(world.height()) +
                    " " + std::string(buffer, result.ptr) + " " +
                    std::to_string(world.level_id()) + "\n";
  std::vector<std::string> rows(world.height(), std::string(world.width(), '.'));
  for (int y = 0; y < world.height(); ++y) {
    for (int x = 0; x < world.width(); ++x) {
      if (world.IsOccupied({x, y})) rows[world.height() - 1 - y][x] = '#';
    }
  }
  for (const Vec2& spawn : world.spawn_points()) {
    const CellIndex c = world.CellOf(spawn);
    rows[world.height() - 1 - c.y][c.x] = 'S';
  }
  for (const std::string& row : rows) {
    out += row;
    out += '\n';
  }
  return out;
}

GridWorld LoadLevelFile(const std::filesystem::path& path, double spawn_clearance) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open level file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseLevelText(buffer.str(), spawn_clearance);
}

}  // namespace imagine
