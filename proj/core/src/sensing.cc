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

#include "imagine/sensing.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace imagine {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Distance along the ray to the grid, using incremental cell walking
// (Amanatides & Woo). Each crossed cell is visited once.
double MarchGrid(const GridWorld& world, Vec2 origin, Vec2 dir, double max_range) {
  CellIndex cell = world.CellOf(origin);
  if (world.IsOccupied(cell)) return 0.0;
  const double cs = world.cell_size();

  const int step_x = dir.x > 0.0 ? 1 : (dir.x < 0.0 ? -1 : 0);
  const int step_y = dir.y > 0.0 ? 1 : (dir.y < 0.0 ? -1 : 0);
  double t_max_x = kInfinity;
  double t_max_y = kInfinity;
  double t_delta_x = kInfinity;
  double t_delta_y = kInfinity;
  if (step_x != 0) {
    const double boundary = (cell.x + (step_x > 0 ? 1 : 0)) * cs;
    t_max_x = (boundary - origin.x) / dir.x;
    t_delta_x = cs / std::abs(dir.x);
  }
  if (step_y != 0) {
    const double boundary = (cell.y + (step_y > 0 ? 1 : 0)) * cs;
    t_max_y = (boundary - origin.y) / dir.y;
    t_delta_y = cs / std::abs(dir.y);
  }

  while (true) {
    double t;
    if (t_max_x < t_max_y) {
      t = t_max_x;
      t_max_x += t_delta_x;
      cell.x += step_x;
    } else {
      t = t_max_y;
      t_max_y += t_delta_y;
      cell.y += step_y;
    }
    if (t > max_range) return kInfinity;
    if (world.IsOccupied(cell)) return std::max(t, 0.0);
  }
}

double IntersectDisc(Vec2 origin, Vec2 dir, const Disc& disc) {
  const Vec2 f = origin - disc.center;
  const double b = Dot(f, dir);
  const double c = Dot(f, f) - disc.radius * disc.radius;
  if (c <= 0.0) return 0.0;
  const double h = b * b - c;
  if (h < 0.0) return kInfinity;
  const double t = -b - std::sqrt(h);
  return t >= 0.0 ? t : kInfinity;
}

}  // namespace

void LidarConfig::Validate() const {
  if (ray_count < 1) {
    throw std::invalid_argument("LidarConfig: ray_count must be at least 1");
  }
  if (!(field_of_view > 0.0) || field_of_view > 2.0 * std::numbers::pi + 1e-12) {
    throw std::invalid_argument("LidarConfig: field_of_view must be in (0, 2*pi]");
  }
  if (!(max_range > 0.0)) {
    throw std::invalid_argument("LidarConfig: max_range must be positive");
  }
}

RayHit CastRay(const GridWorld& world, std::span<const Disc> agents, Vec2 origin,
               double angle, double max_range) {
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  double t = MarchGrid(world, origin, dir, max_range);
  for (const Disc& disc : agents) {
    t = std::min(t, IntersectDisc(origin, dir, disc));
  }
  if (t <= max_range) return {t, true};
  return {max_range, false};
}

LidarScan Scan(const GridWorld& world, std::span<const Disc> others,
               const AgentState& self, const LidarConfig& config) {
  LidarScan scan;
  scan.origin = self.position;
  scan.origin_heading = self.heading;
  scan.ranges.resize(config.ray_count);
  scan.hit_flags.resize(config.ray_count);
  for (int k = 0; k < config.ray_count; ++k) {
    const RayHit hit = CastRay(world, others, self.position,
                               self.heading + config.RayOffset(k), config.max_range);
    scan.ranges[k] = hit.range;
    scan.hit_flags[k] = hit.hit;
  }
  return scan;
}

}  // namespace imagine
