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

#ifndef IMAGINE_SENSING_H_
#define IMAGINE_SENSING_H_

#include <numbers>
#include <span>
#include <vector>

#include "imagine/geometry.h"
#include "imagine/kinematics.h"
#include "imagine/world.h"

namespace imagine {

struct LidarConfig {
  int ray_count = 36;
  double field_of_view = 2.0 * std::numbers::pi;
  double max_range = 5.0;

  // Throws std::invalid_argument on ray_count < 1, a field of view outside
  // (0, 2*pi], or a nonpositive range.
  void Validate() const;

  // Angle of ray k relative to the sensor heading.
  double RayOffset(int k) const {
    return field_of_view * (static_cast<double>(k) / ray_count - 0.5);
  }
};

struct LidarScan {
  Vec2 origin;
  double origin_heading = 0.0;
  std::vector<double> ranges;
  std::vector<bool> hit_flags;
};

// Another agent's body as seen by the sensor.
struct Disc {
  Vec2 center;
  double radius = 0.0;
};

struct RayHit {
  double range = 0.0;
  bool hit = false;
};

// Walks the grid cell by cell along the ray and returns the distance to the
// first occupied cell boundary or disc, or (max_range, false).
RayHit CastRay(const GridWorld& world, std::span<const Disc> agents, Vec2 origin,
               double angle, double max_range);

// `others` must not include the scanning agent itself.
LidarScan Scan(const GridWorld& world, std::span<const Disc> others,
               const AgentState& self, const LidarConfig& config);

}  // namespace imagine

#endif  // IMAGINE_SENSING_H_
