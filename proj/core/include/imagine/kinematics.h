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

#ifndef IMAGINE_KINEMATICS_H_
#define IMAGINE_KINEMATICS_H_

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "imagine/geometry.h"
#include "imagine/world.h"

namespace imagine {

struct AgentState {
  Vec2 position;
  double heading = 0.0;  // (-pi, pi]
  Vec2 linear_velocity;  // world frame, m/s
  double angular_velocity = 0.0;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct KinematicLimits {
  double v_max = 0.8;
  double omega_max = 3.0;
  double body_radius = kDefaultBodyRadius;
  double dt = 0.1;
  // When set, full3d linear commands are scaled down so |v| <= v_max instead
  // of clamping each axis independently.
  bool norm_clamp_linear = false;

  // Throws std::invalid_argument unless every limit is strictly positive.
  void Validate() const;
};

enum class ActionVariant { kFull3d, kPlanar2d, kForwardRot, kWaypoint };

int ActionDim(ActionVariant variant);
std::string_view ToString(ActionVariant variant);
// Accepts "full3d", "planar2d", "forward_rot", "waypoint".
ActionVariant ParseActionVariant(std::string_view name);

// Normalized command; unused trailing components are zero.
class ActionCommand {
 public:
  ActionCommand() = default;
  // Clamps every component to [-1, 1]. Throws std::invalid_argument when the
  // component count does not match the variant.
  ActionCommand(ActionVariant variant, std::span<const double> components);

  static ActionCommand Zero(ActionVariant variant);

  ActionVariant variant() const { return variant_; }
  double operator[](int i) const { return components_[i]; }
  std::span<const double> components() const {
    return {components_.data(), static_cast<std::size_t>(ActionDim(variant_))};
  }

 private:
  ActionVariant variant_ = ActionVariant::kPlanar2d;
  std::array<double, 3> components_{};
};

enum class VelocityFrame { kWorld, kBody };

// Output of action scaling. For the waypoint variant only `direction` is set;
// Integrate turns it into heading rotation plus forward motion.
struct VelocityTarget {
  VelocityFrame frame = VelocityFrame::kWorld;
  Vec2 linear;
  double angular = 0.0;
  bool is_waypoint = false;
  Vec2 direction;
};

VelocityTarget ScaleAction(const ActionCommand& cmd, const KinematicLimits& limits);

// Heading error below which the waypoint controller starts moving forward.
inline constexpr double kWaypointHeadingTolerance = 0.2;

struct IntegrationResult {
  AgentState state;
  bool collided = false;
};

// One Euler step with stop-at-contact collision handling against occupied
// cells and the discs of `other_agents` (all of radius body_radius).
IntegrationResult Integrate(const AgentState& state, const VelocityTarget& target,
                            const KinematicLimits& limits, const GridWorld& world,
                            std::span<const Vec2> other_agents);

// Moves all agents simultaneously from the same pre-step snapshot. Each agent
// is first resolved against walls and the others' pre-step discs, then any
// pair that would overlap after the move is pulled back along both motions
// to the point of contact.
std::vector<IntegrationResult> IntegrateAll(std::span<const AgentState> states,
                                            std::span<const VelocityTarget> targets,
                                            const KinematicLimits& limits,
                                            const GridWorld& world);

// Earliest fraction s in [0, 1] of `motion` at which a disc of `radius`
// starting at `start` touches an occupied cell. Returns a value > 1 when the
// path is clear.
double SweepAgainstGrid(const GridWorld& world, Vec2 start, Vec2 motion, double radius);

}  // namespace imagine

#endif  // IMAGINE_KINEMATICS_H_
