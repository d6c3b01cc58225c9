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

#include "imagine/kinematics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace imagine {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
// Gap left between bodies after a stop-at-contact, in meters.
constexpr double kContactSkin = 1e-7;

// Entry parameter of the ray p + s * d into a closed box, or +inf.
double RayBoxEntry(Vec2 p, Vec2 d, const Rect& box) {
  double t_enter = -kInfinity;
  double t_exit = kInfinity;
  const double origin[2] = {p.x, p.y};
  const double dir[2] = {d.x, d.y};
  const double lo[2] = {box.min_x, box.min_y};
  const double hi[2] = {box.max_x, box.max_y};
  for (int axis = 0; axis < 2; ++axis) {
    if (dir[axis] == 0.0) {
      if (origin[axis] < lo[axis] || origin[axis] > hi[axis]) return kInfinity;
      continue;
    }
    double t0 = (lo[axis] - origin[axis]) / dir[axis];
    double t1 = (hi[axis] - origin[axis]) / dir[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
  }
  if (t_enter > t_exit || t_exit < 0.0) return kInfinity;
  return std::max(t_enter, 0.0);
}

// Entry parameter of the ray p + s * d into a disc, or +inf.
double RayCircleEntry(Vec2 p, Vec2 d, Vec2 center, double radius) {
  const Vec2 f = p - center;
  const double a = Dot(d, d);
  if (a == 0.0) return kInfinity;
  const double b = Dot(f, d);
  const double c = Dot(f, f) - radius * radius;
  const double disc = b * b - a * c;
  if (disc < 0.0) return kInfinity;
  const double t = (-b - std::sqrt(disc)) / a;
  if (t < 0.0) return c <= 0.0 ? 0.0 : kInfinity;
  return t;
}

// Time of impact of a disc against one cell square (Minkowski sum of the
// square and the disc, split into two boxes and four corner circles).
double SweepAgainstCell(Vec2 p, Vec2 d, const Rect& cell, double radius) {
  const Vec2 closest{std::clamp(p.x, cell.min_x, cell.max_x),
                     std::clamp(p.y, cell.min_y, cell.max_y)};
  const Vec2 away = p - closest;
  if (Norm(away) < radius + kContactSkin / 2) {
    // Already touching: blocked only when pushing further in.
    return Dot(d, away) < 0.0 ? 0.0 : kInfinity;
  }
  double best = RayBoxEntry(
      p, d, {cell.min_x - radius, cell.min_y, cell.max_x + radius, cell.max_y});
  best = std::min(best, RayBoxEntry(p, d, {cell.min_x, cell.min_y - radius,
                                            cell.max_x, cell.max_y + radius}));
  const Vec2 corners[4] = {{cell.min_x, cell.min_y},
                           {cell.max_x, cell.min_y},
                           {cell.min_x, cell.max_y},
                           {cell.max_x, cell.max_y}};
  for (const Vec2& corner : corners) {
    best = std::min(best, RayCircleEntry(p, d, corner, radius));
  }
  return best;
}

double SweepAgainstDisc(Vec2 p, Vec2 d, Vec2 center, double radius) {
  const Vec2 away = p - center;
  if (Norm(away) < radius + kContactSkin / 2) {
    return Dot(d, away) < 0.0 ? 0.0 : kInfinity;
  }
  return RayCircleEntry(p, d, center, radius);
}

// Position reached when travelling `fraction` of `motion`, backed off from
// the contact point by the skin distance.
Vec2 StopAt(Vec2 start, Vec2 motion, double fraction) {
  const double length = Norm(motion);
  if (length == 0.0) return start;
  const double s = std::max(0.0, fraction - kContactSkin / length);
  return start + s * motion;
}

Vec2 WorldVelocity(const VelocityTarget& target, double heading) {
  return target.frame == VelocityFrame::kBody ? Rotate(target.linear, heading)
                                              : target.linear;
}

struct ResolvedMotion {
  Vec2 velocity;  // world frame
  double angular = 0.0;
};

ResolvedMotion Resolve(const AgentState& state, const VelocityTarget& target,
                       const KinematicLimits& limits) {
  if (!target.is_waypoint) {
    return {WorldVelocity(target, state.heading), target.angular};
  }
  const double length = Norm(target.direction);
  if (length < 1e-9) return {};
  const double desired = std::atan2(target.direction.y, target.direction.x);
  const double error = WrapAngle(desired - state.heading);
  const double omega = std::clamp(error / limits.dt, -limits.omega_max, limits.omega_max);
  const double forward = std::abs(error) < kWaypointHeadingTolerance ? limits.v_max : 0.0;
  return {Rotate({forward, 0.0}, state.heading), omega};
}

}  // namespace

void KinematicLimits::Validate() const {
  if (!(v_max > 0.0) || !(omega_max > 0.0) || !(body_radius > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("KinematicLimits: all limits must be strictly positive");
  }
}

int ActionDim(ActionVariant variant) {
  switch (variant) {
    case ActionVariant::kFull3d:
      return 3;
    case ActionVariant::kPlanar2d:
    case ActionVariant::kForwardRot:
    case ActionVariant::kWaypoint:
      return 2;
  }
  return 0;
}

std::string_view ToString(ActionVariant variant) {
  switch (variant) {
    case ActionVariant::kFull3d:
      return "full3d";
    case ActionVariant::kPlanar2d:
      return "planar2d";
    case ActionVariant::kForwardRot:
      return "forward_rot";
    case ActionVariant::kWaypoint:
      return "waypoint";
  }
  return "unknown";
}

ActionVariant ParseActionVariant(std::string_view name) {
  for (ActionVariant v : {ActionVariant::kFull3d, ActionVariant::kPlanar2d,
                          ActionVariant::kForwardRot, ActionVariant::kWaypoint}) {
    if (ToString(v) == name) return v;
  }
  throw std::invalid_argument("unknown action variant '" + std::string(name) + "'");
}

ActionCommand::ActionCommand(ActionVariant variant, std::span<const double> components)
    : variant_(variant) {
  if (static_cast<int>(components.size()) != ActionDim(variant)) {
    throw std::invalid_argument("ActionCommand: " + std::string(ToString(variant)) +
                                " expects " + std::to_string(ActionDim(variant)) +
                                " components, got " + std::to_string(components.size()));
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    // NaN maps to zero.
    const double c = std::isnan(components[i]) ? 0.0 : components[i];
    components_[i] = std::clamp(c, -1.0, 1.0);
  }
}

ActionCommand ActionCommand::Zero(ActionVariant variant) {
  const std::array<double, 3> zeros{};
  return ActionCommand(variant, std::span(zeros.data(), ActionDim(variant)));
}

VelocityTarget ScaleAction(const ActionCommand& cmd, const KinematicLimits& limits) {
  VelocityTarget target;
  switch (cmd.variant()) {
    case ActionVariant::kFull3d: {
      Vec2 v{cmd[0], cmd[1]};
      if (limits.norm_clamp_linear && Norm(v) > 1.0) v = (1.0 / Norm(v)) * v;
      target.frame = VelocityFrame::kBody;
      target.linear = limits.v_max * v;
      target.angular = limits.omega_max * cmd[2];
      break;
    }
    case ActionVariant::kPlanar2d: {
      Vec2 v{cmd[0], cmd[1]};
      if (limits.norm_clamp_linear && Norm(v) > 1.0) v = (1.0 / Norm(v)) * v;
      target.frame = VelocityFrame::kWorld;
      target.linear = limits.v_max * v;
      break;
    }
    case ActionVariant::kForwardRot:
      target.frame = VelocityFrame::kBody;
      target.linear = {limits.v_max * cmd[0], 0.0};
      target.angular = limits.omega_max * cmd[1];
      break;
    case ActionVariant::kWaypoint:
      target.is_waypoint = true;
      target.direction = {cmd[0], cmd[1]};
      break;
  }
  return target;
}

double SweepAgainstGrid(const GridWorld& world, Vec2 start, Vec2 motion, double radius) {
  const double cs = world.cell_size();
  const Vec2 end = start + motion;
  const int x0 = static_cast<int>(std::floor((std::min(start.x, end.x) - radius) / cs)) - 1;
  const int x1 = static_cast<int>(std::floor((std::max(start.x, end.x) + radius) / cs)) + 1;
  const int y0 = static_cast<int>(std::floor((std::min(start.y, end.y) - radius) / cs)) - 1;
  const int y1 = static_cast<int>(std::floor((std::max(start.y, end.y) + radius) / cs)) + 1;
  double best = kInfinity;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (!world.IsOccupied({x, y})) continue;
      const Rect cell{x * cs, y * cs, (x + 1) * cs, (y + 1) * cs};
      best = std::min(best, SweepAgainstCell(start, motion, cell, radius));
    }
  }
  return best;
}

IntegrationResult Integrate(const AgentState& state, const VelocityTarget& target,
                            const KinematicLimits& limits, const GridWorld& world,
                            std::span<const Vec2> other_agents) {
  const ResolvedMotion motion = Resolve(state, target, limits);
  const Vec2 displacement = limits.dt * motion.velocity;

  double contact = kInfinity;
  if (displacement.x != 0.0 || displacement.y != 0.0) {
    contact = SweepAgainstGrid(world, state.position, displacement, limits.body_radius);
    for (const Vec2& other : other_agents) {
      contact = std::min(contact, SweepAgainstDisc(state.position, displacement, other,
                                                   2.0 * limits.body_radius));
    }
  }

  IntegrationResult result;
  result.state.linear_velocity = motion.velocity;
  result.state.angular_velocity = motion.angular;
  result.state.heading = WrapAngle(state.heading + motion.angular * limits.dt);
  if (contact <= 1.0) {
    result.state.position = StopAt(state.position, displacement, contact);
    result.collided = true;
  } else {
    result.state.position = state.position + displacement;
  }
  return result;
}

std::vector<IntegrationResult> IntegrateAll(std::span<const AgentState> states,
                                            std::span<const VelocityTarget> targets,
                                            const KinematicLimits& limits,
                                            const GridWorld& world) {
  const std::size_t n = states.size();
  if (targets.size() != n) {
    throw std::invalid_argument("IntegrateAll: one target per agent required");
  }
  std::vector<Vec2> snapshot(n);
  for (std::size_t i = 0; i < n; ++i) snapshot[i] = states[i].position;

  std::vector<IntegrationResult> results(n);
  std::vector<Vec2> others;
  others.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(snapshot[j]);
    }
    results[i] = Integrate(states[i], targets[i], limits, world, others);
  }
  if (n < 2) return results;

  const double contact_distance = 2.0 * limits.body_radius;
  std::vector<Vec2> motions(n);
  for (std::size_t i = 0; i < n; ++i) motions[i] = results[i].state.position - snapshot[i];

  // After kMaxPasses shrink passes, overlapping pairs are reverted to their
  // (non-overlapping) snapshot positions; each revert pass zeroes a motion.
  constexpr int kMaxPasses = 16;
  const int pass_limit = kMaxPasses + 2 * static_cast<int>(n) + 2;
  for (int pass = 0; pass < pass_limit; ++pass) {
    bool overlap = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Vec2 pi = snapshot[i] + motions[i];
        const Vec2 pj = snapshot[j] + motions[j];
        if (Norm(pi - pj) >= contact_distance) continue;
        overlap = true;
        results[i].collided = results[j].collided = true;
        if (pass >= kMaxPasses) {
          motions[i] = motions[j] = Vec2{};
          continue;
        }
        // Shrink both motions by the common fraction at first contact.
        const Vec2 relative = motions[i] - motions[j];
        const double s = RayCircleEntry(snapshot[i] - snapshot[j], relative, Vec2{},
                                        contact_distance);
        const double length = Norm(relative);
        const double keep = (s == kInfinity || length == 0.0)
                                ? 0.0
                                : std::max(0.0, s - kContactSkin / length);
        motions[i] = keep * motions[i];
        motions[j] = keep * motions[j];
      }
    }
    if (!overlap) break;
  }
  for (std::size_t i = 0; i < n; ++i) {
    results[i].state.position = snapshot[i] + motions[i];
  }
  return results;
}

}  // namespace imagine
