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

#include "imagine/baselines.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>
#include <string>

namespace imagine {
namespace {

// Steps spent on a random heading after a contact.
constexpr int kEscapeSteps = 8;
// Extra clearance beyond the body radius when inflating obstacles.
constexpr double kClearance = 0.02;

}  // namespace

std::string_view ToString(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kRandomWalk:
      return "random_walk";
    case PolicyKind::kStationary:
      return "stationary";
    case PolicyKind::kFrontierGreedy:
      return "frontier_greedy";
  }
  return "unknown";
}

PolicyKind ParsePolicyKind(std::string_view name) {
  for (PolicyKind k : {PolicyKind::kRandomWalk, PolicyKind::kStationary,
                       PolicyKind::kFrontierGreedy}) {
    if (ToString(k) == name) return k;
  }
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

PolicyContext PolicyContext::FromConfig(const EnvConfig& config) {
  PolicyContext context;
  context.variant = config.action_variant;
  context.limits = config.kinematics;
  context.cell_size = config.world ? config.world->cell_size()
                      : config.level_spec ? config.level_spec->cell_size
                                          : kDefaultCellSize;
  context.epsilon = config.mapping.epsilon;
  return context;
}

RandomWalkPolicy::RandomWalkPolicy(const PolicyContext& context, std::uint64_t seed)
    : context_(context), rng_(seed) {}

ActionCommand RandomWalkPolicy::Act(const Observation&) {
  if (held_ == 0 || current_.empty()) {
    current_.resize(ActionDim(context_.variant));
    for (double& c : current_) c = rng_.Uniform(-1.0, 1.0);
  }
  held_ = (held_ + 1) % std::max(1, context_.random_hold_steps);
  return ActionCommand(context_.variant, current_);
}

std::vector<WindowCell> ClassifyWindow(const EgocentricMap& map, double epsilon) {
  const double p_free = ProbabilityFromLogOdds(-epsilon);
  const double p_occupied = ProbabilityFromLogOdds(epsilon);
  std::vector<WindowCell> cells(map.probabilities.size(), WindowCell::kUnknown);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double p = map.probabilities[i];
    if (p < p_free) {
      cells[i] = WindowCell::kFree;
    } else if (p > p_occupied) {
      cells[i] = WindowCell::kOccupied;
    }
  }
  return cells;
}

std::optional<FrontierPath> FindFrontier(const std::vector<WindowCell>& cells, int size,
                                         int inflation) {
  auto at = [&](int c, int r) { return cells[r * size + c]; };
  auto inside = [&](int c, int r) { return c >= 0 && r >= 0 && c < size && r < size; };

  std::vector<std::uint8_t> inflated(cells.size(), 0);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      if (at(c, r) != WindowCell::kOccupied) continue;
      for (int dr = -inflation; dr <= inflation; ++dr) {
        for (int dc = -inflation; dc <= inflation; ++dc) {
          if (dr * dr + dc * dc > inflation * inflation || !inside(c + dc, r + dr)) continue;
          inflated[(r + dr) * size + c + dc] = 1;
        }
      }
    }
  }
  auto is_frontier = [&](int c, int r) {
    if (at(c, r) != WindowCell::kFree) return false;
    const int n[4][2] = {{c + 1, r}, {c - 1, r}, {c, r + 1}, {c, r - 1}};
    for (const auto& p : n) {
      if (inside(p[0], p[1]) && at(p[0], p[1]) == WindowCell::kUnknown) return true;
    }
    return false;
  };

  const int center = size / 2;
  const int start = center * size + center;
  std::vector<int> parent(cells.size(), -1);
  parent[start] = start;
  std::deque<int> queue = {start};
  while (!queue.empty()) {
    const int index = queue.front();
    queue.pop_front();
    const int c = index % size;
    const int r = index / size;
    if (index != start && is_frontier(c, r)) {
      FrontierPath path;
      for (int i = index; i != start; i = parent[i]) path.cells.push_back({i % size, i / size});
      path.cells.push_back({center, center});
      std::reverse(path.cells.begin(), path.cells.end());
      return path;
    }
    const int moves[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (const auto& m : moves) {
      const int nc = c + m[0];
      const int nr = r + m[1];
      if (!inside(nc, nr)) continue;
      const int next = nr * size + nc;
      if (parent[next] != -1 || at(nc, nr) != WindowCell::kFree) continue;
      if (inflated[next] && !inflated[index]) continue;
      parent[next] = index;
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

FrontierGreedyPolicy::FrontierGreedyPolicy(const PolicyContext& context, std::uint64_t seed)
    : context_(context), rng_(seed) {
  explore_direction_ = RandomDirection();
}

Vec2 FrontierGreedyPolicy::RandomDirection() {
  const double angle = rng_.Uniform(-std::numbers::pi, std::numbers::pi);
  return {std::cos(angle), std::sin(angle)};
}

ActionCommand FrontierGreedyPolicy::Command(Vec2 direction, double heading) const {
  const double length = Norm(direction);
  if (length < 1e-12) return ActionCommand::Zero(context_.variant);
  const Vec2 unit = (1.0 / length) * direction;
  switch (context_.variant) {
    case ActionVariant::kPlanar2d:
    case ActionVariant::kWaypoint: {
      const double c[2] = {unit.x, unit.y};
      return ActionCommand(context_.variant, c);
    }
    case ActionVariant::kFull3d: {
      const Vec2 body = Rotate(unit, -heading);
      const double c[3] = {body.x, body.y, 0.0};
      return ActionCommand(context_.variant, c);
    }
    case ActionVariant::kForwardRot: {
      const double error = WrapAngle(std::atan2(unit.y, unit.x) - heading);
      const double turn = error / (context_.limits.omega_max * context_.limits.dt);
      const double c[2] = {std::abs(error) < kWaypointHeadingTolerance ? 1.0 : 0.0, turn};
      return ActionCommand(context_.variant, c);
    }
  }
  return ActionCommand::Zero(context_.variant);
}

ActionCommand FrontierGreedyPolicy::Act(const Observation& obs) {
  if (!obs.ego_map) {
    throw std::invalid_argument("frontier_greedy needs the ego_map observation");
  }
  const Vec2 position{obs.pose[0], obs.pose[1]};
  const double heading = obs.pose[2];

  // Contact: moved well short of the commanded distance.
  if (last_position_ && last_speed_ > 0.0) {
    const double expected = last_speed_ * context_.limits.dt;
    if (Norm(position - *last_position_) < 0.5 * expected) {
      explore_direction_ = RandomDirection();
      escape_steps_ = kEscapeSteps;
    }
  }
  last_position_ = position;

  Vec2 direction = explore_direction_;
  if (escape_steps_ > 0) {
    --escape_steps_;
  } else {
    const EgocentricMap& map = *obs.ego_map;
    const auto cells = ClassifyWindow(map, context_.epsilon);
    const int inflation = static_cast<int>(
        std::ceil((context_.limits.body_radius + kClearance) / context_.cell_size));
    if (const auto path = FindFrontier(cells, map.size, inflation)) {
      // The path holds at least the start cell and the frontier cell.
      const CellIndex target = path->cells[1];
      direction = {static_cast<double>(target.x - map.size / 2),
                   static_cast<double>(target.y - map.size / 2)};
    }
  }

  const ActionCommand command = Command(direction, heading);
  const VelocityTarget target = ScaleAction(command, context_.limits);
  last_speed_ = target.is_waypoint ? context_.limits.v_max
                                   : Norm(target.frame == VelocityFrame::kBody
                                              ? Rotate(target.linear, heading)
                                              : target.linear);
  return command;
}

std::unique_ptr<Policy> MakePolicy(PolicyKind kind, const EnvConfig& config, std::uint64_t seed) {
  const PolicyContext context = PolicyContext::FromConfig(config);
  switch (kind) {
    case PolicyKind::kStationary:
      return std::make_unique<StationaryPolicy>(config.action_variant);
    case PolicyKind::kRandomWalk:
      return std::make_unique<RandomWalkPolicy>(context, seed);
    case PolicyKind::kFrontierGreedy:
      if (!config.observation.ego_map) {
        throw std::invalid_argument("frontier_greedy needs the ego_map observation");
      }
      return std::make_unique<FrontierGreedyPolicy>(context, seed);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace imagine
