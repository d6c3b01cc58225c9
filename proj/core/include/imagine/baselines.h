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

#ifndef IMAGINE_BASELINES_H_
#define IMAGINE_BASELINES_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "imagine/env.h"
#include "imagine/random.h"

namespace imagine {

enum class PolicyKind { kRandomWalk, kStationary, kFrontierGreedy };

std::string_view ToString(PolicyKind kind);
// Accepts "random_walk", "stationary", "frontier_greedy".
PolicyKind ParsePolicyKind(std::string_view name);

// What a scripted policy may know about the (homogeneous) agents it drives.
struct PolicyContext {
  ActionVariant variant = ActionVariant::kPlanar2d;
  KinematicLimits limits;
  double cell_size = kDefaultCellSize;
  double epsilon = 0.3;  // log-odds known threshold
  // Random walk re-samples its command every this many steps.
  int random_hold_steps = 10;

  static PolicyContext FromConfig(const EnvConfig& config);
};

// A per-agent scripted controller acting on that agent's local observation.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual ActionCommand Act(const Observation& obs) = 0;
};

class StationaryPolicy final : public Policy {
 public:
  explicit StationaryPolicy(ActionVariant variant) : variant_(variant) {}
  ActionCommand Act(const Observation&) override { return ActionCommand::Zero(variant_); }

 private:
  ActionVariant variant_;
};

class RandomWalkPolicy final : public Policy {
 public:
  RandomWalkPolicy(const PolicyContext& context, std::uint64_t seed);
  ActionCommand Act(const Observation& obs) override;

 private:
  PolicyContext context_;
  Rng rng_;
  std::vector<double> current_;
  int held_ = 0;
};

// Cell classes of an egocentric window, as used by frontier search.
enum class WindowCell : std::uint8_t { kUnknown, kFree, kOccupied };

struct FrontierPath {
  // Window cells (col, row) from the agent's cell to the frontier, inclusive.
  std::vector<CellIndex> cells;
};

// Breadth-first search over free cells of the window from its center to the
// nearest frontier (a free cell 4-adjacent to an unknown cell). Cells within
// `inflation` cells of an occupied cell may be left but not entered.
std::optional<FrontierPath> FindFrontier(const std::vector<WindowCell>& cells, int size,
                                         int inflation);

std::vector<WindowCell> ClassifyWindow(const EgocentricMap& map, double epsilon);

// Window-local frontier follower. Moves toward the nearest frontier and falls
// back to a seeded exploratory heading when none is visible; a seeded random
// turn follows any contact.
class FrontierGreedyPolicy final : public Policy {
 public:
  FrontierGreedyPolicy(const PolicyContext& context, std::uint64_t seed);
  ActionCommand Act(const Observation& obs) override;

 private:
  ActionCommand Command(Vec2 direction, double heading) const;
  Vec2 RandomDirection();

  PolicyContext context_;
  Rng rng_;
  std::optional<Vec2> last_position_;
  double last_speed_ = 0.0;
  Vec2 explore_direction_;
  int escape_steps_ = 0;
};

// Throws std::invalid_argument for frontier_greedy when the configured
// observation has no ego map.
std::unique_ptr<Policy> MakePolicy(PolicyKind kind, const EnvConfig& config, std::uint64_t seed);

}  // namespace imagine

#endif  // IMAGINE_BASELINES_H_
