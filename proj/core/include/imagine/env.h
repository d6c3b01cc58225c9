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

#ifndef IMAGINE_ENV_H_
#define IMAGINE_ENV_H_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imagine/curriculum.h"
#include "imagine/kinematics.h"
#include "imagine/mapping.h"
#include "imagine/network.h"
#include "imagine/sensing.h"
#include "imagine/world.h"

namespace imagine {

enum class Paradigm { kCtce, kCtde, kDtde };

std::string_view ToString(Paradigm paradigm);
Paradigm ParseParadigm(std::string_view name);

// Which blocks make up an agent's observation vector.
struct ObservationVariant {
  bool ego_map = true;
  bool lidar = true;
  bool pose_velocity = true;
  bool inter_agent_distances = false;
};

struct EnvConfig {
  int n_agents = 1;
  int level_id = 0;
  // Overrides level_id when set.
  std::optional<LevelSpec> level_spec;
  // Externally authored map; overrides both of the above.
  std::shared_ptr<const GridWorld> world;

  Paradigm paradigm = Paradigm::kDtde;
  int episode_steps = 1000;
  KinematicLimits kinematics;
  ActionVariant action_variant = ActionVariant::kPlanar2d;
  ObservationVariant observation;
  int ego_window = 64;

  double w_area = 1.0;
  double w_collision = 0.0;
  double r_collision = -1.0;
  // Divide the area term by n * A_max instead of A_max.
  bool normalize_by_team = false;
  bool kill_on_collision = false;

  CommConfig comm;
  LidarConfig lidar;
  MappingParams mapping;
  std::optional<CurriculumConfig> curriculum;
  std::uint64_t seed = 0;

  void Validate() const;
};

// A_max = 2 r v_max dt: the most area one agent can newly sweep per step.
inline double MaxDiscoverableArea(double sensor_range, double v_max, double dt) {
  return 2.0 * sensor_range * v_max * dt;
}

// Shared team reward for one transition. Known counts are team-level.
double ComputeReward(int known_before, int known_after, int collisions,
                     const EnvConfig& config, double cell_size);

struct Observation {
  std::optional<EgocentricMap> ego_map;
  std::vector<double> lidar;
  std::array<double, 3> pose{};        // x, y, heading
  std::array<double, 3> velocities{};  // v_x, v_y, omega
  std::vector<double> distances;       // to each peer, agent-index order
  // Pose and velocities are always filled; this controls flattening only.
  bool include_pose_velocity = true;

  // Blocks in layout order: ego_map, lidar, pose, velocities, distances.
  std::vector<double> Flatten() const;
};

// Name and length of each block of a flattened observation.
using ObservationLayout = std::vector<std::pair<std::string, int>>;
ObservationLayout LayoutFor(const EnvConfig& config);
int ObservationDim(const EnvConfig& config);

struct StepInfo {
  int step = 0;
  int level_id = 0;
  double coverage = 0.0;
  int team_known_cells = 0;
  int cells_self = 0;    // discovered this step by own scans
  int cells_collab = 0;  // discovered this step through delivered messages
  int collisions = 0;    // agents that collided this step
  std::uint64_t bytes_lidar = 0;  // cumulative this episode
  std::uint64_t bytes_map = 0;
  int events_dropped = 0;
  // False once the team known-cell count has decreased this episode.
  bool monotone = true;
};

struct StepResult {
  std::vector<Observation> observations;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  StepInfo info;
};

struct EpisodeTotals {
  double reward_sum = 0.0;
  int cells_self = 0;
  int cells_collab = 0;
  int collisions = 0;
  int steps = 0;
  int initial_known_cells = 0;
};

// The episode loop. Step phases: move all agents from one snapshot, scan,
// run the network tick, apply own scans then delivered messages to beliefs,
// compute the shared reward, evaluate termination.
class Environment {
 public:
  explicit Environment(EnvConfig config);

  // Throws std::invalid_argument when the level has fewer spawn points than
  // agents. Closes the previous episode first (see EndEpisode).
  std::vector<Observation> Reset(std::uint64_t episode_seed);

  // One command per agent, each of the configured variant. Throws
  // std::invalid_argument on arity or variant mismatch and std::logic_error
  // when no episode is running.
  StepResult Step(std::span<const ActionCommand> joint_action);

  // Feeds the finished episode's coverage to the curriculum (sequential mode)
  // and returns the update. Idempotent per episode.
  std::optional<CurriculumStep> EndEpisode();

  const EnvConfig& config() const { return config_; }
  const GridWorld& world() const { return *world_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  const std::vector<OccupancyGrid>& beliefs() const { return beliefs_; }
  const std::vector<LidarScan>& last_scans() const { return scans_; }
  const MessageLayer& messages() const { return messages_; }
  const CommGraph& graph() const { return graph_; }
  const CurriculumState& curriculum_state() const { return curriculum_state_; }
  const EpisodeTotals& totals() const { return totals_; }

  int step_index() const { return step_; }
  bool episode_running() const { return running_; }
  int team_known_cells() const { return team_known_; }
  double coverage() const;
  bool monotone() const { return monotone_; }

  // Fold of all beliefs under fusion, in agent order.
  OccupancyGrid TeamBelief() const;

 private:
  std::shared_ptr<const GridWorld> WorldFor(int level_id);
  std::vector<Disc> OthersOf(int agent) const;
  void ScanAll();
  void MarkDirty(const CellDelta& delta);
  void RefreshTeam();
  std::vector<Observation> Observe() const;
  Observation ObserveAgent(int agent) const;

  EnvConfig config_;
  std::map<int, std::shared_ptr<const GridWorld>> level_cache_;
  std::shared_ptr<const GridWorld> world_;
  std::vector<AgentState> agents_;
  std::vector<OccupancyGrid> beliefs_;
  std::vector<LidarScan> scans_;
  MessageLayer messages_;
  CommGraph graph_;
  CurriculumState curriculum_state_;

  // Team fold, maintained incrementally over cells touched each step.
  std::vector<LogOddsTicks> team_ticks_;
  std::vector<std::uint32_t> dirty_stamp_;
  std::vector<int> dirty_cells_;
  std::uint32_t stamp_ = 0;
  int team_known_ = 0;
  int team_known_explorable_ = 0;

  EpisodeTotals totals_;
  int step_ = 0;
  bool running_ = false;
  bool ended_ = true;
  bool monotone_ = true;
};

}  // namespace imagine

#endif  // IMAGINE_ENV_H_
