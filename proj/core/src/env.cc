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

#include "imagine/env.h"

#include <numbers>
#include <stdexcept>

#include "imagine/random.h"

namespace imagine {

std::string_view ToString(Paradigm paradigm) {
  switch (paradigm) {
    case Paradigm::kCtce:
      return "ctce";
    case Paradigm::kCtde:
      return "ctde";
    case Paradigm::kDtde:
      return "dtde";
  }
  return "unknown";
}

Paradigm ParseParadigm(std::string_view name) {
  for (Paradigm p : {Paradigm::kCtce, Paradigm::kCtde, Paradigm::kDtde}) {
    if (ToString(p) == name) return p;
  }
  throw std::invalid_argument("unknown paradigm '" + std::string(name) + "'");
}

void EnvConfig::Validate() const {
  if (n_agents < 1 || n_agents > 4) {
    throw std::invalid_argument("EnvConfig: n_agents must be in [1, 4]");
  }
  if (!world && !level_spec && (level_id < 0 || level_id >= kNumLevels)) {
    throw std::invalid_argument("EnvConfig: level_id must be in [0, 6]");
  }
  if (episode_steps < 1) {
    throw std::invalid_argument("EnvConfig: episode_steps must be at least 1");
  }
  if (ego_window < 1) {
    throw std::invalid_argument("EnvConfig: ego_window must be at least 1");
  }
  kinematics.Validate();
  lidar.Validate();
  comm.Validate();
  mapping.Validate();
  if (curriculum) curriculum->Validate();
}

double ComputeReward(int known_before, int known_after, int collisions,
                     const EnvConfig& config, double cell_size) {
  double a_max = MaxDiscoverableArea(config.lidar.max_range, config.kinematics.v_max,
                                     config.kinematics.dt);
  if (config.normalize_by_team) a_max *= config.n_agents;
  const double cell_area = cell_size * cell_size;
  const double delta_area = (known_after - known_before) * cell_area / a_max;
  return config.w_area * delta_area + config.w_collision * config.r_collision * collisions;
}

std::vector<double> Observation::Flatten() const {
  std::vector<double> out;
  if (ego_map) out.insert(out.end(), ego_map->probabilities.begin(), ego_map->probabilities.end());
  out.insert(out.end(), lidar.begin(), lidar.end());
  if (include_pose_velocity) {
    out.insert(out.end(), pose.begin(), pose.end());
    out.insert(out.end(), velocities.begin(), velocities.end());
  }
  out.insert(out.end(), distances.begin(), distances.end());
  return out;
}

ObservationLayout LayoutFor(const EnvConfig& config) {
  ObservationLayout layout;
  const ObservationVariant& v = config.observation;
  if (v.ego_map) layout.emplace_back("ego_map", config.ego_window * config.ego_window);
  if (v.lidar) layout.emplace_back("lidar", config.lidar.ray_count);
  if (v.pose_velocity) {
    layout.emplace_back("pose", 3);
    layout.emplace_back("velocities", 3);
  }
  if (v.inter_agent_distances) layout.emplace_back("distances", config.n_agents - 1);
  return layout;
}

int ObservationDim(const EnvConfig& config) {
  int dim = 0;
  for (const auto& [name, size] : LayoutFor(config)) dim += size;
  return dim;
}

namespace {

constexpr std::uint64_t kHeadingStream = 0x4ead;

EnvConfig Validated(EnvConfig config) {
  config.Validate();
  return config;
}

}  // namespace

Environment::Environment(EnvConfig config)
    : config_(Validated(std::move(config))),
      messages_(config_.n_agents, config_.comm, config_.kinematics.dt) {}

std::shared_ptr<const GridWorld> Environment::WorldFor(int level_id) {
  auto it = level_cache_.find(level_id);
  if (it != level_cache_.end()) return it->second;
  LevelSpec spec = config_.level_spec && config_.level_spec->level_id == level_id
                       ? *config_.level_spec
                       : DefaultLevelSpec(level_id);
  spec.body_radius = config_.kinematics.body_radius;
  auto world = std::make_shared<const GridWorld>(BuildLevel(spec));
  level_cache_.emplace(level_id, world);
  return world;
}

std::vector<Disc> Environment::OthersOf(int agent) const {
  std::vector<Disc> others;
  for (int j = 0; j < config_.n_agents; ++j) {
    if (j != agent) others.push_back({agents_[j].position, config_.kinematics.body_radius});
  }
  return others;
}

void Environment::ScanAll() {
  for (int i = 0; i < config_.n_agents; ++i) {
    const auto others = OthersOf(i);
    scans_[i] = Scan(*world_, others, agents_[i], config_.lidar);
  }
}

void Environment::MarkDirty(const CellDelta& delta) {
  for (const CellChange& change : delta.changes) {
    if (dirty_stamp_[change.index] == stamp_) continue;
    dirty_stamp_[change.index] = stamp_;
    dirty_cells_.push_back(change.index);
  }
}

void Environment::RefreshTeam() {
  const OccupancyGrid& reference = beliefs_.front();
  const auto& explorable = world_->reachable_mask();
  for (const int index : dirty_cells_) {
    LogOddsTicks fused = 0;
    for (const OccupancyGrid& belief : beliefs_) fused = reference.Clamp(fused + belief.ticks(index));
    const bool was_known = reference.IsKnownTicks(team_ticks_[index]);
    const bool is_known = reference.IsKnownTicks(fused);
    team_ticks_[index] = fused;
    if (was_known == is_known) continue;
    const int sign = is_known ? 1 : -1;
    team_known_ += sign;
    if (explorable[index]) team_known_explorable_ += sign;
  }
  dirty_cells_.clear();
  ++stamp_;
}

double Environment::coverage() const {
  if (!world_ || world_->explorable_cell_count() == 0) return 0.0;
  return static_cast<double>(team_known_explorable_) / world_->explorable_cell_count();
}

OccupancyGrid Environment::TeamBelief() const {
  OccupancyGrid team = beliefs_.front();
  for (std::size_t i = 1; i < beliefs_.size(); ++i) FuseInto(team, beliefs_[i]);
  return team;
}

std::optional<CurriculumStep> Environment::EndEpisode() {
  if (ended_) return std::nullopt;
  ended_ = true;
  running_ = false;
  if (!config_.curriculum || config_.curriculum->mode != CurriculumMode::kSequential) {
    return std::nullopt;
  }
  const CurriculumStep update = UpdateCurriculum(*config_.curriculum, curriculum_state_, coverage());
  curriculum_state_ = update.state;
  return update;
}

std::vector<Observation> Environment::Reset(std::uint64_t episode_seed) {
  EndEpisode();
  Rng rng(MixSeed(episode_seed, 0));

  if (config_.world) {
    world_ = config_.world;
  } else if (config_.curriculum) {
    const auto& order = config_.curriculum->level_order;
    const int level = config_.curriculum->mode == CurriculumMode::kSequential
                          ? order[curriculum_state_.level_index]
                          : order[rng.Below(order.size())];
    world_ = WorldFor(level);
  } else {
    world_ = WorldFor(config_.level_spec ? config_.level_spec->level_id : config_.level_id);
  }

  const int n = config_.n_agents;
  if (static_cast<int>(world_->spawn_points().size()) < n) {
    throw std::invalid_argument("Environment::Reset: level has fewer spawn points than agents");
  }
  // Spawn headings follow the configured seed, not the episode seed, so a
  // fixed config always starts from the same poses.
  Rng heading_rng(MixSeed(config_.seed, kHeadingStream));
  agents_.assign(n, AgentState{});
  for (int i = 0; i < n; ++i) {
    agents_[i].position = world_->spawn_points()[i];
    agents_[i].heading = WrapAngle(heading_rng.Uniform(-std::numbers::pi, std::numbers::pi));
  }
  beliefs_.assign(n, OccupancyGrid::ForWorld(*world_, config_.mapping));
  scans_.assign(n, LidarScan{});
  messages_.Reset();

  const auto cells = static_cast<std::size_t>(world_->cell_count());
  team_ticks_.assign(cells, 0);
  dirty_stamp_.assign(cells, 0);
  dirty_cells_.clear();
  stamp_ = 1;
  team_known_ = team_known_explorable_ = 0;
  totals_ = {};
  monotone_ = true;
  step_ = 0;

  ScanAll();
  for (int i = 0; i < n; ++i) {
    const CellDelta delta = UpdateFromScan(beliefs_[i], scans_[i], config_.lidar);
    totals_.cells_self += delta.discovered_count;
    MarkDirty(delta);
  }
  RefreshTeam();

  std::vector<Vec2> positions(n);
  for (int i = 0; i < n; ++i) positions[i] = agents_[i].position;
  graph_ = BuildGraph(positions, config_.comm, 0);
  messages_.Tick(0, graph_, scans_, beliefs_);

  totals_.initial_known_cells = team_known_;
  running_ = true;
  ended_ = false;
  return Observe();
}

StepResult Environment::Step(std::span<const ActionCommand> joint_action) {
  if (!running_) {
    throw std::logic_error("Environment::Step: no running episode; call Reset");
  }
  const int n = config_.n_agents;
  if (static_cast<int>(joint_action.size()) != n) {
    throw std::invalid_argument("Environment::Step: expected " + std::to_string(n) +
                                " actions, got " + std::to_string(joint_action.size()));
  }
  std::vector<VelocityTarget> targets(n);
  for (int i = 0; i < n; ++i) {
    if (joint_action[i].variant() != config_.action_variant) {
      throw std::invalid_argument("Environment::Step: action variant mismatch for agent " +
                                  std::to_string(i));
    }
    targets[i] = ScaleAction(joint_action[i], config_.kinematics);
  }
  ++step_;
  const int known_before = team_known_;

  // 1. Kinematics from a shared snapshot.
  const auto moved = IntegrateAll(agents_, targets, config_.kinematics, *world_);
  int collisions = 0;
  for (int i = 0; i < n; ++i) {
    agents_[i] = moved[i].state;
    collisions += moved[i].collided ? 1 : 0;
  }

  // 2. Sensing.
  ScanAll();

  // 3. Network.
  std::vector<Vec2> positions(n);
  for (int i = 0; i < n; ++i) positions[i] = agents_[i].position;
  graph_ = BuildGraph(positions, config_.comm, step_);
  const std::vector<CommEvent> delivered = messages_.Tick(step_, graph_, scans_, beliefs_);

  // 4. Beliefs: own scans first, then delivered messages.
  StepInfo info;
  for (int i = 0; i < n; ++i) {
    const CellDelta delta = UpdateFromScan(beliefs_[i], scans_[i], config_.lidar);
    info.cells_self += delta.discovered_count;
    MarkDirty(delta);
  }
  for (const CommEvent& event : delivered) {
    OccupancyGrid& belief = beliefs_[event.receiver];
    CellDelta delta;
    if (event.kind == MessageKind::kLidarShare) {
      delta = UpdateFromScan(belief, DecodeLidarShare(*event.payload).scan, config_.lidar);
    } else {
      delta = FuseInto(belief, DeserializeGrid(*event.payload, config_.mapping));
    }
    info.cells_collab += delta.discovered_count;
    MarkDirty(delta);
  }
  RefreshTeam();

  // 5. Reward.
  const int known_after = team_known_;
  if (known_after < known_before) monotone_ = false;
  StepResult result;
  result.reward = ComputeReward(known_before, known_after, collisions, config_,
                                world_->cell_size());

  // 6. Termination.
  result.terminated = config_.kill_on_collision && collisions > 0;
  result.truncated = step_ >= config_.episode_steps;
  if (result.terminated || result.truncated) running_ = false;

  info.step = step_;
  info.level_id = world_->level_id();
  info.coverage = coverage();
  info.team_known_cells = team_known_;
  info.collisions = collisions;
  info.bytes_lidar = messages_.metrics().bytes_lidar;
  info.bytes_map = messages_.metrics().bytes_map;
  info.events_dropped = messages_.metrics().dropped;
  info.monotone = monotone_;
  result.info = info;

  totals_.reward_sum += result.reward;
  totals_.cells_self += info.cells_self;
  totals_.cells_collab += info.cells_collab;
  totals_.collisions += collisions;
  totals_.steps = step_;

  result.observations = Observe();
  return result;
}

Observation Environment::ObserveAgent(int agent) const {
  const ObservationVariant& v = config_.observation;
  const AgentState& state = agents_[agent];
  Observation obs;
  if (v.ego_map) obs.ego_map = ExtractEgocentric(beliefs_[agent], state.position, config_.ego_window);
  if (v.lidar) obs.lidar = scans_[agent].ranges;
  obs.include_pose_velocity = v.pose_velocity;
  obs.pose = {state.position.x, state.position.y, state.heading};
  obs.velocities = {state.linear_velocity.x, state.linear_velocity.y, state.angular_velocity};
  if (v.inter_agent_distances) {
    for (int j = 0; j < config_.n_agents; ++j) {
      if (j != agent) obs.distances.push_back(Norm(agents_[j].position - state.position));
    }
  }
  return obs;
}

std::vector<Observation> Environment::Observe() const {
  std::vector<Observation> out;
  out.reserve(config_.n_agents);
  for (int i = 0; i < config_.n_agents; ++i) out.push_back(ObserveAgent(i));
  return out;
}

}  // namespace imagine
