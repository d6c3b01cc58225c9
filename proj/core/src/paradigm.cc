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

#include "imagine/paradigm.h"

#include <stdexcept>
#include <string>

namespace imagine {

int ActorStreamCount(const EnvConfig& config) {
  return config.paradigm == Paradigm::kCtce ? 1 : config.n_agents;
}

int ActorObservationDim(const EnvConfig& config) {
  const int local = ObservationDim(config);
  return config.paradigm == Paradigm::kCtce ? local * config.n_agents : local;
}

int ActorActionDim(const EnvConfig& config) {
  const int local = ActionDim(config.action_variant);
  return config.paradigm == Paradigm::kCtce ? local * config.n_agents : local;
}

int CriticStateDim(const EnvConfig& config) { return 6 * config.n_agents + 1; }

std::vector<double> GlobalState(const Environment& env) {
  std::vector<double> state;
  state.reserve(CriticStateDim(env.config()));
  for (const AgentState& agent : env.agents()) {
    state.insert(state.end(), {agent.position.x, agent.position.y, agent.heading,
                               agent.linear_velocity.x, agent.linear_velocity.y,
                               agent.angular_velocity});
  }
  state.push_back(env.coverage());
  return state;
}

ParadigmView WrapObservations(const Environment& env, std::span<const Observation> observations,
                              double reward) {
  const EnvConfig& config = env.config();
  ParadigmView view;
  view.reward = reward;
  if (config.paradigm == Paradigm::kCtce) {
    std::vector<double> joint;
    joint.reserve(static_cast<std::size_t>(ActorObservationDim(config)));
    for (const Observation& obs : observations) {
      const auto flat = obs.Flatten();
      joint.insert(joint.end(), flat.begin(), flat.end());
    }
    view.actor.push_back(std::move(joint));
    return view;
  }
  for (const Observation& obs : observations) view.actor.push_back(obs.Flatten());
  if (config.paradigm == Paradigm::kCtde) view.critic = GlobalState(env);
  return view;
}

std::vector<ActionCommand> UnwrapActions(const EnvConfig& config,
                                         std::span<const std::vector<double>> actions) {
  const int streams = ActorStreamCount(config);
  if (static_cast<int>(actions.size()) != streams) {
    throw std::invalid_argument("expected " + std::to_string(streams) + " action stream(s), got " +
                                std::to_string(actions.size()));
  }
  const int local = ActionDim(config.action_variant);
  std::vector<ActionCommand> commands;
  commands.reserve(config.n_agents);
  if (config.paradigm == Paradigm::kCtce) {
    const auto& joint = actions.front();
    if (static_cast<int>(joint.size()) != local * config.n_agents) {
      throw std::invalid_argument("joint action must have " +
                                  std::to_string(local * config.n_agents) + " components");
    }
    for (int i = 0; i < config.n_agents; ++i) {
      commands.emplace_back(config.action_variant,
                            std::span(joint).subspan(static_cast<std::size_t>(i) * local, local));
    }
    return commands;
  }
  for (const auto& action : actions) commands.emplace_back(config.action_variant, action);
  return commands;
}

}  // namespace imagine
