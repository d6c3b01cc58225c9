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

#ifndef IMAGINE_PARADIGM_H_
#define IMAGINE_PARADIGM_H_

#include <optional>
#include <span>
#include <vector>

#include "imagine/env.h"

namespace imagine {

// Paradigm-shaped view of one environment transition.
//
//  ctce: a single actor stream holding every agent's observation concatenated
//        in agent-index order; one concatenated action comes back.
//  dtde: one local stream per agent; no critic channel.
//  ctde: the dtde streams plus a training-time-only critic channel with all
//        agents' poses and velocities and the team coverage.
struct ParadigmView {
  std::vector<std::vector<double>> actor;
  std::optional<std::vector<double>> critic;
  double reward = 0.0;
};

int ActorStreamCount(const EnvConfig& config);
int ActorObservationDim(const EnvConfig& config);
int ActorActionDim(const EnvConfig& config);
// 6 per agent (x, y, heading, v_x, v_y, omega) plus coverage.
int CriticStateDim(const EnvConfig& config);

std::vector<double> GlobalState(const Environment& env);

ParadigmView WrapObservations(const Environment& env, std::span<const Observation> observations,
                              double reward = 0.0);

// Splits paradigm-shaped actions into one command per agent. Throws
// std::invalid_argument on a stream-count or dimension mismatch.
std::vector<ActionCommand> UnwrapActions(const EnvConfig& config,
                                         std::span<const std::vector<double>> actions);

}  // namespace imagine

#endif  // IMAGINE_PARADIGM_H_
