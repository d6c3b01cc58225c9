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

#ifndef IMAGINE_HARNESS_RUNNER_H_
#define IMAGINE_HARNESS_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "imagine/baselines.h"
#include "imagine/env.h"
#include "imagine/harness/config.h"
#include "imagine/harness/metrics.h"

namespace imagine::harness {

inline constexpr char kMetricsFileName[] = "metrics.jsonl";
inline constexpr char kTrajectoryDirName[] = "trajectories";

std::uint64_t EpisodeSeed(std::uint64_t run_seed, int episode);
std::uint64_t PolicySeed(std::uint64_t episode_seed, int agent);

PolicyContext ContextFor(const RunConfig& config);

// Everything needed to re-drive one episode through the environment.
struct Trajectory {
  int episode = 0;
  std::uint64_t episode_seed = 0;
  int level_id = 0;
  // actions[t][i]: components of agent i's command at step t.
  std::vector<std::vector<std::vector<double>>> actions;
  // Team coverage after reset, then after every step.
  std::vector<double> coverage;
};

std::string FormatTrajectory(const Trajectory& trajectory);
Trajectory ParseTrajectory(const std::string& text);
Trajectory LoadTrajectory(const std::filesystem::path& path);
std::filesystem::path TrajectoryPath(const std::filesystem::path& log_dir, int episode);

struct RunResult {
  std::vector<MetricsRecord> summaries;
  std::filesystem::path metrics_path;
};

// Runs config.episodes episodes of a baseline policy, appending metrics to
// log_dir/metrics.jsonl and, when enabled, writing one trajectory file per
// episode. Level files must already be resolved (see ResolveLevelFile).
RunResult RunBaseline(const RunConfig& config);

// Re-drives a dumped episode and returns its coverage sequence.
std::vector<double> ReplayTrajectory(const RunConfig& config, const Trajectory& trajectory);

// Summary record of the episode just finished by `env`; call after
// EndEpisode so the curriculum counter is current.
MetricsRecord SummaryRecord(const Environment& env, int episode, const StepInfo& last);

}  // namespace imagine::harness

#endif  // IMAGINE_HARNESS_RUNNER_H_
