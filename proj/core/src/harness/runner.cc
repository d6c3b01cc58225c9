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

#include "imagine/harness/runner.h"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "imagine/random.h"

namespace imagine::harness {
namespace {

constexpr std::uint64_t kPolicyStream = 0x9011c7;

MetricsRecord StepRecord(const Environment& env, int episode, const StepInfo& info) {
  MetricsRecord r;
  r.episode = episode;
  r.step = info.step;
  r.coverage = info.coverage;
  r.reward_sum = env.totals().reward_sum;
  r.cells_self = env.totals().cells_self;
  r.cells_collab = env.totals().cells_collab;
  r.bytes_lidar = info.bytes_lidar;
  r.bytes_map = info.bytes_map;
  r.collisions = env.totals().collisions;
  r.level_id = info.level_id;
  r.curriculum_counter = env.curriculum_state().pass_counter;
  return r;
}

}  // namespace

std::uint64_t EpisodeSeed(std::uint64_t run_seed, int episode) {
  return MixSeed(run_seed, static_cast<std::uint64_t>(episode));
}

std::uint64_t PolicySeed(std::uint64_t episode_seed, int agent) {
  return MixSeed(episode_seed, kPolicyStream + static_cast<std::uint64_t>(agent));
}

PolicyContext ContextFor(const RunConfig& config) {
  PolicyContext context = PolicyContext::FromConfig(config.env);
  context.random_hold_steps = config.random_hold_steps;
  return context;
}

std::string FormatTrajectory(const Trajectory& t) {
  nlohmann::ordered_json j;
  j["episode"] = t.episode;
  j["episode_seed"] = t.episode_seed;
  j["level_id"] = t.level_id;
  j["actions"] = t.actions;
  j["coverage"] = t.coverage;
  return j.dump();
}

Trajectory ParseTrajectory(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Trajectory t;
    t.episode = j.at("episode").get<int>();
    t.episode_seed = j.at("episode_seed").get<std::uint64_t>();
    t.level_id = j.at("level_id").get<int>();
    t.actions = j.at("actions").get<decltype(t.actions)>();
    t.coverage = j.at("coverage").get<std::vector<double>>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad trajectory: ") + e.what());
  }
}

Trajectory LoadTrajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseTrajectory(text.str());
}

std::filesystem::path TrajectoryPath(const std::filesystem::path& log_dir, int episode) {
  char name[32];
  std::snprintf(name, sizeof(name), "episode_%05d.json", episode);
  return log_dir / kTrajectoryDirName / name;
}

MetricsRecord SummaryRecord(const Environment& env, int episode, const StepInfo& last) {
  MetricsRecord r = StepRecord(env, episode, last);
  r.step = kSummaryStep;
  r.coverage = env.coverage();
  return r;
}

RunResult RunBaseline(const RunConfig& config) {
  config.Validate();
  const PolicyKind kind = ParsePolicyKind(config.policy);
  const PolicyContext context = ContextFor(config);

  RunResult result;
  result.metrics_path = config.log_dir / kMetricsFileName;
  MetricsWriter writer(result.metrics_path, config.metrics_flush_every);
  if (config.dump_trajectories) {
    std::filesystem::create_directories(config.log_dir / kTrajectoryDirName);
  }

  Environment env(config.env);
  const int n = config.env.n_agents;
  for (int episode = 0; episode < config.episodes; ++episode) {
    const std::uint64_t seed = EpisodeSeed(config.env.seed, episode);
    std::vector<Observation> obs = env.Reset(seed);
    std::vector<std::unique_ptr<Policy>> policies;
    for (int i = 0; i < n; ++i) {
      switch (kind) {
        case PolicyKind::kStationary:
          policies.push_back(std::make_unique<StationaryPolicy>(context.variant));
          break;
        case PolicyKind::kRandomWalk:
          policies.push_back(std::make_unique<RandomWalkPolicy>(context, PolicySeed(seed, i)));
          break;
        case PolicyKind::kFrontierGreedy:
          policies.push_back(std::make_unique<FrontierGreedyPolicy>(context, PolicySeed(seed, i)));
          break;
      }
    }

    Trajectory trajectory;
    trajectory.episode = episode;
    trajectory.episode_seed = seed;
    trajectory.level_id = env.world().level_id();
    trajectory.coverage.push_back(env.coverage());

    StepInfo last;
    last.level_id = env.world().level_id();
    last.coverage = env.coverage();
    std::vector<ActionCommand> actions;
    for (;;) {
      actions.clear();
      for (int i = 0; i < n; ++i) actions.push_back(policies[i]->Act(obs[i]));
      StepResult step = env.Step(actions);
      last = step.info;
      if (config.dump_trajectories) {
        auto& row = trajectory.actions.emplace_back();
        for (const ActionCommand& a : actions) row.emplace_back(a.components().begin(), a.components().end());
        trajectory.coverage.push_back(step.info.coverage);
      }
      if (config.log_steps) writer.Write(StepRecord(env, episode, step.info));
      obs = std::move(step.observations);
      if (step.terminated || step.truncated) break;
    }
    env.EndEpisode();
    const MetricsRecord summary = SummaryRecord(env, episode, last);
    writer.Write(summary);
    result.summaries.push_back(summary);

    if (config.dump_trajectories) {
      std::ofstream out(TrajectoryPath(config.log_dir, episode), std::ios::binary);
      out << FormatTrajectory(trajectory) << '\n';
      if (!out) throw std::runtime_error("cannot write trajectory for episode " +
                                         std::to_string(episode));
    }
  }
  writer.Flush();
  return result;
}

std::vector<double> ReplayTrajectory(const RunConfig& config, const Trajectory& trajectory) {
  EnvConfig env_config = config.env;
  env_config.curriculum.reset();
  env_config.level_spec.reset();
  env_config.level_id = trajectory.level_id;
  Environment env(env_config);
  env.Reset(trajectory.episode_seed);
  std::vector<double> coverage = {env.coverage()};
  for (const auto& row : trajectory.actions) {
    std::vector<ActionCommand> actions;
    for (const auto& values : row) actions.emplace_back(env_config.action_variant, values);
    const StepResult step = env.Step(actions);
    coverage.push_back(step.info.coverage);
    if (step.terminated || step.truncated) break;
  }
  return coverage;
}

}  // namespace imagine::harness
