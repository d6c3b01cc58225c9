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

// imagine: run baseline episodes, serve the environment to an external
// trainer, replay trajectory dumps, or export generated levels.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <system_error>

#include "CLI11.hpp"
#include "imagine/harness/config.h"
#include "imagine/harness/runner.h"
#include "imagine/harness/server.h"
#include "imagine/world.h"

namespace {

using imagine::harness::RunConfig;

constexpr int kExitConfig = 2;
constexpr int kExitBind = 3;

RunConfig LoadBase(const std::optional<std::string>& path) {
  return path ? imagine::harness::LoadRunConfig(*path) : RunConfig{};
}

int Run(const std::optional<std::string>& config_path, const std::optional<int>& episodes,
        const std::optional<std::string>& policy, bool serve, const std::optional<int>& port,
        const std::optional<std::uint64_t>& seed, const std::optional<std::string>& log_dir,
        bool dump_trajectories, int max_clients) {
  RunConfig config;
  try {
    config = LoadBase(config_path);
    if (episodes) config.episodes = *episodes;
    if (policy) config.policy = *policy;
    if (serve) config.policy = "external";
    if (port) config.listen_port = *port;
    if (seed) config.env.seed = *seed;
    if (log_dir) config.log_dir = *log_dir;
    if (const char* env_dir = std::getenv("IMAGINE_LOG_DIR"); env_dir && *env_dir) {
      config.log_dir = env_dir;
    }
    if (dump_trajectories) config.dump_trajectories = true;
    imagine::harness::ResolveLevelFile(config);
    config.Validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (config.external()) {
    std::optional<imagine::harness::EnvServer> server;
    try {
      server.emplace(config);
    } catch (const std::system_error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitBind;
    }
    std::cout << "listening on " << config.listen_address << ":" << server->port() << std::endl;
    for (int served = 0; max_clients == 0 || served < max_clients; ++served) {
      server->ServeOne();
    }
    return 0;
  }

  const auto result = imagine::harness::RunBaseline(config);
  for (const auto& r : result.summaries) {
    std::cout << "episode " << r.episode << " level " << r.level_id << " coverage " << r.coverage
              << " reward " << r.reward_sum << "\n";
  }
  std::cout << "metrics: " << result.metrics_path.string() << "\n";
  return 0;
}

int Replay(const std::optional<std::string>& config_path, const std::string& trajectory_path) {
  RunConfig config;
  try {
    config = LoadBase(config_path);
    imagine::harness::ResolveLevelFile(config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  const auto trajectory = imagine::harness::LoadTrajectory(trajectory_path);
  const auto coverage = imagine::harness::ReplayTrajectory(config, trajectory);
  if (coverage != trajectory.coverage) {
    std::cout << "replay diverged from the logged coverage sequence\n";
    return 1;
  }
  std::cout << "replay matches " << coverage.size() << " coverage values, final "
            << coverage.back() << "\n";
  return 0;
}

int ExportLevel(int level, const std::string& out_path) {
  const imagine::GridWorld world = imagine::BuildLevel(imagine::DefaultLevelSpec(level));
  const std::string text = imagine::FormatLevelText(world);
  if (out_path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent indoor exploration simulator"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::optional<int> episodes;
  std::optional<std::string> policy;
  bool serve = false;
  std::optional<int> port;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> log_dir;
  bool dump_trajectories = false;
  int max_clients = 1;

  CLI::App* run = app.add_subcommand("run", "Run baseline episodes or serve the environment");
  run->add_option("--config", config_path, "Key/value config file");
  run->add_option("--episodes", episodes, "Number of episodes")->check(CLI::PositiveNumber);
  run->add_option("--policy", policy, "random_walk, stationary, frontier_greedy or external");
  run->add_flag("--serve", serve, "Serve the wire protocol instead of running a baseline");
  run->add_option("--port", port, "Listen port for --serve (0 picks a free port)")
      ->check(CLI::Range(0, 65535));
  run->add_option("--seed", seed, "Run seed");
  run->add_option("--log-dir", log_dir, "Output directory (IMAGINE_LOG_DIR overrides)");
  run->add_flag("--dump-trajectories", dump_trajectories, "Write one trajectory file per episode");
  run->add_option("--max-clients", max_clients, "Clients to serve before exiting (0: no limit)")
      ->check(CLI::NonNegativeNumber);

  std::string trajectory_path;
  CLI::App* replay = app.add_subcommand("replay", "Re-drive a trajectory dump and compare coverage");
  replay->add_option("--config", config_path, "Config used for the original run");
  replay->add_option("trajectory", trajectory_path, "Trajectory file")->required();

  int level = 0;
  std::string out_path = "-";
  CLI::App* level_export = app.add_subcommand("level-export", "Write a generated level as text");
  level_export->add_option("--level", level, "Level id")->check(CLI::Range(0, 6));
  level_export->add_option("--out", out_path, "Output path, '-' for stdout");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) {
      return Run(config_path, episodes, policy, serve, port, seed, log_dir, dump_trajectories,
                 max_clients);
    }
    if (replay->parsed()) return Replay(config_path, trajectory_path);
    if (level_export->parsed()) return ExportLevel(level, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
