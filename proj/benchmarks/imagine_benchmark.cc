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

#include <cmath>
#include <numbers>
#include <vector>

#include "benchmark/benchmark.h"
#include "imagine/env.h"
#include "imagine/mapping.h"
#include "imagine/sensing.h"
#include "imagine/world.h"

namespace imagine {
namespace {

void BM_CastRay(benchmark::State& state) {
  const GridWorld world = BuildLevel(DefaultLevelSpec(static_cast<int>(state.range(0))));
  const Vec2 origin = world.spawn_points().front();
  double angle = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(CastRay(world, {}, origin, angle, 5.0));
    angle += 0.1;
  }
}
BENCHMARK(BM_CastRay)->Arg(0)->Arg(6);

void BM_ScanUpdate(benchmark::State& state) {
  const GridWorld world = BuildLevel(DefaultLevelSpec(0));
  const LidarConfig lidar;
  AgentState self;
  self.position = world.spawn_points().front();
  OccupancyGrid grid = OccupancyGrid::ForWorld(world);
  for (auto _ : state) {
    const LidarScan scan = Scan(world, {}, self, lidar);
    benchmark::DoNotOptimize(UpdateFromScan(grid, scan, lidar));
    self.heading = std::remainder(self.heading + 0.05, 2.0 * std::numbers::pi);
  }
}
BENCHMARK(BM_ScanUpdate);

void BM_FuseMaps(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  OccupancyGrid a(side, side, kDefaultCellSize);
  OccupancyGrid b(side, side, kDefaultCellSize);
  for (int i = 0; i < a.cell_count(); ++i) {
    a.SetTicks(i, (i * 37) % 2001 - 1000);
    b.SetTicks(i, (i * 91) % 2001 - 1000);
  }
  for (auto _ : state) benchmark::DoNotOptimize(FuseMaps(a, b));
  state.SetItemsProcessed(state.iterations() * a.cell_count());
}
BENCHMARK(BM_FuseMaps)->Arg(200)->Arg(500);

void BM_EnvStep(benchmark::State& state) {
  EnvConfig config;
  config.n_agents = static_cast<int>(state.range(0));
  config.episode_steps = 1 << 30;
  Environment env(config);
  env.Reset(1);
  std::vector<ActionCommand> actions;
  for (int i = 0; i < config.n_agents; ++i) {
    const double c[2] = {std::cos(i * 1.3), std::sin(i * 1.3)};
    actions.emplace_back(ActionVariant::kPlanar2d, c);
  }
  for (auto _ : state) benchmark::DoNotOptimize(env.Step(actions));
}
BENCHMARK(BM_EnvStep)->Arg(1)->Arg(4);

}  // namespace
}  // namespace imagine

BENCHMARK_MAIN();
