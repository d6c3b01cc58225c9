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

#include "imagine/sensing.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gtest/gtest.h"
#include "oracles.h"

namespace imagine {
namespace {

GridWorld Corridor() {
  // 20 m long, 0.4 m wide corridor of 0.04 m cells.
  const int w = 500;
  const int h = 12;
  std::vector<std::uint8_t> occ(w * h, 0);
  for (int x = 0; x < w; ++x) occ[x] = occ[(h - 1) * w + x] = 1;
  for (int y = 0; y < h; ++y) occ[y * w] = occ[y * w + w - 1] = 1;
  return GridWorld(w, h, 0.04, occ, {{0.5, 0.24}}, 0);
}

TEST(SensingTest, CorridorLongerThanRangeMisses) {
  const GridWorld world = Corridor();
  const RayHit hit = CastRay(world, {}, {0.5, 0.24}, 0.0, 5.0);
  EXPECT_FALSE(hit.hit);
  EXPECT_DOUBLE_EQ(hit.range, 5.0);
}

TEST(SensingTest, PerpendicularWallAtOneMeter) {
  const GridWorld world = Corridor();
  // Right wall face is at x = 499 * 0.04 = 19.96.
  const RayHit hit = CastRay(world, {}, {18.96, 0.24}, 0.0, 5.0);
  EXPECT_TRUE(hit.hit);
  EXPECT_NEAR(hit.range, 1.0, 0.5 * world.cell_size());
}

TEST(SensingTest, LevelZeroCardinalRays) {
  const GridWorld world = BuildLevel(DefaultLevelSpec(0));
  AgentState self;
  self.position = {4.0, 4.0};
  const LidarConfig config;
  const LidarScan scan = Scan(world, {}, self, config);
  ASSERT_EQ(scan.ranges.size(), 36u);

  // Wall faces found by walking cells outward from the center.
  const CellIndex c = world.CellOf(self.position);
  auto face = [&](int dx, int dy) {
    CellIndex cell = c;
    while (!world.IsOccupied(cell)) cell = {cell.x + dx, cell.y + dy};
    const double cs = world.cell_size();
    if (dx > 0) return cell.x * cs - self.position.x;
    if (dx < 0) return self.position.x - (cell.x + 1) * cs;
    if (dy > 0) return cell.y * cs - self.position.y;
    return self.position.y - (cell.y + 1) * cs;
  };
  // Ray k points at heading + 2*pi*(k/36 - 1/2).
  const struct {
    int ray;
    double expected;
  } cardinal[] = {{18, face(1, 0)}, {27, face(0, 1)}, {0, face(-1, 0)}, {9, face(0, -1)}};
  for (const auto& [ray, expected] : cardinal) {
    EXPECT_TRUE(scan.hit_flags[ray]) << "ray " << ray;
    EXPECT_NEAR(scan.ranges[ray], expected, 1e-9) << "ray " << ray;
  }
}

TEST(SensingTest, ZeroFieldOfViewRejected) {
  LidarConfig config;
  config.field_of_view = 0.0;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config.field_of_view = 7.0;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = LidarConfig{};
  config.ray_count = 0;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
}

TEST(SensingTest, RayAtAnotherAgentHitsItsBody) {
  const GridWorld world = BuildLevel(DefaultLevelSpec(0));
  const Disc other{{5.5, 4.0}, 0.08};
  const RayHit hit = CastRay(world, {&other, 1}, {4.0, 4.0}, 0.0, 5.0);
  EXPECT_TRUE(hit.hit);
  EXPECT_NEAR(hit.range, 1.5 - 0.08, 1e-12);
}

TEST(SensingTest, ScanSkipsNothingBehindNarrowFov) {
  const GridWorld world = BuildLevel(DefaultLevelSpec(0));
  LidarConfig config;
  config.ray_count = 3;
  config.field_of_view = std::numbers::pi / 2;
  AgentState self;
  self.position = {4.0, 4.0};
  self.heading = 1.0;
  const LidarScan scan = Scan(world, {}, self, config);
  ASSERT_EQ(scan.ranges.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    const RayHit direct =
        CastRay(world, {}, self.position, self.heading + config.RayOffset(k), config.max_range);
    EXPECT_EQ(scan.ranges[k], direct.range);
  }
}

TEST(SensingTest, MatchesAnalyticOracleOnRandomScenes) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 300; ++trial) {
    const oracle::Scene scene = oracle::RandomScene(rng);
    const double a = angle(rng);
    const Vec2 d{std::cos(a), std::sin(a)};
    double expected = 5.0;
    for (const Rect& r : scene.rects) {
      expected = std::min(expected, oracle::RayRect(scene.free_point, d, r));
    }
    const RayHit hit = CastRay(scene.world, {}, scene.free_point, a, 5.0);
    const double diagonal = std::sqrt(2.0) * scene.world.cell_size();
    ASSERT_NEAR(hit.range, expected, diagonal) << "trial " << trial;
  }
}

}  // namespace
}  // namespace imagine
