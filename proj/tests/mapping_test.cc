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

#include "imagine/mapping.h"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "gtest/gtest.h"
#include "oracles.h"

namespace imagine {
namespace {

LidarConfig SingleRay() {
  LidarConfig config;
  config.ray_count = 1;
  config.field_of_view = 2.0 * std::numbers::pi;
  return config;
}

// A one-ray scan whose ray leaves `origin` at world angle `angle`.
LidarScan OneRay(Vec2 origin, double angle, double range, bool hit) {
  LidarScan scan;
  scan.origin = origin;
  // The single ray sits at offset -pi from the heading.
  scan.origin_heading = WrapAngle(angle + std::numbers::pi);
  scan.ranges = {range};
  scan.hit_flags = {hit};
  return scan;
}

OccupancyGrid RandomGrid(std::mt19937_64& rng, int w, int h, int max_abs) {
  OccupancyGrid g(w, h, 0.04);
  std::uniform_int_distribution<int> t(-max_abs, max_abs);
  for (int i = 0; i < g.cell_count(); ++i) g.SetTicks(i, t(rng));
  return g;
}

TEST(MappingTest, DiagonalRayMarksFreeThenOccupied) {
  OccupancyGrid grid(10, 10, 1.0);
  const CellDelta delta =
      UpdateFromScan(grid, OneRay({0.5, 0.5}, std::numbers::pi / 4, 3.0 * std::sqrt(2.0), true),
                     SingleRay());
  EXPECT_EQ(grid.ticks(grid.Index({0, 0})), 0);
  EXPECT_EQ(grid.ticks(grid.Index({1, 1})), grid.free_ticks());
  EXPECT_EQ(grid.ticks(grid.Index({2, 2})), grid.free_ticks());
  EXPECT_EQ(grid.ticks(grid.Index({3, 3})), grid.occ_ticks());
  EXPECT_EQ(delta.changes.size(), 3u);
  EXPECT_EQ(delta.discovered_count, 3);
  int touched = 0;
  for (LogOddsTicks t : grid.ticks()) touched += t != 0;
  EXPECT_EQ(touched, 3);
}

TEST(MappingTest, MissMarksEndpointFree) {
  OccupancyGrid grid(10, 10, 1.0);
  UpdateFromScan(grid, OneRay({0.5, 0.5}, 0.0, 4.0, false), SingleRay());
  for (int x = 1; x <= 4; ++x) EXPECT_EQ(grid.ticks(grid.Index({x, 0})), grid.free_ticks()) << x;
  EXPECT_EQ(grid.ticks(grid.Index({5, 0})), 0);
}

TEST(MappingTest, RepeatedHitsSaturateAtUpperBound) {
  OccupancyGrid grid(10, 10, 1.0);
  const LidarScan scan = OneRay({0.5, 0.5}, 0.0, 3.0, true);
  for (int i = 0; i < 40; ++i) UpdateFromScan(grid, scan, SingleRay());
  EXPECT_EQ(grid.ticks(grid.Index({3, 0})), ToTicks(10.0));
  EXPECT_DOUBLE_EQ(grid.LogOdds({3, 0}), 10.0);
  EXPECT_EQ(grid.ticks(grid.Index({1, 0})), ToTicks(-10.0));
}

TEST(MappingTest, DefaultTickConstants) {
  const OccupancyGrid grid(1, 1, 1.0);
  EXPECT_EQ(grid.occ_ticks(), 870);
  EXPECT_EQ(grid.free_ticks(), -410);
  EXPECT_EQ(grid.max_ticks(), 10240);
  EXPECT_EQ(grid.min_ticks(), -10240);
  EXPECT_FALSE(grid.IsKnownTicks(307));
  EXPECT_TRUE(grid.IsKnownTicks(308));
  EXPECT_TRUE(grid.IsKnownTicks(-308));
}

TEST(MappingTest, FusionIdentityAndCommutativity) {
  std::mt19937_64 rng(3);
  const OccupancyGrid a = RandomGrid(rng, 17, 9, 10240);
  const OccupancyGrid b = RandomGrid(rng, 17, 9, 10240);
  const OccupancyGrid unknown(17, 9, 0.04);
  EXPECT_EQ(FuseMaps(a, unknown), a);
  EXPECT_EQ(FuseMaps(unknown, a), a);
  EXPECT_EQ(FuseMaps(a, b), FuseMaps(b, a));
}

TEST(MappingTest, FusionOfTwoPointEightBeliefs) {
  OccupancyGrid a(1, 1, 1.0);
  a.SetLogOdds({0, 0}, LogOddsFromProbability(0.8));
  const OccupancyGrid fused = FuseMaps(a, a);
  EXPECT_NEAR(fused.Probability({0, 0}), 0.64 / (0.64 + 0.04), 1e-3);
  EXPECT_NEAR(fused.Probability({0, 0}), 0.9412, 1e-3);
  // Exact agreement with the product formula on the stored values.
  const double p = a.Probability({0, 0});
  EXPECT_NEAR(fused.Probability({0, 0}), p * p / (p * p + (1 - p) * (1 - p)), 1e-12);
}

TEST(MappingTest, FusionClampsAndRejectsMismatch) {
  OccupancyGrid a(2, 1, 1.0);
  a.SetLogOdds({0, 0}, 9.0);
  a.SetLogOdds({1, 0}, -9.0);
  const OccupancyGrid f = FuseMaps(a, a);
  EXPECT_DOUBLE_EQ(f.LogOdds({0, 0}), 10.0);
  EXPECT_DOUBLE_EQ(f.LogOdds({1, 0}), -10.0);
  EXPECT_THROW(FuseMaps(a, OccupancyGrid(1, 2, 1.0)), std::invalid_argument);
  EXPECT_THROW(FuseMaps(a, OccupancyGrid(2, 1, 0.5)), std::invalid_argument);
}

TEST(MappingTest, FuseIntoReportsDiscoveries) {
  OccupancyGrid dst(3, 1, 1.0);
  OccupancyGrid src(3, 1, 1.0);
  src.SetTicks(0, 500);
  src.SetTicks(1, 100);
  const CellDelta delta = FuseInto(dst, src);
  EXPECT_EQ(delta.discovered_count, 1);
  EXPECT_EQ(delta.changes.size(), 2u);
  EXPECT_EQ(dst.ticks(0), 500);
}

TEST(MappingTest, EgocentricWindowOfUnknownGrid) {
  const OccupancyGrid grid(50, 50, 0.04);
  const EgocentricMap map = ExtractEgocentric(grid, {1.0, 1.0}, 16);
  ASSERT_EQ(map.probabilities.size(), 256u);
  for (double p : map.probabilities) EXPECT_EQ(p, 0.5);
}

TEST(MappingTest, EgocentricCornerIsPadded) {
  OccupancyGrid grid(50, 50, 0.04);
  for (int i = 0; i < grid.cell_count(); ++i) grid.SetTicks(i, -2000);
  const EgocentricMap map = ExtractEgocentric(grid, {0.01, 0.01}, 16);
  int padded = 0;
  for (int row = 0; row < 16; ++row) {
    for (int col = 0; col < 16; ++col) {
      const bool outside = col < 8 || row < 8;
      if (outside) {
        EXPECT_EQ(map.at(col, row), 0.5);
        ++padded;
      } else {
        EXPECT_LT(map.at(col, row), 0.5);
      }
    }
  }
  EXPECT_EQ(padded, 256 - 64);
}

TEST(MappingTest, EgocentricShiftEquivariance) {
  std::mt19937_64 rng(11);
  const OccupancyGrid grid = RandomGrid(rng, 80, 80, 3000);
  const Vec2 p{1.3, 1.5};
  const EgocentricMap base = ExtractEgocentric(grid, p, 32);
  for (int k : {1, 2, 5}) {
    const EgocentricMap moved = ExtractEgocentric(grid, {p.x + k * 0.04, p.y}, 32);
    for (int row = 0; row < 32; ++row) {
      for (int col = 0; col + k < 32; ++col) {
        ASSERT_EQ(moved.at(col, row), base.at(col + k, row)) << "k " << k;
      }
    }
  }
}

TEST(MappingTest, KnownCellsMatchRasterizedRays) {
  // Open space: rays never reach anything, so every ray is a miss and every
  // rasterized cell but the origin receives at least one l_free.
  OccupancyGrid grid(400, 400, 0.04);
  EXPECT_EQ(KnownCells(grid), 0);
  LidarConfig config;
  LidarScan scan;
  scan.origin = {8.02, 8.02};
  scan.origin_heading = 0.3;
  scan.ranges.assign(config.ray_count, config.max_range);
  scan.hit_flags.assign(config.ray_count, false);
  UpdateFromScan(grid, scan, config);

  const CellIndex origin = grid.CellOf(scan.origin);
  std::set<CellIndex> touched;
  for (int k = 0; k < config.ray_count; ++k) {
    const double a = scan.origin_heading + config.RayOffset(k);
    const Vec2 end = scan.origin + config.max_range * Vec2{std::cos(a), std::sin(a)};
    const CellIndex e = grid.CellOf(end);
    const int dx = e.x - origin.x;
    const int dy = e.y - origin.y;
    const int major = std::max(std::abs(dx), std::abs(dy));
    const int minor = std::min(std::abs(dx), std::abs(dy));
    for (int i = 1; i <= major; ++i) {
      const int off = oracle::RoundTiesDown(i * minor, major);
      const int mx = std::abs(dx) >= std::abs(dy) ? i : off;
      const int my = std::abs(dx) >= std::abs(dy) ? off : i;
      touched.insert({origin.x + (dx < 0 ? -mx : mx), origin.y + (dy < 0 ? -my : my)});
    }
  }
  EXPECT_EQ(KnownCells(grid), static_cast<int>(touched.size()));
}

TEST(MappingTest, SerializationRoundTrip) {
  std::mt19937_64 rng(5);
  const OccupancyGrid grid = RandomGrid(rng, 200, 200, 10240);
  const auto bytes = SerializeGrid(grid);
  EXPECT_EQ(bytes.size(), 16u + 2u * 200 * 200);
  EXPECT_EQ(bytes.size(), MapPayloadBytes(200, 200));
  EXPECT_EQ(DeserializeGrid(bytes), grid);
  EXPECT_THROW(DeserializeGrid(std::span(bytes).first(bytes.size() - 1)), std::invalid_argument);
  EXPECT_THROW(DeserializeGrid(std::span(bytes).first(10)), std::invalid_argument);
}

TEST(MappingTest, ParamsValidate) {
  MappingParams p;
  EXPECT_NO_THROW(p.Validate());
  p.l_free = 0.1;
  EXPECT_THROW(p.Validate(), std::invalid_argument);
  p = MappingParams{};
  p.l_max = 40.0;
  EXPECT_THROW(p.Validate(), std::invalid_argument);
  p = MappingParams{};
  p.epsilon = 0.0;
  EXPECT_THROW(p.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace imagine
