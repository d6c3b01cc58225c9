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

#include "imagine/harness/metrics.h"

#include <filesystem>
#include <limits>
#include <stdexcept>

#include "gtest/gtest.h"

namespace imagine::harness {
namespace {

TEST(EwmaTest, Examples) {
  const std::vector<double> constant(6, 2.5);
  EXPECT_EQ(Ewma(constant, 0.3), constant);
  const std::vector<double> series = {3.0, -1.0, 4.0, 1.0, 5.0};
  EXPECT_EQ(Ewma(series, 1.0), series);
  const std::vector<double> step = {0.0, 1.0};
  EXPECT_EQ(Ewma(step, 0.5), (std::vector<double>{0.0, 0.5}));
}

TEST(EwmaTest, RejectsBadInput) {
  const std::vector<double> series = {1.0};
  EXPECT_THROW(Ewma(series, 0.0), std::invalid_argument);
  EXPECT_THROW(Ewma(series, 1.5), std::invalid_argument);
  EXPECT_THROW(Ewma(series, -0.1), std::invalid_argument);
  EXPECT_THROW(Ewma(std::vector<double>{}, 0.5), std::invalid_argument);
}

TEST(MetricsTest, RecordRoundTripsWithFixedKeyOrder) {
  MetricsRecord r;
  r.episode = 4;
  r.coverage = 0.123456789;
  r.reward_sum = 2.5;
  r.cells_self = 10;
  r.cells_collab = 3;
  r.bytes_lidar = 1u << 20;
  r.bytes_map = 160032;
  r.collisions = 2;
  r.level_id = 3;
  r.curriculum_counter = 7;
  const std::string line = FormatRecord(r);
  EXPECT_EQ(line.rfind("{\"episode\":4,\"step\":-1,\"coverage\":", 0), 0u) << line;
  EXPECT_EQ(ParseRecord(line), r);
  EXPECT_TRUE(r.is_summary());
}

TEST(MetricsTest, RejectsNonFiniteAndIncomplete) {
  MetricsRecord r;
  r.reward_sum = std::numeric_limits<double>::infinity();
  EXPECT_THROW(FormatRecord(r), std::invalid_argument);
  EXPECT_THROW(ParseRecord("{\"episode\":1}"), std::invalid_argument);
  EXPECT_THROW(ParseRecord("not json"), std::invalid_argument);
}

TEST(MetricsTest, WriterAppends) {
  const auto dir = std::filesystem::path(::testing::TempDir()) / "metrics_writer_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "m.jsonl";
  MetricsRecord r;
  {
    MetricsWriter writer(path, 2);
    r.episode = 0;
    writer.Write(r);
    r.episode = 1;
    writer.Write(r);
  }
  {
    MetricsWriter writer(path, 1);
    r.episode = 2;
    writer.Write(r);
  }
  const auto records = ReadMetricsFile(path);
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[2].episode, 2);
}

}  // namespace
}  // namespace imagine::harness
