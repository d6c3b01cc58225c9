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

#ifndef IMAGINE_HARNESS_METRICS_H_
#define IMAGINE_HARNESS_METRICS_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace imagine::harness {

inline constexpr int kSummaryStep = -1;

struct MetricsRecord {
  int episode = 0;
  int step = kSummaryStep;  // -1 marks the episode summary
  double coverage = 0.0;
  double reward_sum = 0.0;
  int cells_self = 0;
  int cells_collab = 0;
  std::uint64_t bytes_lidar = 0;
  std::uint64_t bytes_map = 0;
  int collisions = 0;
  int level_id = 0;
  int curriculum_counter = 0;

  bool is_summary() const { return step == kSummaryStep; }
  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

// One JSON object, fixed key order, no trailing newline. Throws
// std::invalid_argument on a non-finite field.
std::string FormatRecord(const MetricsRecord& record);
// Throws std::invalid_argument when the line is not a complete record.
MetricsRecord ParseRecord(const std::string& line);
std::vector<MetricsRecord> ReadMetricsFile(const std::filesystem::path& path);

// Appends records to a JSON-lines file, flushing every `flush_every` records
// and on destruction.
class MetricsWriter {
 public:
  MetricsWriter(const std::filesystem::path& path, int flush_every);
  ~MetricsWriter();
  MetricsWriter(const MetricsWriter&) = delete;
  MetricsWriter& operator=(const MetricsWriter&) = delete;

  void Write(const MetricsRecord& record);
  void Flush();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  int flush_every_;
  int pending_ = 0;
};

// y_0 = x_0, y_t = alpha x_t + (1 - alpha) y_{t-1}. Throws
// std::invalid_argument for an empty series or alpha outside (0, 1].
std::vector<double> Ewma(std::span<const double> series, double alpha);

}  // namespace imagine::harness

#endif  // IMAGINE_HARNESS_METRICS_H_
