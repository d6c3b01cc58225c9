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

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace imagine::harness {

std::string FormatRecord(const MetricsRecord& r) {
  if (!std::isfinite(r.coverage) || !std::isfinite(r.reward_sum)) {
    throw std::invalid_argument("metrics record has a non-finite field");
  }
  nlohmann::ordered_json j;
  j["episode"] = r.episode;
  j["step"] = r.step;
  j["coverage"] = r.coverage;
  j["reward_sum"] = r.reward_sum;
  j["cells_self"] = r.cells_self;
  j["cells_collab"] = r.cells_collab;
  j["bytes_lidar"] = r.bytes_lidar;
  j["bytes_map"] = r.bytes_map;
  j["collisions"] = r.collisions;
  j["level_id"] = r.level_id;
  j["curriculum_counter"] = r.curriculum_counter;
  return j.dump();
}

MetricsRecord ParseRecord(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    MetricsRecord r;
    r.episode = j.at("episode").get<int>();
    r.step = j.at("step").get<int>();
    r.coverage = j.at("coverage").get<double>();
    r.reward_sum = j.at("reward_sum").get<double>();
    r.cells_self = j.at("cells_self").get<int>();
    r.cells_collab = j.at("cells_collab").get<int>();
    r.bytes_lidar = j.at("bytes_lidar").get<std::uint64_t>();
    r.bytes_map = j.at("bytes_map").get<std::uint64_t>();
    r.collisions = j.at("collisions").get<int>();
    r.level_id = j.at("level_id").get<int>();
    r.curriculum_counter = j.at("curriculum_counter").get<int>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad metrics record: ") + e.what());
  }
}

std::vector<MetricsRecord> ReadMetricsFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  std::vector<MetricsRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) records.push_back(ParseRecord(line));
  }
  return records;
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path, int flush_every)
    : path_(path), flush_every_(flush_every < 1 ? 1 : flush_every) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::app | std::ios::binary);
  if (!out_) throw std::runtime_error("cannot open " + path.string());
}

MetricsWriter::~MetricsWriter() { out_.flush(); }

void MetricsWriter::Write(const MetricsRecord& record) {
  out_ << FormatRecord(record) << '\n';
  if (++pending_ >= flush_every_) Flush();
}

void MetricsWriter::Flush() {
  out_.flush();
  pending_ = 0;
  if (!out_) throw std::runtime_error("write failed on " + path_.string());
}

std::vector<double> Ewma(std::span<const double> series, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (series.empty()) throw std::invalid_argument("ewma of an empty series");
  std::vector<double> out(series.size());
  out[0] = series[0];
  for (std::size_t t = 1; t < series.size(); ++t) {
    out[t] = alpha * series[t] + (1.0 - alpha) * out[t - 1];
  }
  return out;
}

}  // namespace imagine::harness
