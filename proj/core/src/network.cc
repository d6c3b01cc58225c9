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

#include "imagine/network.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace imagine {
namespace {

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void PutF32(std::vector<std::uint8_t>& out, double v) {
  PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}
std::uint16_t GetU16(std::span<const std::uint8_t> in, std::size_t at) {
  return static_cast<std::uint16_t>(in[at] | (in[at + 1] << 8));
}
std::uint32_t GetU32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}
double GetF32(std::span<const std::uint8_t> in, std::size_t at) {
  return std::bit_cast<float>(GetU32(in, at));
}

auto OrderKey(const CommEvent& e) {
  return std::make_tuple(e.deliver_step, e.sender, e.receiver, static_cast<int>(e.kind),
                         e.origin, e.created_step);
}

}  // namespace

std::string_view ToString(CommMode mode) {
  switch (mode) {
    case CommMode::kOff:
      return "off";
    case CommMode::kOneHop:
      return "one_hop";
    case CommMode::kMultiHop:
      return "multi_hop";
  }
  return "unknown";
}

CommMode ParseCommMode(std::string_view name) {
  for (CommMode m : {CommMode::kOff, CommMode::kOneHop, CommMode::kMultiHop}) {
    if (ToString(m) == name) return m;
  }
  throw std::invalid_argument("unknown comm mode '" + std::string(name) + "'");
}

void CommConfig::Validate() const {
  if (!(range > 0.0)) throw std::invalid_argument("CommConfig: range must be positive");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("CommConfig: bandwidth must be positive");
  if (max_hops < 0) throw std::invalid_argument("CommConfig: max_hops must be nonnegative");
}

CommGraph::CommGraph(int agent_count, int step)
    : n_(agent_count), step_(step), adjacency_(static_cast<std::size_t>(agent_count) * agent_count, 0) {}

void CommGraph::AddEdge(int i, int j) {
  if (i == j) return;
  adjacency_[i * n_ + j] = adjacency_[j * n_ + i] = 1;
}

int CommGraph::EdgeCount() const {
  int count = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) count += HasEdge(i, j);
  }
  return count;
}

std::vector<int> CommGraph::Neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < n_; ++j) {
    if (HasEdge(i, j)) out.push_back(j);
  }
  return out;
}

std::uint64_t CommGraph::TopologyMask() const {
  std::uint64_t mask = 0;
  int bit = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j, ++bit) {
      if (HasEdge(i, j)) mask |= std::uint64_t{1} << bit;
    }
  }
  return mask;
}

CommGraph BuildGraph(std::span<const Vec2> positions, const CommConfig& config, int step) {
  const int n = static_cast<int>(positions.size());
  CommGraph graph(n, step);
  if (config.mode == CommMode::kOff) return graph;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (Norm(positions[i] - positions[j]) <= config.range) graph.AddEdge(i, j);
    }
  }
  return graph;
}

int DeliveryDelaySteps(std::size_t bytes, double bandwidth, double dt) {
  const double per_step = bandwidth * dt;
  if (std::isinf(per_step)) return 1;
  const double steps = std::ceil(static_cast<double>(bytes) / per_step);
  return std::max(1, static_cast<int>(steps));
}

std::vector<std::uint8_t> EncodeLidarShare(const LidarScan& scan, int origin, int created_step) {
  const int n = static_cast<int>(scan.ranges.size());
  std::vector<std::uint8_t> out;
  out.reserve(LidarPayloadBytes(n));
  PutU32(out, static_cast<std::uint32_t>(created_step));
  PutU16(out, static_cast<std::uint16_t>(origin));
  PutU16(out, static_cast<std::uint16_t>(n));
  for (const double r : scan.ranges) PutF32(out, r);
  for (int k = 0; k < n; ++k) out.push_back(scan.hit_flags[k] ? 1 : 0);
  PutF32(out, scan.origin.x);
  PutF32(out, scan.origin.y);
  PutF32(out, scan.origin_heading);
  return out;
}

DecodedLidarShare DecodeLidarShare(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw std::invalid_argument("DecodeLidarShare: truncated header");
  DecodedLidarShare out;
  out.created_step = static_cast<int>(GetU32(bytes, 0));
  out.origin = GetU16(bytes, 4);
  const int n = GetU16(bytes, 6);
  if (bytes.size() != LidarPayloadBytes(n)) {
    throw std::invalid_argument("DecodeLidarShare: payload size does not match ray count");
  }
  out.scan.ranges.resize(n);
  out.scan.hit_flags.resize(n);
  std::size_t at = 8;
  for (int k = 0; k < n; ++k, at += 4) out.scan.ranges[k] = GetF32(bytes, at);
  for (int k = 0; k < n; ++k, ++at) out.scan.hit_flags[k] = bytes[at] != 0;
  out.scan.origin = {GetF32(bytes, at), GetF32(bytes, at + 4)};
  out.scan.origin_heading = GetF32(bytes, at + 8);
  return out;
}

MessageLayer::MessageLayer(int agent_count, CommConfig config, double dt)
    : n_(agent_count),
      config_(config),
      dt_(dt),
      max_hops_(config.max_hops > 0 ? config.max_hops : agent_count),
      previous_(agent_count, -1),
      seen_(agent_count) {
  config_.Validate();
  if (agent_count < 1 || agent_count > 64) {
    throw std::invalid_argument("MessageLayer: agent count must be in [1, 64]");
  }
}

void MessageLayer::Reset() {
  previous_ = CommGraph(n_, -1);
  queue_.clear();
  last_enqueued_.clear();
  for (auto& s : seen_) s.clear();
  metrics_ = {};
}

void MessageLayer::Enqueue(CommEvent event, int step) {
  event.sent_step = step;
  event.deliver_step = step + DeliveryDelaySteps(event.payload_bytes, config_.bandwidth, dt_);
  if (event.kind == MessageKind::kLidarShare) {
    metrics_.bytes_lidar += event.payload_bytes;
    ++metrics_.enqueued_lidar;
  } else {
    metrics_.bytes_map += event.payload_bytes;
    ++metrics_.enqueued_map;
  }
  last_enqueued_.push_back(event);
  queue_.push_back(std::move(event));
}

std::vector<CommEvent> MessageLayer::Tick(int step, const CommGraph& graph,
                                          std::span<const LidarScan> scans,
                                          std::span<const OccupancyGrid> maps) {
  if (graph.agent_count() != n_ || static_cast<int>(scans.size()) != n_ ||
      static_cast<int>(maps.size()) != n_) {
    throw std::invalid_argument("MessageLayer::Tick: per-agent inputs must match the agent count");
  }
  last_enqueued_.clear();

  // Links that broke take their in-flight traffic with them.
  std::vector<CommEvent> pending;
  pending.reserve(queue_.size());
  for (CommEvent& e : queue_) {
    if (graph.HasEdge(e.sender, e.receiver)) {
      pending.push_back(std::move(e));
    } else {
      ++metrics_.dropped;
    }
  }
  queue_.clear();

  std::vector<CommEvent> due;
  for (CommEvent& e : pending) {
    if (e.deliver_step <= step) {
      due.push_back(std::move(e));
    } else {
      queue_.push_back(std::move(e));
    }
  }
  std::stable_sort(due.begin(), due.end(),
                   [](const CommEvent& a, const CommEvent& b) { return OrderKey(a) < OrderKey(b); });

  std::vector<CommEvent> delivered;
  for (CommEvent& e : due) {
    const auto key = std::make_tuple(e.origin, static_cast<int>(e.kind), e.created_step);
    if (!seen_[e.receiver].insert(key).second) {
      ++metrics_.duplicates;
      continue;
    }
    ++metrics_.delivered;
    if (config_.mode == CommMode::kMultiHop && e.hop_count < max_hops_) {
      const std::uint64_t carriers = e.carriers | (std::uint64_t{1} << e.receiver);
      for (const int next : graph.Neighbors(e.receiver)) {
        if (carriers & (std::uint64_t{1} << next)) continue;
        CommEvent relay = e;
        relay.sender = e.receiver;
        relay.receiver = next;
        relay.hop_count = e.hop_count + 1;
        relay.carriers = carriers;
        Enqueue(std::move(relay), step);
      }
    }
    delivered.push_back(std::move(e));
  }

  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (!graph.HasEdge(i, j)) continue;
      CommEvent lidar;
      lidar.kind = MessageKind::kLidarShare;
      lidar.origin = lidar.sender = i;
      lidar.receiver = j;
      lidar.created_step = step;
      lidar.carriers = std::uint64_t{1} << i;
      lidar.payload = std::make_shared<const std::vector<std::uint8_t>>(
          EncodeLidarShare(scans[i], i, step));
      lidar.payload_bytes = lidar.payload->size();
      Enqueue(std::move(lidar), step);
    }
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (!graph.HasEdge(i, j) || (previous_.agent_count() == n_ && previous_.HasEdge(i, j))) {
        continue;
      }
      CommEvent map;
      map.kind = MessageKind::kMapShare;
      map.origin = map.sender = i;
      map.receiver = j;
      map.created_step = step;
      map.carriers = std::uint64_t{1} << i;
      map.payload = std::make_shared<const std::vector<std::uint8_t>>(SerializeGrid(maps[i]));
      map.payload_bytes = map.payload->size();
      Enqueue(std::move(map), step);
    }
  }

  previous_ = graph;
  return delivered;
}

}  // namespace imagine
