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

#ifndef IMAGINE_NETWORK_H_
#define IMAGINE_NETWORK_H_

#include <cstdint>
#include <limits>
#include <memory>
#include <set>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include "imagine/geometry.h"
#include "imagine/mapping.h"
#include "imagine/sensing.h"

namespace imagine {

enum class CommMode { kOff, kOneHop, kMultiHop };

std::string_view ToString(CommMode mode);
// Accepts "off", "one_hop", "multi_hop".
CommMode ParseCommMode(std::string_view name);

// Bandwidth sentinel: every message is delivered after the one-step floor.
inline constexpr double kUnlimitedBandwidth = std::numeric_limits<double>::infinity();

struct CommConfig {
  CommMode mode = CommMode::kOneHop;
  double range = 4.0;             // meters, inclusive
  double bandwidth = 250000.0;    // bytes per second, per link and direction
  int max_hops = 0;               // multi_hop only; 0 means the agent count

  void Validate() const;
};

// Link topology at one step. Symmetric and irreflexive.
class CommGraph {
 public:
  CommGraph() = default;
  CommGraph(int agent_count, int step);

  int agent_count() const { return n_; }
  int step() const { return step_; }
  bool HasEdge(int i, int j) const { return adjacency_[i * n_ + j] != 0; }
  void AddEdge(int i, int j);
  int EdgeCount() const;
  std::vector<int> Neighbors(int i) const;

  // One bit per unordered pair (i < j), pairs enumerated row by row.
  std::uint64_t TopologyMask() const;

 private:
  int n_ = 0;
  int step_ = 0;
  std::vector<std::uint8_t> adjacency_;
};

CommGraph BuildGraph(std::span<const Vec2> positions, const CommConfig& config, int step = 0);

enum class MessageKind { kLidarShare = 0, kMapShare = 1 };

struct CommEvent {
  MessageKind kind = MessageKind::kLidarShare;
  int origin = 0;  // agent whose data this is
  int sender = 0;  // agent transmitting on this hop
  int receiver = 0;
  std::size_t payload_bytes = 0;
  int created_step = 0;  // step at which the origin produced the data
  int sent_step = 0;     // step at which this hop was enqueued
  int deliver_step = 0;
  int hop_count = 1;
  std::uint64_t carriers = 0;  // bitmask of agents that already held it
  std::shared_ptr<const std::vector<std::uint8_t>> payload;
};

// Steps needed to push `bytes` through one link: ceil(bytes / (bandwidth*dt)),
// never less than one.
int DeliveryDelaySteps(std::size_t bytes, double bandwidth, double dt);

// LiDAR share: created_step u32, origin u16, ray_count u16, ranges f32[n],
// hit flags u8[n], pose (x, y, heading) f32[3]; little-endian.
inline constexpr std::size_t LidarPayloadBytes(int ray_count) {
  return 8 + 5 * static_cast<std::size_t>(ray_count) + 12;
}
std::vector<std::uint8_t> EncodeLidarShare(const LidarScan& scan, int origin, int created_step);

struct DecodedLidarShare {
  int origin = 0;
  int created_step = 0;
  LidarScan scan;
};
// Throws std::invalid_argument on a malformed payload.
DecodedLidarShare DecodeLidarShare(std::span<const std::uint8_t> bytes);

struct CommMetrics {
  std::uint64_t bytes_lidar = 0;
  std::uint64_t bytes_map = 0;
  int enqueued_lidar = 0;
  int enqueued_map = 0;
  int delivered = 0;
  int dropped = 0;     // link broke before delivery
  int duplicates = 0;  // multi-hop copies of data the receiver already had
};

// Per-episode message layer. Owns in-flight queues and the previous graph.
class MessageLayer {
 public:
  MessageLayer(int agent_count, CommConfig config, double dt);

  void Reset();

  // Runs once per step after the graph rebuild:
  //  1. drops in-flight events whose link is absent from `graph`;
  //  2. delivers events due at `step`, in (deliver_step, sender, receiver,
  //     kind, origin, created_step) order, deduplicating per receiver;
  //  3. in multi_hop mode, re-enqueues delivered events with hop_count below
  //     max_hops to the receiver's neighbors that have not carried them;
  //  4. enqueues a lidar_share on every directed edge and a map_share in both
  //     directions on every edge absent from the previous graph.
  // `scans` and `maps` are indexed by agent.
  std::vector<CommEvent> Tick(int step, const CommGraph& graph,
                              std::span<const LidarScan> scans,
                              std::span<const OccupancyGrid> maps);

  const CommConfig& config() const { return config_; }
  const CommMetrics& metrics() const { return metrics_; }
  const CommGraph& previous_graph() const { return previous_; }
  const std::vector<CommEvent>& in_flight() const { return queue_; }
  // Events enqueued by the last Tick, relays included.
  const std::vector<CommEvent>& last_enqueued() const { return last_enqueued_; }

 private:
  void Enqueue(CommEvent event, int step);

  int n_;
  CommConfig config_;
  double dt_;
  int max_hops_;
  CommGraph previous_;
  std::vector<CommEvent> queue_;
  std::vector<CommEvent> last_enqueued_;
  // Per receiver: (origin, kind, created_step) already incorporated.
  std::vector<std::set<std::tuple<int, int, int>>> seen_;
  CommMetrics metrics_;
};

}  // namespace imagine

#endif  // IMAGINE_NETWORK_H_
