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

#ifndef IMAGINE_HARNESS_SERVER_H_
#define IMAGINE_HARNESS_SERVER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "imagine/env.h"
#include "imagine/harness/config.h"
#include "imagine/harness/metrics.h"
#include "imagine/harness/wire.h"

namespace imagine::harness {

inline constexpr int kProtocolVersion = 1;

// Answers wire-protocol requests against one environment. Transport-free so
// it can be driven directly in tests.
class RequestHandler {
 public:
  // `metrics` may be null; otherwise a summary record is written per finished
  // episode.
  RequestHandler(const RunConfig& config, MetricsWriter* metrics);

  // Returns the reply object. Sets `close` when the client asked to close.
  nlohmann::json Handle(const nlohmann::json& request, bool& close);
  // Parses, handles and serializes; malformed JSON yields an error reply.
  std::string HandleText(const std::string& request, bool& close);

  nlohmann::json HandshakeReply() const;

 private:
  nlohmann::json TransitionReply(const std::vector<Observation>& observations, double reward,
                                 bool terminated, bool truncated, const StepInfo& info);
  void FinishEpisode(const StepInfo& last);

  RunConfig config_;
  Environment env_;
  MetricsWriter* metrics_;
  bool handshaken_ = false;
  int episode_ = -1;
  bool episode_open_ = false;
};

// Single-client TCP server: binds on construction (port 0 = ephemeral),
// then serves one client connection per Serve call.
class EnvServer {
 public:
  // Throws std::system_error when the port cannot be bound.
  explicit EnvServer(const RunConfig& config);

  std::uint16_t port() const { return port_; }
  // Accepts one client and answers until it sends close or disconnects.
  void ServeOne();

 private:
  RunConfig config_;
  Socket listener_;
  std::uint16_t port_ = 0;
  std::unique_ptr<MetricsWriter> metrics_;
};

}  // namespace imagine::harness

#endif  // IMAGINE_HARNESS_SERVER_H_
