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

#include "imagine/harness/server.h"

#include <stdexcept>
#include <vector>

#include "imagine/harness/runner.h"
#include "imagine/paradigm.h"

namespace imagine::harness {
namespace {

nlohmann::json ErrorReply(const std::string& message) {
  return {{"ok", false}, {"error", message}};
}

nlohmann::json InfoJson(const StepInfo& info) {
  return {{"step", info.step},
          {"level_id", info.level_id},
          {"coverage", info.coverage},
          {"team_known_cells", info.team_known_cells},
          {"cells_self", info.cells_self},
          {"cells_collab", info.cells_collab},
          {"collisions", info.collisions},
          {"bytes_lidar", info.bytes_lidar},
          {"bytes_map", info.bytes_map},
          {"events_dropped", info.events_dropped},
          {"monotone", info.monotone}};
}

}  // namespace

RequestHandler::RequestHandler(const RunConfig& config, MetricsWriter* metrics)
    : config_(config), env_(config.env), metrics_(metrics) {}

nlohmann::json RequestHandler::HandshakeReply() const {
  const EnvConfig& env = config_.env;
  nlohmann::json layout = nlohmann::json::array();
  for (const auto& [name, size] : LayoutFor(env)) layout.push_back({{"name", name}, {"size", size}});
  nlohmann::json reply = {{"ok", true},
                          {"version", kProtocolVersion},
                          {"paradigm", ToString(env.paradigm)},
                          {"n_agents", env.n_agents},
                          {"action_variant", ToString(env.action_variant)},
                          {"action_dim", ActorActionDim(env)},
                          {"actor_streams", ActorStreamCount(env)},
                          {"obs_dim", ActorObservationDim(env)},
                          {"obs_layout", layout},
                          {"episode_steps", env.episode_steps}};
  if (env.paradigm == Paradigm::kCtde) reply["critic_dim"] = CriticStateDim(env);
  return reply;
}

nlohmann::json RequestHandler::TransitionReply(const std::vector<Observation>& observations,
                                               double reward, bool terminated, bool truncated,
                                               const StepInfo& info) {
  const ParadigmView view = WrapObservations(env_, observations, reward);
  nlohmann::json reply = {{"ok", true},
                          {"obs", view.actor},
                          {"reward", reward},
                          {"terminated", terminated},
                          {"truncated", truncated},
                          {"info", InfoJson(info)}};
  if (view.critic) reply["critic"] = *view.critic;
  return reply;
}

void RequestHandler::FinishEpisode(const StepInfo& last) {
  if (!episode_open_) return;
  episode_open_ = false;
  env_.EndEpisode();
  if (metrics_ != nullptr) metrics_->Write(SummaryRecord(env_, episode_, last));
}

nlohmann::json RequestHandler::Handle(const nlohmann::json& request, bool& close) {
  close = false;
  if (!request.is_object() || !request.contains("cmd") || !request["cmd"].is_string()) {
    return ErrorReply("request must be an object with a string 'cmd'");
  }
  const std::string cmd = request["cmd"].get<std::string>();
  try {
    if (cmd == "handshake") {
      const int version = request.value("version", -1);
      if (version != kProtocolVersion) {
        return ErrorReply("protocol version mismatch: server speaks " +
                          std::to_string(kProtocolVersion));
      }
      handshaken_ = true;
      return HandshakeReply();
    }
    if (cmd == "close") {
      close = true;
      return {{"ok", true}};
    }
    if (!handshaken_) return ErrorReply("handshake required before '" + cmd + "'");
    if (cmd == "reset") {
      const bool valid_seed = request.contains("seed") && request["seed"].is_number_integer() &&
                              (request["seed"].is_number_unsigned() ||
                               request["seed"].get<std::int64_t>() >= 0);
      if (!valid_seed) {
        return ErrorReply("reset needs an unsigned integer 'seed'");
      }
      StepInfo dropped;
      dropped.step = env_.step_index();
      dropped.coverage = env_.coverage();
      FinishEpisode(dropped);
      const auto observations = env_.Reset(request["seed"].get<std::uint64_t>());
      ++episode_;
      episode_open_ = true;
      StepInfo info;
      info.level_id = env_.world().level_id();
      info.coverage = env_.coverage();
      info.team_known_cells = env_.team_known_cells();
      return TransitionReply(observations, 0.0, false, false, info);
    }
    if (cmd == "step") {
      if (!request.contains("actions") || !request["actions"].is_array()) {
        return ErrorReply("step needs an 'actions' array");
      }
      const auto streams = request["actions"].get<std::vector<std::vector<double>>>();
      const std::vector<ActionCommand> actions = UnwrapActions(config_.env, streams);
      StepResult step = env_.Step(actions);
      nlohmann::json reply = TransitionReply(step.observations, step.reward, step.terminated,
                                             step.truncated, step.info);
      if (step.terminated || step.truncated) FinishEpisode(step.info);
      return reply;
    }
    return ErrorReply("unknown cmd '" + cmd + "'");
  } catch (const nlohmann::json::exception& e) {
    return ErrorReply(std::string("malformed request: ") + e.what());
  } catch (const std::exception& e) {
    return ErrorReply(e.what());
  }
}

std::string RequestHandler::HandleText(const std::string& request, bool& close) {
  close = false;
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(request);
  } catch (const nlohmann::json::exception& e) {
    return ErrorReply(std::string("invalid JSON: ") + e.what()).dump();
  }
  return Handle(parsed, close).dump();
}

EnvServer::EnvServer(const RunConfig& config)
    : config_(config),
      listener_(ListenTcp(config.listen_address,
                          static_cast<std::uint16_t>(config.listen_port.value_or(0)))) {
  port_ = LocalPort(listener_);
  metrics_ = std::make_unique<MetricsWriter>(config_.log_dir / kMetricsFileName,
                                             config_.metrics_flush_every);
}

void EnvServer::ServeOne() {
  Socket client = AcceptClient(listener_);
  RequestHandler handler(config_, metrics_.get());
  while (auto request = ReadFrame(client)) {
    bool close = false;
    WriteFrame(client, handler.HandleText(*request, close));
    if (close) break;
  }
  metrics_->Flush();
}

}  // namespace imagine::harness
