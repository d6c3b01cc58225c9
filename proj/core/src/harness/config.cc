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

#include "imagine/harness/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "imagine/baselines.h"

namespace imagine::harness {
namespace {

using Scalar = ConfigValue::Scalar;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool IsKeyChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

// Drops a trailing comment that is not inside a string.
std::string_view StripComment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

Scalar ParseScalar(std::string_view text) {
  text = Trim(text);
  if (text.empty()) throw std::invalid_argument("missing value");
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') throw std::invalid_argument("unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
      char c = text[i];
      if (c == '"') throw std::invalid_argument("stray quote in string");
      if (c == '\\') {
        if (i + 2 >= text.size()) throw std::invalid_argument("dangling escape");
        switch (text[++i]) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: throw std::invalid_argument("unknown escape");
        }
      }
      out.push_back(c);
    }
    return out;
  }
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  std::int64_t integer = 0;
  if (auto [p, ec] = std::from_chars(first, last, integer); ec == std::errc() && p == last) {
    return integer;
  }
  double real = 0.0;
  if (auto [p, ec] = std::from_chars(first, last, real); ec == std::errc() && p == last) {
    if (std::isnan(real)) throw std::invalid_argument("nan is not allowed");
    return real;
  }
  throw std::invalid_argument("cannot parse value '" + std::string(text) + "'");
}

ConfigValue ParseValue(std::string_view text, int line) {
  text = Trim(text);
  ConfigValue value;
  value.line = line;
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw std::invalid_argument("unterminated array");
    std::vector<Scalar> items;
    std::string_view body = Trim(text.substr(1, text.size() - 2));
    while (!body.empty()) {
      // Split on the next comma outside quotes.
      bool quoted = false;
      std::size_t cut = body.size();
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '"') quoted = !quoted;
        if (body[i] == ',' && !quoted) {
          cut = i;
          break;
        }
      }
      items.push_back(ParseScalar(body.substr(0, cut)));
      body = cut < body.size() ? Trim(body.substr(cut + 1)) : std::string_view();
    }
    value.value = std::move(items);
  } else {
    value.value = ParseScalar(text);
  }
  return value;
}

const Scalar& AsScalar(const ConfigValue& v) {
  if (const auto* s = std::get_if<Scalar>(&v.value)) return *s;
  throw std::invalid_argument("expected a single value, got an array");
}

bool AsBool(const ConfigValue& v) {
  if (const auto* b = std::get_if<bool>(&AsScalar(v))) return *b;
  throw std::invalid_argument("expected true or false");
}

std::int64_t AsInt64(const Scalar& s) {
  if (const auto* i = std::get_if<std::int64_t>(&s)) return *i;
  throw std::invalid_argument("expected an integer");
}

int AsInt(const ConfigValue& v) {
  const std::int64_t i = AsInt64(AsScalar(v));
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
    throw std::invalid_argument("integer out of range");
  }
  return static_cast<int>(i);
}

double AsReal(const ConfigValue& v) {
  const Scalar& s = AsScalar(v);
  if (const auto* d = std::get_if<double>(&s)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&s)) return static_cast<double>(*i);
  throw std::invalid_argument("expected a number");
}

std::string AsString(const ConfigValue& v) {
  if (const auto* s = std::get_if<std::string>(&AsScalar(v))) return *s;
  throw std::invalid_argument("expected a quoted string");
}

const std::vector<Scalar>& AsArray(const ConfigValue& v) {
  if (const auto* a = std::get_if<std::vector<Scalar>>(&v.value)) return *a;
  throw std::invalid_argument("expected an array");
}

using Setter = std::function<void(RunConfig&, const ConfigValue&)>;

CurriculumConfig& Curriculum(RunConfig& c) {
  if (!c.env.curriculum) c.env.curriculum.emplace();
  return *c.env.curriculum;
}

const std::map<std::string, Setter, std::less<>>& Setters() {
  static const auto* setters = new std::map<std::string, Setter, std::less<>>{
      {"n_agents", [](RunConfig& c, const ConfigValue& v) { c.env.n_agents = AsInt(v); }},
      {"level_id", [](RunConfig& c, const ConfigValue& v) { c.env.level_id = AsInt(v); }},
      {"level_file", [](RunConfig& c, const ConfigValue& v) { c.level_file = AsString(v); }},
      {"paradigm",
       [](RunConfig& c, const ConfigValue& v) { c.env.paradigm = ParseParadigm(AsString(v)); }},
      {"episode_steps", [](RunConfig& c, const ConfigValue& v) { c.env.episode_steps = AsInt(v); }},
      {"dt", [](RunConfig& c, const ConfigValue& v) { c.env.kinematics.dt = AsReal(v); }},
      {"v_max", [](RunConfig& c, const ConfigValue& v) { c.env.kinematics.v_max = AsReal(v); }},
      {"omega_max",
       [](RunConfig& c, const ConfigValue& v) { c.env.kinematics.omega_max = AsReal(v); }},
      {"body_radius",
       [](RunConfig& c, const ConfigValue& v) { c.env.kinematics.body_radius = AsReal(v); }},
      {"norm_clamp_linear",
       [](RunConfig& c, const ConfigValue& v) { c.env.kinematics.norm_clamp_linear = AsBool(v); }},
      {"action_variant",
       [](RunConfig& c, const ConfigValue& v) {
         c.env.action_variant = ParseActionVariant(AsString(v));
       }},
      {"observation_variant",
       [](RunConfig& c, const ConfigValue& v) {
         ObservationVariant o{false, false, false, false};
         for (const Scalar& item : AsArray(v)) {
           const auto* name = std::get_if<std::string>(&item);
           if (name == nullptr) throw std::invalid_argument("expected block names");
           if (*name == "ego_map") {
             o.ego_map = true;
           } else if (*name == "lidar") {
             o.lidar = true;
           } else if (*name == "pose_velocity") {
             o.pose_velocity = true;
           } else if (*name == "inter_agent_distances") {
             o.inter_agent_distances = true;
           } else {
             throw std::invalid_argument("unknown observation block '" + *name + "'");
           }
         }
         c.env.observation = o;
       }},
      {"ego_window", [](RunConfig& c, const ConfigValue& v) { c.env.ego_window = AsInt(v); }},
      {"W_area", [](RunConfig& c, const ConfigValue& v) { c.env.w_area = AsReal(v); }},
      {"W_collision", [](RunConfig& c, const ConfigValue& v) { c.env.w_collision = AsReal(v); }},
      {"R_collision", [](RunConfig& c, const ConfigValue& v) { c.env.r_collision = AsReal(v); }},
      {"normalize_by_team",
       [](RunConfig& c, const ConfigValue& v) { c.env.normalize_by_team = AsBool(v); }},
      {"kill_on_collision",
       [](RunConfig& c, const ConfigValue& v) { c.env.kill_on_collision = AsBool(v); }},
      {"seed",
       [](RunConfig& c, const ConfigValue& v) {
         const std::int64_t s = AsInt64(AsScalar(v));
         if (s < 0) throw std::invalid_argument("seed must be non-negative");
         c.env.seed = static_cast<std::uint64_t>(s);
       }},
      {"comm.mode",
       [](RunConfig& c, const ConfigValue& v) { c.env.comm.mode = ParseCommMode(AsString(v)); }},
      {"comm.range", [](RunConfig& c, const ConfigValue& v) { c.env.comm.range = AsReal(v); }},
      {"comm.bandwidth",
       [](RunConfig& c, const ConfigValue& v) { c.env.comm.bandwidth = AsReal(v); }},
      {"comm.max_hops", [](RunConfig& c, const ConfigValue& v) { c.env.comm.max_hops = AsInt(v); }},
      {"lidar.ray_count",
       [](RunConfig& c, const ConfigValue& v) { c.env.lidar.ray_count = AsInt(v); }},
      {"lidar.fov",
       [](RunConfig& c, const ConfigValue& v) { c.env.lidar.field_of_view = AsReal(v); }},
      {"lidar.max_range",
       [](RunConfig& c, const ConfigValue& v) { c.env.lidar.max_range = AsReal(v); }},
      {"mapping.l_occ", [](RunConfig& c, const ConfigValue& v) { c.env.mapping.l_occ = AsReal(v); }},
      {"mapping.l_free",
       [](RunConfig& c, const ConfigValue& v) { c.env.mapping.l_free = AsReal(v); }},
      {"mapping.l_min", [](RunConfig& c, const ConfigValue& v) { c.env.mapping.l_min = AsReal(v); }},
      {"mapping.l_max", [](RunConfig& c, const ConfigValue& v) { c.env.mapping.l_max = AsReal(v); }},
      {"mapping.epsilon",
       [](RunConfig& c, const ConfigValue& v) { c.env.mapping.epsilon = AsReal(v); }},
      {"curriculum.mode",
       [](RunConfig& c, const ConfigValue& v) {
         Curriculum(c).mode = ParseCurriculumMode(AsString(v));
       }},
      {"curriculum.pass_area",
       [](RunConfig& c, const ConfigValue& v) { Curriculum(c).pass_area = AsReal(v); }},
      {"curriculum.pass_x_times",
       [](RunConfig& c, const ConfigValue& v) { Curriculum(c).pass_x_times = AsInt(v); }},
      {"curriculum.order",
       [](RunConfig& c, const ConfigValue& v) {
         std::vector<int> order;
         for (const Scalar& item : AsArray(v)) order.push_back(static_cast<int>(AsInt64(item)));
         Curriculum(c).level_order = std::move(order);
       }},
      {"policy", [](RunConfig& c, const ConfigValue& v) { c.policy = AsString(v); }},
      {"episodes", [](RunConfig& c, const ConfigValue& v) { c.episodes = AsInt(v); }},
      {"log_dir", [](RunConfig& c, const ConfigValue& v) { c.log_dir = AsString(v); }},
      {"listen_port", [](RunConfig& c, const ConfigValue& v) { c.listen_port = AsInt(v); }},
      {"listen_address", [](RunConfig& c, const ConfigValue& v) { c.listen_address = AsString(v); }},
      {"metrics_flush_every",
       [](RunConfig& c, const ConfigValue& v) { c.metrics_flush_every = AsInt(v); }},
      {"log_steps", [](RunConfig& c, const ConfigValue& v) { c.log_steps = AsBool(v); }},
      {"dump_trajectories",
       [](RunConfig& c, const ConfigValue& v) { c.dump_trajectories = AsBool(v); }},
      {"random_hold_steps",
       [](RunConfig& c, const ConfigValue& v) { c.random_hold_steps = AsInt(v); }},
  };
  return *setters;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& key,
                         const std::string& message)
    : std::invalid_argument(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
                            ": " + (key.empty() ? std::string() : "key '" + key + "': ") +
                            message),
      line_(line),
      key_(key) {}

std::map<std::string, ConfigValue> ParseKeyValues(std::string_view text,
                                                  const std::string& source) {
  std::map<std::string, ConfigValue> out;
  std::string prefix;
  int line_number = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view() : text.substr(eol + 1);
    ++line_number;
    line = Trim(StripComment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_number, "", "malformed table header");
      const std::string_view name = Trim(line.substr(1, line.size() - 2));
      if (name.empty() || !std::all_of(name.begin(), name.end(), IsKeyChar)) {
        throw ConfigError(source, line_number, "", "malformed table name");
      }
      prefix = std::string(name) + ".";
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source, line_number, "", "expected 'key = value'");
    }
    const std::string_view bare = Trim(line.substr(0, eq));
    if (bare.empty() || !std::all_of(bare.begin(), bare.end(), IsKeyChar)) {
      throw ConfigError(source, line_number, std::string(bare), "malformed key");
    }
    const std::string key = prefix + std::string(bare);
    ConfigValue value;
    try {
      value = ParseValue(line.substr(eq + 1), line_number);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, line_number, key, e.what());
    }
    if (!out.emplace(key, std::move(value)).second) {
      throw ConfigError(source, line_number, key, "duplicate key");
    }
  }
  return out;
}

void RunConfig::Validate() const {
  env.Validate();
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (metrics_flush_every < 1) throw std::invalid_argument("metrics_flush_every must be >= 1");
  if (random_hold_steps < 1) throw std::invalid_argument("random_hold_steps must be >= 1");
  if (listen_port && (*listen_port < 0 || *listen_port > 65535)) {
    throw std::invalid_argument("listen_port must be in [0, 65535]");
  }
  if (external()) {
    if (!listen_port) throw std::invalid_argument("external policy requires listen_port");
    return;
  }
  const PolicyKind kind = ParsePolicyKind(policy);
  if (kind == PolicyKind::kFrontierGreedy && !env.observation.ego_map) {
    throw std::invalid_argument("frontier_greedy needs the ego_map observation block");
  }
}

RunConfig ParseRunConfig(std::string_view text, const std::string& source) {
  RunConfig config;
  for (const auto& [key, value] : ParseKeyValues(text, source)) {
    const auto it = Setters().find(key);
    if (it == Setters().end()) throw ConfigError(source, value.line, key, "unknown key");
    try {
      it->second(config, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, value.line, key, e.what());
    }
  }
  try {
    config.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source, 0, "", e.what());
  }
  return config;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig config = ParseRunConfig(text.str(), path.string());
  // Relative level files resolve against the config's directory.
  if (config.level_file && config.level_file->is_relative()) {
    config.level_file = path.parent_path() / *config.level_file;
  }
  return config;
}

void ResolveLevelFile(RunConfig& config) {
  if (!config.level_file) return;
  config.env.world = std::make_shared<const GridWorld>(
      LoadLevelFile(*config.level_file, config.env.kinematics.body_radius));
}

}  // namespace imagine::harness
