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

#ifndef IMAGINE_HARNESS_CONFIG_H_
#define IMAGINE_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "imagine/env.h"

namespace imagine::harness {

// A malformed config. what() reads "SOURCE:LINE: key 'K': message".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& source, int line, const std::string& key,
              const std::string& message);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

// One parsed value of the flat key/value format: booleans, integers, reals,
// "quoted strings" and one-level [arrays].
struct ConfigValue {
  using Scalar = std::variant<bool, std::int64_t, double, std::string>;
  std::variant<Scalar, std::vector<Scalar>> value;
  int line = 0;
};

// Parses TOML-style text: `key = value` lines, `# comments`, and `[table]`
// headers that prefix subsequent keys with "table.". Keys must be unique.
std::map<std::string, ConfigValue> ParseKeyValues(std::string_view text,
                                                  const std::string& source = "config");

struct RunConfig {
  EnvConfig env;
  // A PolicyKind name, or "external" to serve the wire protocol.
  std::string policy = "random_walk";
  int episodes = 1;
  std::filesystem::path log_dir = "runs";
  std::optional<int> listen_port;
  std::string listen_address = "127.0.0.1";
  // Metrics records buffered between file flushes.
  int metrics_flush_every = 1;
  // Emit one record per step in addition to episode summaries.
  bool log_steps = false;
  bool dump_trajectories = false;
  int random_hold_steps = 10;
  // Externally authored level text; replaces the generated level.
  std::optional<std::filesystem::path> level_file;

  bool external() const { return policy == "external"; }
  // Throws std::invalid_argument.
  void Validate() const;
};

// Unknown keys, type mismatches and failed validation raise ConfigError.
RunConfig ParseRunConfig(std::string_view text, const std::string& source = "config");
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Loads level_file into env.world when set. Throws std::invalid_argument.
void ResolveLevelFile(RunConfig& config);

}  // namespace imagine::harness

#endif  // IMAGINE_HARNESS_CONFIG_H_
