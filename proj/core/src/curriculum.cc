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

#include "imagine/curriculum.h"

#include <stdexcept>
#include <string>

#include "imagine/world.h"

namespace imagine {

std::string_view ToString(CurriculumMode mode) {
  return mode == CurriculumMode::kSequential ? "sequential" : "parallel";
}

CurriculumMode ParseCurriculumMode(std::string_view name) {
  if (name == "sequential") return CurriculumMode::kSequential;
  if (name == "parallel") return CurriculumMode::kParallel;
  throw std::invalid_argument("unknown curriculum mode '" + std::string(name) + "'");
}

void CurriculumConfig::Validate() const {
  if (!(pass_area > 0.0) || pass_area > 1.0) {
    throw std::invalid_argument("CurriculumConfig: pass_area must be in (0, 1]");
  }
  if (pass_x_times < 1) {
    throw std::invalid_argument("CurriculumConfig: pass_x_times must be at least 1");
  }
  if (level_order.empty()) {
    throw std::invalid_argument("CurriculumConfig: level_order must not be empty");
  }
  for (const int level : level_order) {
    if (level < 0 || level >= kNumLevels) {
      throw std::invalid_argument("CurriculumConfig: level_order entries must be in [0, 6]");
    }
  }
}

CurriculumStep UpdateCurriculum(const CurriculumConfig& config, CurriculumState state,
                                double coverage) {
  if (coverage < config.pass_area) return {state, false};
  ++state.pass_counter;
  if (state.pass_counter < config.pass_x_times) return {state, false};
  state.pass_counter = 0;
  const int last = static_cast<int>(config.level_order.size()) - 1;
  if (state.level_index >= last) return {state, false};
  ++state.level_index;
  return {state, true};
}

}  // namespace imagine
