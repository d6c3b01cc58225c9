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

#ifndef IMAGINE_CURRICULUM_H_
#define IMAGINE_CURRICULUM_H_

#include <string_view>
#include <vector>

namespace imagine {

enum class CurriculumMode { kSequential, kParallel };

std::string_view ToString(CurriculumMode mode);
CurriculumMode ParseCurriculumMode(std::string_view name);

struct CurriculumConfig {
  CurriculumMode mode = CurriculumMode::kSequential;
  double pass_area = 0.8;
  int pass_x_times = 20;
  std::vector<int> level_order = {0, 1, 2, 3, 4, 5, 6};

  void Validate() const;
};

struct CurriculumState {
  int level_index = 0;
  // Passes at the current level; need not be consecutive.
  int pass_counter = 0;

  friend bool operator==(const CurriculumState&, const CurriculumState&) = default;
};

struct CurriculumStep {
  CurriculumState state;
  bool advanced = false;
};

// A pass is an episode with coverage >= pass_area. Reaching pass_x_times
// passes moves to the next entry of level_order and zeroes the counter. On
// the last level the counter is still cleared but the level stays put.
CurriculumStep UpdateCurriculum(const CurriculumConfig& config, CurriculumState state,
                                double coverage);

}  // namespace imagine

#endif  // IMAGINE_CURRICULUM_H_
