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

#ifndef IMAGINE_BRESENHAM_H_
#define IMAGINE_BRESENHAM_H_

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "imagine/geometry.h"

namespace imagine {

// Calls visit(cell) for every cell of the Bresenham line from `from` to `to`,
// both inclusive, in order. Along the major axis the minor coordinate is the
// one nearest the ideal line; exact ties round toward `from`.
template <typename Visitor>
void VisitLine(CellIndex from, CellIndex to, Visitor&& visit) {
  const int dx = std::abs(to.x - from.x);
  const int dy = std::abs(to.y - from.y);
  const int sx = to.x >= from.x ? 1 : -1;
  const int sy = to.y >= from.y ? 1 : -1;
  CellIndex cell = from;
  if (dx >= dy) {
    int error = 2 * dy - dx;
    for (int i = 0; i <= dx; ++i) {
      visit(cell);
      if (error > 0) {
        cell.y += sy;
        error -= 2 * dx;
      }
      error += 2 * dy;
      cell.x += sx;
    }
  } else {
    int error = 2 * dx - dy;
    for (int i = 0; i <= dy; ++i) {
      visit(cell);
      if (error > 0) {
        cell.x += sx;
        error -= 2 * dy;
      }
      error += 2 * dx;
      cell.y += sy;
    }
  }
}

inline std::vector<CellIndex> BresenhamLine(CellIndex from, CellIndex to) {
  std::vector<CellIndex> cells;
  cells.reserve(std::max(std::abs(to.x - from.x), std::abs(to.y - from.y)) + 1);
  VisitLine(from, to, [&](CellIndex c) { cells.push_back(c); });
  return cells;
}

}  // namespace imagine

#endif  // IMAGINE_BRESENHAM_H_
