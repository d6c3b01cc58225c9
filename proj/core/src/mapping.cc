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

#include "imagine/mapping.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "imagine/bresenham.h"

namespace imagine {
namespace {

// Hit endpoints are pushed this fraction of a cell past the reported range
// so that a hit on a cell boundary lands inside the occupied cell.
constexpr double kEndpointNudge = 1e-3;

constexpr LogOddsTicks kWireMin = std::numeric_limits<std::int16_t>::min();
constexpr LogOddsTicks kWireMax = std::numeric_limits<std::int16_t>::max();

struct TouchRecord {
  int index;
  LogOddsTicks before;
};

CellDelta Summarize(const OccupancyGrid& grid, std::vector<TouchRecord>& touched) {
  std::stable_sort(touched.begin(), touched.end(),
                   [](const TouchRecord& a, const TouchRecord& b) { return a.index < b.index; });
  // After the stable sort the first record of each index holds its value
  // before the update.
  touched.erase(std::unique(touched.begin(), touched.end(),
                            [](const TouchRecord& a, const TouchRecord& b) {
                              return a.index == b.index;
                            }),
                touched.end());
  CellDelta delta;
  for (const TouchRecord& record : touched) {
    const LogOddsTicks after = grid.ticks(record.index);
    if (after == record.before) continue;
    const CellIndex cell{record.index % grid.width(), record.index / grid.width()};
    delta.changes.push_back({record.index, cell, FromTicks(after)});
    const bool was_known = grid.IsKnownTicks(record.before);
    const bool is_known = grid.IsKnownTicks(after);
    if (!was_known && is_known) ++delta.discovered_count;
    if (was_known && !is_known) ++delta.forgotten_count;
  }
  return delta;
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
std::uint32_t GetU32(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[offset + i]) << (8 * i);
  return v;
}

}  // namespace

double ProbabilityFromTicks(LogOddsTicks ticks) {
  static const std::vector<double> table = [] {
    std::vector<double> t(static_cast<std::size_t>(kWireMax - kWireMin) + 1);
    for (LogOddsTicks k = kWireMin; k <= kWireMax; ++k) {
      t[k - kWireMin] = ProbabilityFromLogOdds(FromTicks(k));
    }
    return t;
  }();
  if (ticks < kWireMin || ticks > kWireMax) return ProbabilityFromLogOdds(FromTicks(ticks));
  return table[ticks - kWireMin];
}

void MappingParams::Validate() const {
  if (!(l_min < 0.0) || !(l_max > 0.0)) {
    throw std::invalid_argument("MappingParams: need l_min < 0 < l_max");
  }
  if (ToTicks(l_min) < kWireMin || ToTicks(l_max) > kWireMax) {
    throw std::invalid_argument("MappingParams: log-odds bounds exceed the 16-bit map format");
  }
  if (!(l_free < 0.0) || !(l_occ > 0.0)) {
    throw std::invalid_argument("MappingParams: need l_free < 0 < l_occ");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("MappingParams: epsilon must be positive");
  }
}

OccupancyGrid::OccupancyGrid(int width, int height, double cell_size, MappingParams params)
    : width_(width), height_(height), cell_size_(cell_size), params_(params) {
  if (width_ <= 0 || height_ <= 0 || !(cell_size_ > 0.0)) {
    throw std::invalid_argument("OccupancyGrid: dimensions must be positive");
  }
  params_.Validate();
  min_ticks_ = ToTicks(params_.l_min);
  max_ticks_ = ToTicks(params_.l_max);
  occ_ticks_ = ToTicks(params_.l_occ);
  free_ticks_ = ToTicks(params_.l_free);
  known_ticks_ = static_cast<LogOddsTicks>(std::floor(params_.epsilon * kLogOddsTicksPerUnit));
  ticks_.assign(static_cast<std::size_t>(width_) * height_, 0);
}

CellDelta UpdateFromScan(OccupancyGrid& grid, const LidarScan& scan,
                         const LidarConfig& config) {
  std::vector<TouchRecord> touched;
  touched.reserve(scan.ranges.size() * 64);
  const CellIndex origin_cell = grid.CellOf(scan.origin);
  const double nudge = kEndpointNudge * grid.cell_size();

  auto add = [&](CellIndex c, LogOddsTicks delta) {
    if (!grid.InBounds(c)) return;
    const int index = grid.Index(c);
    const LogOddsTicks before = grid.ticks(index);
    touched.push_back({index, before});
    grid.SetTicks(index, before + delta);
  };

  for (std::size_t k = 0; k < scan.ranges.size(); ++k) {
    const double angle = scan.origin_heading + config.RayOffset(static_cast<int>(k));
    const bool hit = scan.hit_flags[k];
    const double reach = scan.ranges[k] + (hit ? nudge : 0.0);
    const Vec2 end = scan.origin + reach * Vec2{std::cos(angle), std::sin(angle)};
    const CellIndex end_cell = grid.CellOf(end);
    if (end_cell == origin_cell) {
      continue;
    }
    VisitLine(origin_cell, end_cell, [&](CellIndex c) {
      if (c == origin_cell || c == end_cell) return;
      add(c, grid.free_ticks());
    });
    add(end_cell, hit ? grid.occ_ticks() : grid.free_ticks());
  }
  return Summarize(grid, touched);
}

OccupancyGrid FuseMaps(const OccupancyGrid& a, const OccupancyGrid& b) {
  OccupancyGrid fused = a;
  FuseInto(fused, b);
  return fused;
}

CellDelta FuseInto(OccupancyGrid& dst, const OccupancyGrid& src) {
  if (!dst.SameLattice(src)) {
    throw std::invalid_argument("FuseMaps: lattice mismatch");
  }
  std::vector<TouchRecord> touched;
  for (int i = 0; i < dst.cell_count(); ++i) {
    const LogOddsTicks add = src.ticks(i);
    if (add == 0) continue;
    const LogOddsTicks before = dst.ticks(i);
    touched.push_back({i, before});
    dst.SetTicks(i, before + add);
  }
  return Summarize(dst, touched);
}

EgocentricMap ExtractEgocentric(const OccupancyGrid& grid, Vec2 position, int window) {
  if (window <= 0) {
    throw std::invalid_argument("ExtractEgocentric: window must be positive");
  }
  EgocentricMap map;
  map.size = window;
  map.center = grid.CellOf(position);
  map.probabilities.assign(static_cast<std::size_t>(window) * window, 0.5);
  const int x0 = map.center.x - window / 2;
  const int y0 = map.center.y - window / 2;
  for (int row = 0; row < window; ++row) {
    const int y = y0 + row;
    if (y < 0 || y >= grid.height()) continue;
    for (int col = 0; col < window; ++col) {
      const int x = x0 + col;
      if (x < 0 || x >= grid.width()) continue;
      map.probabilities[row * window + col] = ProbabilityFromTicks(grid.ticks(y * grid.width() + x));
    }
  }
  return map;
}

int KnownCells(const OccupancyGrid& grid, double epsilon) {
  int count = 0;
  for (const LogOddsTicks t : grid.ticks()) {
    if (std::abs(FromTicks(t)) > epsilon) ++count;
  }
  return count;
}

std::vector<std::uint8_t> SerializeGrid(const OccupancyGrid& grid) {
  std::vector<std::uint8_t> out;
  out.reserve(MapPayloadBytes(grid.width(), grid.height()));
  PutU32(out, static_cast<std::uint32_t>(grid.width()));
  PutU32(out, static_cast<std::uint32_t>(grid.height()));
  PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(grid.cell_size())));
  PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(grid.params().epsilon)));
  for (const LogOddsTicks t : grid.ticks()) {
    const auto v = static_cast<std::uint16_t>(static_cast<std::int16_t>(t));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  return out;
}

OccupancyGrid DeserializeGrid(std::span<const std::uint8_t> bytes, MappingParams params) {
  if (bytes.size() < kMapHeaderBytes) {
    throw std::invalid_argument("DeserializeGrid: truncated header");
  }
  const auto width = static_cast<int>(GetU32(bytes, 0));
  const auto height = static_cast<int>(GetU32(bytes, 4));
  const float cell_size = std::bit_cast<float>(GetU32(bytes, 8));
  params.epsilon = std::bit_cast<float>(GetU32(bytes, 12));
  if (width <= 0 || height <= 0 || bytes.size() != MapPayloadBytes(width, height)) {
    throw std::invalid_argument("DeserializeGrid: payload size does not match header");
  }
  OccupancyGrid grid(width, height, cell_size, params);
  for (int i = 0; i < width * height; ++i) {
    const std::size_t at = kMapHeaderBytes + 2 * static_cast<std::size_t>(i);
    const auto raw = static_cast<std::uint16_t>(bytes[at] | (bytes[at + 1] << 8));
    grid.SetTicks(i, static_cast<std::int16_t>(raw));
  }
  return grid;
}

}  // namespace imagine
