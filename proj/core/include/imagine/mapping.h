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

#ifndef IMAGINE_MAPPING_H_
#define IMAGINE_MAPPING_H_

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "imagine/geometry.h"
#include "imagine/sensing.h"
#include "imagine/world.h"

namespace imagine {

// Log-odds are stored in fixed point: one tick is 1/1024 of a log-odds unit,
// the same quantum as the map-share wire format. Integer storage makes cell
// fusion exactly commutative and associative, and map shares lossless.
inline constexpr int kLogOddsTicksPerUnit = 1024;
using LogOddsTicks = std::int32_t;

inline LogOddsTicks ToTicks(double log_odds) {
  return static_cast<LogOddsTicks>(std::lround(log_odds * kLogOddsTicksPerUnit));
}
inline double FromTicks(LogOddsTicks ticks) {
  return static_cast<double>(ticks) / kLogOddsTicksPerUnit;
}

inline double ProbabilityFromLogOdds(double log_odds) {
  return 1.0 / (1.0 + std::exp(-log_odds));
}
inline double LogOddsFromProbability(double p) { return std::log(p / (1.0 - p)); }

// Cached 1 / (1 + exp(-ticks / 1024)) for the 16-bit tick range.
double ProbabilityFromTicks(LogOddsTicks ticks);

// Inverse sensor model and classification threshold, in log-odds units.
struct MappingParams {
  double l_occ = 0.85;
  double l_free = -0.4;
  double l_min = -10.0;
  double l_max = 10.0;
  double epsilon = 0.3;

  // Throws std::invalid_argument unless l_min < 0 < l_max, both bounds fit
  // the 16-bit wire format, l_free < 0 < l_occ, and epsilon > 0.
  void Validate() const;
};

// Per-agent belief over the world lattice. A fresh grid is all unknown.
class OccupancyGrid {
 public:
  OccupancyGrid(int width, int height, double cell_size, MappingParams params = {});
  static OccupancyGrid ForWorld(const GridWorld& world, MappingParams params = {}) {
    return OccupancyGrid(world.width(), world.height(), world.cell_size(), params);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }
  const MappingParams& params() const { return params_; }
  int cell_count() const { return width_ * height_; }

  bool InBounds(CellIndex c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  int Index(CellIndex c) const { return c.y * width_ + c.x; }
  CellIndex CellOf(Vec2 p) const {
    return {static_cast<int>(std::floor(p.x / cell_size_)),
            static_cast<int>(std::floor(p.y / cell_size_))};
  }

  LogOddsTicks ticks(int index) const { return ticks_[index]; }
  const std::vector<LogOddsTicks>& ticks() const { return ticks_; }
  double LogOdds(CellIndex c) const { return FromTicks(ticks_[Index(c)]); }
  double Probability(CellIndex c) const { return ProbabilityFromTicks(ticks_[Index(c)]); }

  // Quantizes to ticks and clamps to [l_min, l_max].
  void SetLogOdds(CellIndex c, double log_odds) { SetTicks(Index(c), ToTicks(log_odds)); }
  void SetTicks(int index, LogOddsTicks value) { ticks_[index] = Clamp(value); }

  LogOddsTicks Clamp(LogOddsTicks value) const {
    return value < min_ticks_ ? min_ticks_ : (value > max_ticks_ ? max_ticks_ : value);
  }
  LogOddsTicks min_ticks() const { return min_ticks_; }
  LogOddsTicks max_ticks() const { return max_ticks_; }
  LogOddsTicks occ_ticks() const { return occ_ticks_; }
  LogOddsTicks free_ticks() const { return free_ticks_; }

  // |log_odds| > epsilon.
  bool IsKnown(int index) const { return IsKnownTicks(ticks_[index]); }
  bool IsKnownTicks(LogOddsTicks t) const { return t > known_ticks_ || t < -known_ticks_; }

  // Cell sizes are compared at the wire format's single precision.
  bool SameLattice(const OccupancyGrid& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           static_cast<float>(cell_size_) == static_cast<float>(other.cell_size_);
  }

  friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
    return a.SameLattice(b) && a.ticks_ == b.ticks_;
  }

 private:
  int width_;
  int height_;
  double cell_size_;
  MappingParams params_;
  LogOddsTicks min_ticks_;
  LogOddsTicks max_ticks_;
  LogOddsTicks occ_ticks_;
  LogOddsTicks free_ticks_;
  // Largest tick magnitude still classified as unknown.
  LogOddsTicks known_ticks_;
  std::vector<LogOddsTicks> ticks_;
};

struct CellChange {
  int index = 0;
  CellIndex cell;
  double new_log_odds = 0.0;
};

// Cells changed by one update, each listed once.
struct CellDelta {
  std::vector<CellChange> changes;
  // Cells that went from unknown to known.
  int discovered_count = 0;
  // Cells that went from known back to unknown (conflicting evidence).
  int forgotten_count = 0;
};

// Inserts one scan: every ray's Bresenham line from the origin cell to the
// endpoint cell, both exclusive, gets l_free; the endpoint gets l_occ on a hit
// and l_free otherwise. Ray angles follow `config`. Clamps after every add.
CellDelta UpdateFromScan(OccupancyGrid& grid, const LidarScan& scan,
                         const LidarConfig& config);

// Cellwise clamp(a + b). Throws std::invalid_argument on lattice mismatch.
OccupancyGrid FuseMaps(const OccupancyGrid& a, const OccupancyGrid& b);
CellDelta FuseInto(OccupancyGrid& dst, const OccupancyGrid& src);

struct EgocentricMap {
  int size = 0;
  CellIndex center;
  // Row-major, row 0 at the lowest y; probabilities, 0.5 where unknown or
  // outside the lattice.
  std::vector<double> probabilities;

  double at(int col, int row) const { return probabilities[row * size + col]; }
};

// Window cell (col, row) maps to lattice cell center + (col - W/2, row - W/2)
// with integer division, so the agent's cell sits at (W/2, W/2).
EgocentricMap ExtractEgocentric(const OccupancyGrid& grid, Vec2 position, int window);

int KnownCells(const OccupancyGrid& grid, double epsilon);
inline int KnownCells(const OccupancyGrid& grid) {
  return KnownCells(grid, grid.params().epsilon);
}

// Map snapshot: width u32, height u32, cell_size f32, epsilon f32, then
// row-major int16 ticks, all little-endian.
inline constexpr std::size_t kMapHeaderBytes = 16;
inline std::size_t MapPayloadBytes(int width, int height) {
  return kMapHeaderBytes + 2 * static_cast<std::size_t>(width) * height;
}
std::vector<std::uint8_t> SerializeGrid(const OccupancyGrid& grid);
// Throws std::invalid_argument on a truncated or inconsistent payload.
OccupancyGrid DeserializeGrid(std::span<const std::uint8_t> bytes, MappingParams params = {});

}  // namespace imagine

#endif  // IMAGINE_MAPPING_H_
