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

// Acceptance suite. Prints one PASS/FAIL line per criterion; exits non-zero
// when any selected criterion fails. Pass a criterion name to run just that
// one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.h"
#include "imagine/baselines.h"
#include "imagine/curriculum.h"
#include "imagine/env.h"
#include "imagine/harness/runner.h"
#include "imagine/mapping.h"
#include "imagine/network.h"
#include "imagine/sensing.h"

namespace imagine::acceptance {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Outcome()> run;
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string Format(const char* fmt, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), fmt, args...);
  return buffer;
}

std::filesystem::path ScratchDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "imagine_acceptance" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Runs one episode of a per-agent baseline directly against the environment
// and calls `on_step` after every transition.
void RunEpisode(Environment& env, PolicyKind kind, std::uint64_t seed,
                const std::function<void(const StepResult&)>& on_step) {
  std::vector<Observation> obs = env.Reset(seed);
  std::vector<std::unique_ptr<Policy>> policies;
  for (int i = 0; i < env.config().n_agents; ++i) {
    policies.push_back(MakePolicy(kind, env.config(), harness::PolicySeed(seed, i)));
  }
  std::vector<ActionCommand> actions;
  for (;;) {
    actions.clear();
    for (int i = 0; i < env.config().n_agents; ++i) actions.push_back(policies[i]->Act(obs[i]));
    StepResult step = env.Step(actions);
    on_step(step);
    obs = std::move(step.observations);
    if (step.terminated || step.truncated) break;
  }
  env.EndEpisode();
}

Outcome Determinism() {
  const Stopwatch clock;
  std::vector<std::string> failures;
  std::size_t total_bytes = 0;
  for (int level : {0, 4}) {
    for (const char* policy : {"stationary", "random_walk"}) {
      std::string text[2];
      for (int run = 0; run < 2; ++run) {
        harness::RunConfig config;
        config.policy = policy;
        config.episodes = 10;
        config.env.level_id = level;
        config.env.seed = 20260101;
        config.log_dir = ScratchDir(Format("determinism_%d_%s_%d", level, policy, run));
        text[run] = Slurp(harness::RunBaseline(config).metrics_path);
      }
      total_bytes += text[0].size();
      if (text[0].empty() || text[0] != text[1]) {
        failures.push_back(Format("level %d %s", level, policy));
      }
    }
  }
  const double seconds = clock.Seconds();
  Outcome out;
  out.pass = failures.empty() && seconds < 60.0;
  out.detail = Format("4 config pairs x 10 episodes, %zu bytes compared, %.1f s (limit 60 s)",
                      total_bytes, seconds);
  for (const auto& f : failures) out.detail += "; differs: " + f;
  return out;
}

OccupancyGrid RandomGrid(std::mt19937_64& rng, int w, int h, LogOddsTicks bound) {
  OccupancyGrid grid(w, h, kDefaultCellSize);
  std::uniform_int_distribution<LogOddsTicks> value(-bound, bound);
  for (int i = 0; i < grid.cell_count(); ++i) grid.SetTicks(i, value(rng));
  return grid;
}

Outcome FusionAlgebra() {
  std::mt19937_64 rng(7);
  const OccupancyGrid probe(1, 1, kDefaultCellSize);
  // Three summands stay strictly inside the clamp range.
  const LogOddsTicks bound = (probe.max_ticks() - 1) / 3;
  int commutative = 0;
  int associative = 0;
  int identity = 0;
  std::uniform_int_distribution<int> dim(1, 48);
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = dim(rng);
    const int h = dim(rng);
    const OccupancyGrid a = RandomGrid(rng, w, h, bound);
    const OccupancyGrid b = RandomGrid(rng, w, h, bound);
    const OccupancyGrid c = RandomGrid(rng, w, h, bound);
    const OccupancyGrid zero(w, h, kDefaultCellSize);
    commutative += FuseMaps(a, b) == FuseMaps(b, a);
    associative += FuseMaps(FuseMaps(a, b), c) == FuseMaps(a, FuseMaps(b, c));
    identity += FuseMaps(a, zero) == a && FuseMaps(zero, a) == a;
  }

  // Probability space: compare against P1 P2 / (P1 P2 + (1 - P1)(1 - P2)).
  const LogOddsTicks pair_bound = (probe.max_ticks() - 1) / 2;
  std::uniform_int_distribution<LogOddsTicks> value(-pair_bound, pair_bound);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    OccupancyGrid a(1, 1, kDefaultCellSize);
    OccupancyGrid b(1, 1, kDefaultCellSize);
    a.SetTicks(0, value(rng));
    b.SetTicks(0, value(rng));
    const double p1 = a.Probability({0, 0});
    const double p2 = b.Probability({0, 0});
    const double expected = p1 * p2 / (p1 * p2 + (1.0 - p1) * (1.0 - p2));
    worst = std::max(worst, std::abs(FuseMaps(a, b).Probability({0, 0}) - expected));
  }
  Outcome out;
  out.pass = commutative == 1000 && associative == 1000 && identity == 1000 && worst <= 1e-12;
  out.detail = Format(
      "commutative %d/1000, associative %d/1000, identity %d/1000, max |P - Pc| = %.3g over "
      "10000 pairs (limit 1e-12)",
      commutative, associative, identity, worst);
  return out;
}

Outcome Telescoping() {
  EnvConfig config;
  config.n_agents = 2;
  config.w_collision = 0.0;
  Environment env(config);
  const double a_max = MaxDiscoverableArea(config.lidar.max_range, config.kinematics.v_max,
                                           config.kinematics.dt);
  double worst = 0.0;
  int audits_failed = 0;
  for (int episode = 0; episode < 100; ++episode) {
    const std::uint64_t seed = harness::EpisodeSeed(99, episode);
    double reward_sum = 0.0;
    bool monotone = true;
    // Known cells of the fused team belief right after reset.
    env.Reset(seed);
    const int initial = KnownCells(env.TeamBelief());
    RunEpisode(env, PolicyKind::kRandomWalk, seed, [&](const StepResult& step) {
      reward_sum += step.reward;
      monotone = monotone && step.info.monotone;
    });
    const int final_known = KnownCells(env.TeamBelief());
    const double cell = env.world().cell_size();
    const double expected = config.w_area * (final_known - initial) * cell * cell / a_max;
    audits_failed += !monotone;
    worst = std::max(worst, std::abs(reward_sum - expected));
  }
  Outcome out;
  out.pass = audits_failed == 0 && worst <= 1e-9;
  out.detail = Format("100 episodes, monotonicity audit failures %d, max |sum r - dA/A_max| = %.3g "
                      "(limit 1e-9)",
                      audits_failed, worst);
  return out;
}

Outcome AMaxArithmetic() {
  const double a_max = MaxDiscoverableArea(5.0, 0.8, 0.1);
  EnvConfig config;
  const double configured = MaxDiscoverableArea(config.lidar.max_range, config.kinematics.v_max,
                                                config.kinematics.dt);
  config.w_area = 1.0;
  config.w_collision = 3.0;
  const double cell = kDefaultCellSize;
  // Cells whose area equals 3 A_max, found by integer arithmetic on the
  // defaults: 3 * 0.8 m^2 / (0.04 m)^2 = 1500.
  const int break_even = 1500;
  const double at = ComputeReward(0, break_even, 1, config, cell);
  const double below = ComputeReward(0, break_even - 1, 1, config, cell);
  const double above = ComputeReward(0, break_even + 1, 1, config, cell);
  Outcome out;
  out.pass = a_max == 0.8 && configured == 0.8 && std::abs(at) <= 1e-12 && below < 0.0 &&
             above > 0.0;
  out.detail = Format(
      "A_max = %.17g, default config A_max = %.17g, reward at 3 A_max with one collision = %.3g "
      "(below %.4f, above %.4f)",
      a_max, configured, at, below, above);
  return out;
}

Outcome RaycastOracle() {
  const Stopwatch clock;
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> heading(-std::numbers::pi, std::numbers::pi);
  const LidarConfig lidar;
  double worst_excess = 0.0;
  int violations = 0;
  long rays = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const oracle::Scene scene = oracle::RandomScene(rng);
    AgentState self;
    self.position = scene.free_point;
    self.heading = heading(rng);
    const LidarScan scan = Scan(scene.world, {}, self, lidar);
    const double diagonal = std::sqrt(2.0) * scene.world.cell_size();
    for (int k = 0; k < lidar.ray_count; ++k) {
      const double angle = self.heading + lidar.RayOffset(k);
      const Vec2 d{std::cos(angle), std::sin(angle)};
      double expected = lidar.max_range;
      for (const Rect& r : scene.rects) {
        expected = std::min(expected, oracle::RayRect(self.position, d, r));
      }
      const double error = std::abs(scan.ranges[k] - expected);
      worst_excess = std::max(worst_excess, error / diagonal);
      violations += error > diagonal;
      ++rays;
    }
  }
  const double seconds = clock.Seconds();
  Outcome out;
  out.pass = violations == 0 && seconds < 10.0;
  out.detail = Format("1000 scenes, %ld rays, %d beyond one cell diagonal, worst %.3f diagonals, "
                      "%.2f s (limit 10 s)",
                      rays, violations, worst_excess, seconds);
  return out;
}

Outcome FrontierCoverage() {
  const Stopwatch clock;
  bool pass = true;
  std::string detail;
  for (int level = 0; level <= 2; ++level) {
    harness::RunConfig config;
    config.policy = "frontier_greedy";
    config.episodes = 20;
    config.env.level_id = level;
    config.env.seed = 1000 + level;
    config.log_dir = ScratchDir(Format("frontier_%d", level));
    double sum = 0.0;
    double lowest = 1.0;
    for (const auto& r : harness::RunBaseline(config).summaries) {
      sum += r.coverage;
      lowest = std::min(lowest, r.coverage);
    }
    const double mean = sum / 20.0;
    pass = pass && mean >= 0.9;
    detail += Format("level %d mean %.4f (min %.4f); ", level, mean, lowest);
  }
  const double seconds = clock.Seconds();
  Outcome out;
  out.pass = pass && seconds < 120.0;
  out.detail = detail + Format("floor 0.90, %.1f s (limit 120 s)", seconds);
  return out;
}

struct CommTotals {
  std::uint64_t bytes_lidar = 0;
  std::uint64_t bytes_map = 0;
  long cells_collab = 0;
};

CommTotals RunComm(CommMode mode) {
  harness::RunConfig config;
  config.policy = "random_walk";
  config.episodes = 50;
  config.env.n_agents = 2;
  config.env.comm.mode = mode;
  config.env.seed = 4242;
  config.log_dir = ScratchDir(Format("comm_%d", static_cast<int>(mode)));
  CommTotals totals;
  for (const auto& r : harness::RunBaseline(config).summaries) {
    totals.bytes_lidar += r.bytes_lidar;
    totals.bytes_map += r.bytes_map;
    totals.cells_collab += r.cells_collab;
  }
  return totals;
}

Outcome CommAccounting() {
  const CommTotals one_hop = RunComm(CommMode::kOneHop);
  const CommTotals off = RunComm(CommMode::kOff);
  const double total = static_cast<double>(one_hop.bytes_lidar + one_hop.bytes_map);
  const double map_fraction = total > 0.0 ? one_hop.bytes_map / total : 0.0;
  Outcome out;
  out.pass = map_fraction >= 0.9 && one_hop.cells_collab > 0 && off.bytes_lidar == 0 &&
             off.bytes_map == 0 && off.cells_collab == 0;
  out.detail = Format(
      "one_hop: map %llu B, lidar %llu B, map fraction %.4f (floor 0.90), collab cells %ld; off: "
      "%llu B, collab cells %ld",
      static_cast<unsigned long long>(one_hop.bytes_map),
      static_cast<unsigned long long>(one_hop.bytes_lidar), map_fraction, one_hop.cells_collab,
      static_cast<unsigned long long>(off.bytes_lidar + off.bytes_map), off.cells_collab);
  return out;
}

Outcome TopologyCount() {
  CommConfig config;
  config.mode = CommMode::kOneHop;
  // Every placement of three agents on a 6 x 6 lattice of 1.5 m pitch.
  std::vector<Vec2> lattice;
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) lattice.push_back({1.5 * x, 1.5 * y});
  }
  std::set<std::uint64_t> masks;
  int mismatches = 0;
  for (const Vec2& a : lattice) {
    for (const Vec2& b : lattice) {
      for (const Vec2& c : lattice) {
        const std::vector<Vec2> p = {a, b, c};
        const CommGraph graph = BuildGraph(p, config);
        masks.insert(graph.TopologyMask());
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            const bool expected = i != j && Norm(p[i] - p[j]) <= config.range;
            mismatches += graph.HasEdge(i, j) != expected;
          }
        }
      }
    }
  }

  // Line A - B - C with A and C out of range of each other.
  auto relay = [](CommMode mode, int* via_b) {
    CommConfig line;
    line.mode = mode;
    MessageLayer layer(3, line, 0.1);
    const std::vector<Vec2> p = {{0.0, 0.0}, {3.0, 0.0}, {6.0, 0.0}};
    std::vector<LidarScan> scans(3);
    for (int i = 0; i < 3; ++i) {
      scans[i].origin = p[i];
      scans[i].ranges.assign(36, 2.0);
      scans[i].hit_flags.assign(36, true);
    }
    const std::vector<OccupancyGrid> maps(3, OccupancyGrid(200, 200, kDefaultCellSize));
    int a_to_c = 0;
    for (int t = 0; t < 20; ++t) {
      for (const CommEvent& e : layer.Tick(t, BuildGraph(p, line, t), scans, maps)) {
        if (e.origin == 0 && e.receiver == 2) {
          ++a_to_c;
          *via_b += e.sender == 1;
        }
      }
    }
    return a_to_c;
  };
  int multi_via_b = 0;
  int one_via_b = 0;
  const int multi = relay(CommMode::kMultiHop, &multi_via_b);
  const int one = relay(CommMode::kOneHop, &one_via_b);
  Outcome out;
  out.pass = masks.size() == 8 && mismatches == 0 && multi > 0 && multi_via_b == multi && one == 0;
  out.detail = Format(
      "%zu of 8 topologies over %zu placements, %d edge mismatches; line A-B-C: multi_hop "
      "delivered %d A->C events (%d via B), one_hop %d",
      masks.size(), lattice.size() * lattice.size() * lattice.size(), mismatches, multi,
      multi_via_b, one);
  return out;
}

// Reference gating: count passes (coverage >= pass_area) at the current
// level and advance after pass_x_times of them; the last level holds.
CurriculumState ReferenceGate(const CurriculumConfig& config, CurriculumState s, double coverage) {
  const int last = static_cast<int>(config.level_order.size()) - 1;
  if (coverage < config.pass_area || s.level_index == last) return s;
  if (++s.pass_counter == config.pass_x_times) {
    ++s.level_index;
    s.pass_counter = 0;
  }
  return s;
}

Outcome CurriculumGating() {
  const double eps = 1e-9;
  std::string detail;
  bool pass = true;
  for (const auto& [area, times] : {std::pair{0.8, 20}, std::pair{0.9, 1}, std::pair{0.6, 20}}) {
    CurriculumConfig config;
    config.pass_area = area;
    config.pass_x_times = times;
    // Scripted sequence: boundary misses, exact hits, interleaved failures.
    std::vector<double> sequence = {area - eps, 0.0};
    for (int level = 0; level < 3; ++level) {
      for (int k = 0; k < times; ++k) {
        if (k == times - 1) sequence.push_back(area - eps);
        sequence.push_back(k % 2 == 0 ? area : 1.0);
      }
    }
    sequence.push_back(area - eps);
    CurriculumState got;
    CurriculumState want;
    int rows = 0;
    int mismatches = 0;
    bool boundary_held = true;
    for (double coverage : sequence) {
      const CurriculumStep step = UpdateCurriculum(config, got, coverage);
      if (coverage == area - eps && !(step.state == got)) boundary_held = false;
      want = ReferenceGate(config, want, coverage);
      got = step.state;
      mismatches += !(got == want);
      ++rows;
    }
    const bool ok = mismatches == 0 && boundary_held && got.level_index == 3;
    pass = pass && ok;
    detail += Format("(%.1f, %d): %d rows, %d mismatches, final level %d%s; ", area, times, rows,
                     mismatches, got.level_index, boundary_held ? "" : ", boundary advanced");
  }
  Outcome out;
  out.pass = pass;
  out.detail = detail + "boundary coverage = pass_area - 1e-9 never counts";
  return out;
}

Outcome KillOnCollision() {
  EnvConfig config;
  config.level_id = 3;
  config.kill_on_collision = true;
  Environment env(config);
  long total_steps = 0;
  int killed = 0;
  for (int episode = 0; episode < 50; ++episode) {
    int steps = 0;
    bool terminated = false;
    RunEpisode(env, PolicyKind::kRandomWalk, harness::EpisodeSeed(3, episode),
               [&](const StepResult& step) {
                 ++steps;
                 terminated = step.terminated;
               });
    total_steps += steps;
    killed += terminated;
  }
  const double mean = total_steps / 50.0;
  Outcome out;
  out.pass = mean < config.episode_steps;
  out.detail = Format("level 3, 50 seeds: mean episode length %.1f (must be < %d), %d ended by a "
                      "collision",
                      mean, config.episode_steps, killed);
  return out;
}

}  // namespace
}  // namespace imagine::acceptance

int main(int argc, char** argv) {
  using namespace imagine::acceptance;
  const std::vector<Criterion> criteria = {
      {"determinism", Determinism},
      {"fusion_algebra", FusionAlgebra},
      {"reward_telescoping", Telescoping},
      {"a_max_arithmetic", AMaxArithmetic},
      {"raycast_oracle", RaycastOracle},
      {"frontier_coverage", FrontierCoverage},
      {"comm_accounting", CommAccounting},
      {"topology_count", TopologyCount},
      {"curriculum_gating", CurriculumGating},
      {"kill_on_collision", KillOnCollision},
  };
  const std::set<std::string> selected(argv + 1, argv + argc);
  for (const std::string& name : selected) {
    bool known = false;
    for (const Criterion& c : criteria) known = known || c.name == name;
    if (!known) {
      std::fprintf(stderr, "unknown criterion '%s'\n", name.c_str());
      return 2;
    }
  }
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.name)) continue;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::printf("%s %s: %s\n", outcome.pass ? "PASS" : "FAIL", c.name.c_str(),
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
