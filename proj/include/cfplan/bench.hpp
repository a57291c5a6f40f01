#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfplan/gan/io.hpp"
#include "cfplan/scenario.hpp"

namespace cfplan {

inline constexpr const char* kMethodBaseline = "baseline-collision-check";
inline constexpr const char* kMethodGenerator = "generator-inference";

struct BenchRecord {
  std::uint32_t scenario_id = 0;
  int obstacle_count = 0;
  double total_obstacle_area = 0.0;
  std::string method;
  double seconds = 0.0;  // median over repetitions, warm-up discarded
  double ratio = 0.0;    // vs the simplest condition of the same method
  double validity_rate = 0.0;
  int queries = 0;
};

struct BenchConfig {
  int joint_grid_n = 128;  // baseline joint-space lattice per axis
  int latent_n = 128;      // latent lattice per axis (128^2 = 16384 nodes)
  int queries = 3;
  int repetitions = 5;
  std::uint64_t seed = 99;
};

// Times joint-space A* where every touched lattice node costs a live
// collision check against the scenario's obstacles.
BenchRecord run_baseline(const ObstacleScenario& scenario, const BenchConfig& cfg);

// Times the full generator path: batched inference over the latent lattice,
// graph construction, and A* per query. No collision checks inside the timed
// region.
BenchRecord run_generator(gan::Generator<float>& gen, const ObstacleScenario& scenario,
                          const BenchConfig& cfg);

// Runs both methods over all scenarios and fills in per-method ratios against
// the simplest condition (fewest obstacles, then smallest area).
std::vector<BenchRecord> run_bench(gan::Generator<float>& gen,
                                   const std::vector<ObstacleScenario>& scenarios,
                                   const BenchConfig& cfg);

void assign_ratios(std::vector<BenchRecord>& records);

void write_bench_csv(const std::string& path, const std::vector<BenchRecord>& records,
                     std::uint64_t seed, std::uint64_t config_hash);

}  // namespace cfplan
