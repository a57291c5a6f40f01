#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cfplan/geometry.hpp"

namespace cfplan {

// Binary occupancy mask over the obstacle workspace: 32 rows covering
// y in [-2, 2] (row 0 at the bottom), 24 columns covering x in [-1, 2],
// square 0.125 cells. Serialized row 0 first; that ordering is normative.
struct ConditionMask {
  static constexpr int kRows = 32;
  static constexpr int kCols = 24;
  static constexpr double kCellSize = 0.125;

  std::array<std::uint8_t, kRows * kCols> cells{};

  std::uint8_t at(int row, int col) const { return cells[row * kCols + col]; }
  void set(int row, int col, std::uint8_t v) { cells[row * kCols + col] = v; }

  static Vec2 cell_center(int row, int col) {
    return {kWorkspaceXMin + (col + 0.5) * kCellSize,
            kWorkspaceYMin + (row + 0.5) * kCellSize};
  }

  int occupied_count() const;
  std::vector<std::string> to_rows() const;
  static ConditionMask from_rows(const std::vector<std::string>& rows);

  bool operator==(const ConditionMask&) const = default;
};

ConditionMask rasterize(const ObstacleSet& obstacles);

struct ScenarioConfig {
  int min_obstacles = 1;
  int max_obstacles = 4;
  double min_size = 0.15;         // minimum rectangle side / circle diameter
  double max_rect_side = 1.0;
  double max_circle_radius = 0.5;
  double forbidden_radius = 0.5;  // no-placement disk around the arm base
  double min_free_fraction = 0.05;  // of the 37x30 joint grid points
  int max_attempts = 10000;
};

struct ObstacleScenario {
  std::uint32_t id = 0;
  ObstacleSet obstacles;
  ConditionMask mask;
};

// Deterministic for a fixed (seed, config). Throws DataError after
// cfg.max_attempts rejections.
ObstacleScenario sample_scenario(std::uint64_t seed, const ScenarioConfig& cfg,
                                 std::uint32_t id = 0);

// Scenario id 0 is the distinguished empty (obstacle-free) scenario; ids
// 1..count carry random obstacles from per-id streams derived from `seed`.
std::vector<ObstacleScenario> sample_scenario_set(int count, std::uint64_t seed,
                                                  const ScenarioConfig& cfg);

void save_scenarios(const std::string& path, const std::vector<ObstacleScenario>& scenarios,
                    std::uint64_t seed, std::uint64_t config_hash);

struct ScenarioFile {
  std::string version;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<ObstacleScenario> scenarios;
};

ScenarioFile load_scenarios(const std::string& path);

const ObstacleScenario& find_scenario(const ScenarioFile& file, std::uint32_t id);

}  // namespace cfplan
