#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cfplan/scenario.hpp"

namespace cfplan {

// Training grid: theta1 from -90 to 90 and theta2 from 5 to 150, both at 5
// degree steps -> 37 x 30 = 1110 points. Records are theta1-major.
inline constexpr int kTheta1Count = 37;
inline constexpr int kTheta2Count = 30;
inline constexpr int kGridPointCount = kTheta1Count * kTheta2Count;
inline constexpr double kGridStepDeg = 5.0;

inline double theta1_at(int i) { return kTheta1Min + kGridStepDeg * i; }
inline double theta2_at(int j) { return kTheta2Min + kGridStepDeg * j; }

// Min-max normalization of joint angles onto [0,1]^2.
std::array<double, 2> normalize_joints(const JointAngles& q);
JointAngles denormalize_joints(double u1, double u2);

inline constexpr std::uint8_t kLabelFree = 0;
inline constexpr std::uint8_t kLabelCollision = 1;

struct LabeledGrid {
  struct Point {
    JointAngles q;
    float n1 = 0.f;  // normalized theta1
    float n2 = 0.f;  // normalized theta2
    std::uint8_t label = kLabelFree;
  };

  std::uint32_t scenario_id = 0;
  std::vector<Point> points;  // kGridPointCount entries

  int collision_count() const;
  int free_count() const { return kGridPointCount - collision_count(); }
  std::vector<int> indices_with_label(std::uint8_t label) const;
};

LabeledGrid build_labeled_grid(const ObstacleScenario& scenario);

void save_dataset(const std::string& path, const LabeledGrid& grid);
LabeledGrid load_dataset(const std::string& path);

struct FoldSplit {
  int fold_index = 0;
  std::vector<std::uint32_t> train_ids;
  std::vector<std::uint32_t> test_ids;
};

// Deterministic shuffled partition of `ids` into `fold_count` folds; each id
// lands in exactly one test fold. Throws std::invalid_argument when the id
// count does not divide evenly.
std::vector<FoldSplit> make_folds(std::vector<std::uint32_t> ids, int fold_count,
                                  std::uint64_t seed);

}  // namespace cfplan
