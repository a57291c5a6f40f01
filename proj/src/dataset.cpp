#include "cfplan/dataset.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "cfplan/errors.hpp"
#include "cfplan/rng.hpp"
#include "cfplan/version.hpp"

namespace cfplan {
namespace {

template <class T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_raw(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

std::array<double, 2> normalize_joints(const JointAngles& q) {
  require_in_range(q);
  return {(q.theta1 - kTheta1Min) / (kTheta1Max - kTheta1Min),
          (q.theta2 - kTheta2Min) / (kTheta2Max - kTheta2Min)};
}

JointAngles denormalize_joints(double u1, double u2) {
  if (u1 < 0.0 || u1 > 1.0 || u2 < 0.0 || u2 > 1.0) {
    throw std::out_of_range("normalized joints must lie in [0,1]^2");
  }
  return {kTheta1Min + u1 * (kTheta1Max - kTheta1Min),
          kTheta2Min + u2 * (kTheta2Max - kTheta2Min)};
}

int LabeledGrid::collision_count() const {
  int n = 0;
  for (const Point& p : points) n += p.label == kLabelCollision;
  return n;
}

std::vector<int> LabeledGrid::indices_with_label(std::uint8_t label) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (points[i].label == label) out.push_back(i);
  }
  return out;
}

LabeledGrid build_labeled_grid(const ObstacleScenario& scenario) {
  LabeledGrid grid;
  grid.scenario_id = scenario.id;
  grid.points.reserve(kGridPointCount);
  for (int i = 0; i < kTheta1Count; ++i) {
    for (int j = 0; j < kTheta2Count; ++j) {
      LabeledGrid::Point p;
      p.q = {theta1_at(i), theta2_at(j)};
      const auto n = normalize_joints(p.q);
      p.n1 = static_cast<float>(n[0]);
      p.n2 = static_cast<float>(n[1]);
      p.label = collides(p.q, scenario.obstacles) ? kLabelCollision : kLabelFree;
      grid.points.push_back(p);
    }
  }
  return grid;
}

void save_dataset(const std::string& path, const LabeledGrid& grid) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write dataset file: " + path);
  f.write(kDatasetMagic, 8);
  write_raw(f, grid.scenario_id);
  for (const LabeledGrid::Point& p : grid.points) {
    write_raw(f, p.n1);
    write_raw(f, p.n2);
    write_raw(f, p.label);
  }
  if (!f) throw DataError("short write on dataset file: " + path);
}

LabeledGrid load_dataset(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open dataset file: " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kDatasetMagic, 8) != 0) {
    throw DataError("bad dataset magic in " + path);
  }
  LabeledGrid grid;
  read_raw(f, grid.scenario_id);
  grid.points.resize(kGridPointCount);
  for (LabeledGrid::Point& p : grid.points) {
    read_raw(f, p.n1);
    read_raw(f, p.n2);
    read_raw(f, p.label);
    if (p.label != kLabelFree && p.label != kLabelCollision) {
      throw DataError("bad label in dataset file " + path);
    }
  }
  if (!f) throw DataError("truncated dataset file: " + path);
  // Reconstruct denormalized angles for convenience.
  for (LabeledGrid::Point& p : grid.points) {
    p.q = denormalize_joints(p.n1, p.n2);
  }
  return grid;
}

std::vector<FoldSplit> make_folds(std::vector<std::uint32_t> ids, int fold_count,
                                  std::uint64_t seed) {
  if (fold_count < 2) throw std::invalid_argument("fold count must be >= 2");
  if (ids.empty() || ids.size() % static_cast<std::size_t>(fold_count) != 0) {
    throw std::invalid_argument("id count " + std::to_string(ids.size()) +
                                " is not divisible into " + std::to_string(fold_count) +
                                " folds");
  }
  Rng rng(seed);
  rng.shuffle(ids);
  const std::size_t per_fold = ids.size() / fold_count;
  std::vector<FoldSplit> folds(fold_count);
  for (int k = 0; k < fold_count; ++k) {
    FoldSplit& fs = folds[k];
    fs.fold_index = k;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const bool in_test = i >= k * per_fold && i < (k + 1) * per_fold;
      (in_test ? fs.test_ids : fs.train_ids).push_back(ids[i]);
    }
  }
  return folds;
}

}  // namespace cfplan
