#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cfplan/dataset.hpp"
#include "cfplan/gan/models.hpp"
#include "cfplan/nn/adam.hpp"

namespace cfplan::gan {

struct TrainConfig {
  ArchConfig arch;
  int epochs = 200;
  int batch = 64;
  int steps_per_epoch = 0;  // 0: one step per training scenario per epoch
  float lambda_identity = 10.0f;
  float lambda_feature_match = 1.0f;
  nn::AdamConfig<float> adam;
  std::uint64_t seed = 1;
  std::string diagnostic_path;  // NaN-abort checkpoint destination, if set
};

struct EpochLog {
  int epoch = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;
  double collision_loss = 0.0;
  double identity_loss = 0.0;
  double fm_loss = 0.0;
  double wall_seconds = 0.0;
};

struct ScenarioData {
  const LabeledGrid* grid = nullptr;
  const ConditionMask* mask = nullptr;
};

struct TrainResult {
  std::vector<EpochLog> log;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Alternating single-writer training over pre-built labeled grids. Fully
// deterministic for a fixed seed. Throws ModelError on non-finite losses
// after writing the diagnostic checkpoint (when a path is configured).
TrainResult train_cgan(Generator<float>& gen, Discriminator<float>& disc,
                       const std::vector<ScenarioData>& data, const TrainConfig& cfg,
                       const EpochCallback& on_epoch = {});

void write_train_log_csv(const std::string& path, const std::vector<EpochLog>& log,
                         std::uint64_t seed, std::uint64_t config_hash);

std::vector<EpochLog> read_train_log_csv(const std::string& path);

}  // namespace cfplan::gan
