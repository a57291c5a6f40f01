#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfplan/dataset.hpp"
#include "cfplan/gan/io.hpp"
#include "cfplan/gan/train.hpp"
#include "cfplan/scenario.hpp"

namespace cfplan {

// On-disk dataset layout: scenarios.json (the generating scenario set),
// dataset_<id>.cfpd per scenario, and manifest.json with provenance.
struct DatasetDir {
  ScenarioFile scenarios;
  std::vector<LabeledGrid> grids;  // aligned with scenarios.scenarios
};

std::string dataset_file_name(std::uint32_t id);

void write_dataset_dir(const std::string& dir, const ScenarioFile& scenarios);
DatasetDir load_dataset_dir(const std::string& dir);

struct TrainRun {
  gan::TrainConfig train;
  int fold_index = 0;
  int fold_count = 5;
  std::uint64_t fold_seed = 7;
  bool include_empty_scenario = true;  // scenario id 0 always joins the train set
};

struct TrainRunResult {
  gan::TrainResult result;
  std::vector<std::uint32_t> train_ids;
  std::vector<std::uint32_t> test_ids;
};

// Trains one fold and writes the checkpoint plus the training-log CSV
// ("<ckpt>.log.csv" unless log_path is given).
TrainRunResult run_training(const DatasetDir& data, const TrainRun& cfg,
                            const std::string& ckpt_path, const std::string& log_path,
                            std::uint64_t config_hash);

// Re-derives the fold split recorded in a checkpoint's metadata.
FoldSplit fold_from_meta(const DatasetDir& data, const gan::CheckpointMeta& meta);

}  // namespace cfplan
