#include "cfplan/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cfplan/errors.hpp"
#include "cfplan/version.hpp"
#include "json.hpp"

namespace cfplan {

namespace fs = std::filesystem;

std::string dataset_file_name(std::uint32_t id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "dataset_%05u.cfpd", id);
  return buf;
}

void write_dataset_dir(const std::string& dir, const ScenarioFile& scenarios) {
  fs::create_directories(dir);
  save_scenarios((fs::path(dir) / "scenarios.json").string(), scenarios.scenarios,
                 scenarios.seed, scenarios.config_hash);
  for (const ObstacleScenario& s : scenarios.scenarios) {
    save_dataset((fs::path(dir) / dataset_file_name(s.id)).string(), build_labeled_grid(s));
  }
  nlohmann::json manifest;
  manifest["version"] = kVersion;
  manifest["seed"] = scenarios.seed;
  manifest["config_hash"] = scenarios.config_hash;
  manifest["scenario_count"] = scenarios.scenarios.size();
  std::ofstream f(fs::path(dir) / "manifest.json", std::ios::binary);
  if (!f) throw DataError("cannot write dataset manifest in " + dir);
  f << manifest.dump(2) << '\n';
}

DatasetDir load_dataset_dir(const std::string& dir) {
  DatasetDir out;
  const fs::path scen_path = fs::path(dir) / "scenarios.json";
  if (!fs::exists(scen_path)) {
    throw DataError("dataset dir missing scenarios.json: " + dir);
  }
  out.scenarios = load_scenarios(scen_path.string());
  out.grids.reserve(out.scenarios.scenarios.size());
  for (const ObstacleScenario& s : out.scenarios.scenarios) {
    LabeledGrid grid = load_dataset((fs::path(dir) / dataset_file_name(s.id)).string());
    if (grid.scenario_id != s.id) {
      throw DataError("dataset file id mismatch for scenario " + std::to_string(s.id));
    }
    out.grids.push_back(std::move(grid));
  }
  return out;
}

TrainRunResult run_training(const DatasetDir& data, const TrainRun& cfg,
                            const std::string& ckpt_path, const std::string& log_path,
                            std::uint64_t config_hash) {
  std::vector<std::uint32_t> obstacle_ids;
  int empty_index = -1;
  for (std::size_t i = 0; i < data.scenarios.scenarios.size(); ++i) {
    const std::uint32_t id = data.scenarios.scenarios[i].id;
    if (id == 0) {
      empty_index = static_cast<int>(i);
    } else {
      obstacle_ids.push_back(id);
    }
  }
  std::sort(obstacle_ids.begin(), obstacle_ids.end());

  TrainRunResult out;
  if (!obstacle_ids.empty()) {
    const auto folds = make_folds(obstacle_ids, cfg.fold_count, cfg.fold_seed);
    if (cfg.fold_index < 0 || cfg.fold_index >= cfg.fold_count) {
      throw std::invalid_argument("fold index out of range");
    }
    out.train_ids = folds[cfg.fold_index].train_ids;
    out.test_ids = folds[cfg.fold_index].test_ids;
  }

  std::vector<gan::ScenarioData> train_data;
  const auto add_scenario = [&](std::uint32_t id) {
    for (std::size_t i = 0; i < data.scenarios.scenarios.size(); ++i) {
      if (data.scenarios.scenarios[i].id == id) {
        train_data.push_back({&data.grids[i], &data.scenarios.scenarios[i].mask});
        return;
      }
    }
    throw DataError("training id not found in dataset dir: " + std::to_string(id));
  };
  if (cfg.include_empty_scenario && empty_index >= 0) {
    train_data.push_back(
        {&data.grids[empty_index], &data.scenarios.scenarios[empty_index].mask});
  }
  for (std::uint32_t id : out.train_ids) add_scenario(id);

  gan::Generator<float> gen(cfg.train.arch);
  gan::Discriminator<float> disc(cfg.train.arch);
  gan::TrainConfig tc = cfg.train;
  if (tc.diagnostic_path.empty()) tc.diagnostic_path = ckpt_path + ".nan";
  out.result = gan::train_cgan(gen, disc, train_data, tc);

  gan::CheckpointMeta meta;
  meta.seed = cfg.train.seed;
  meta.config_hash = config_hash;
  meta.fold_seed = cfg.fold_seed;
  meta.fold_index = cfg.fold_index;
  meta.fold_count = cfg.fold_count;
  meta.scenario_count = static_cast<std::uint32_t>(obstacle_ids.size());
  meta.arch = cfg.train.arch;
  save_models(ckpt_path, gen, disc, meta);
  gan::write_train_log_csv(log_path.empty() ? ckpt_path + ".log.csv" : log_path, out.result.log,
                           cfg.train.seed, config_hash);
  return out;
}

FoldSplit fold_from_meta(const DatasetDir& data, const gan::CheckpointMeta& meta) {
  std::vector<std::uint32_t> obstacle_ids;
  for (const ObstacleScenario& s : data.scenarios.scenarios) {
    if (s.id != 0) obstacle_ids.push_back(s.id);
  }
  std::sort(obstacle_ids.begin(), obstacle_ids.end());
  if (meta.fold_count <= 0 || meta.fold_index < 0) {
    throw ModelError("checkpoint has no fold metadata");
  }
  if (obstacle_ids.size() != meta.scenario_count) {
    throw DataError("dataset dir scenario count does not match checkpoint metadata");
  }
  auto folds = make_folds(obstacle_ids, meta.fold_count, meta.fold_seed);
  return folds[meta.fold_index];
}

}  // namespace cfplan
