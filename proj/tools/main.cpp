#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfplan/bench.hpp"
#include "cfplan/config.hpp"
#include "cfplan/errors.hpp"
#include "cfplan/evaluation.hpp"
#include "cfplan/figures.hpp"
#include "cfplan/pipeline.hpp"
#include "cfplan/planner.hpp"
#include "cfplan/version.hpp"

namespace fs = std::filesystem;
using namespace cfplan;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitModel = 4;
constexpr int kExitPlanning = 5;

int fail(const char* code, const std::string& message, int exit_code) {
  std::cerr << "error: " << code << ": " << message << "\n";
  return exit_code;
}

JointAngles parse_joint_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("expected 'theta1,theta2', got: " + text);
  }
  std::size_t p1 = 0, p2 = 0;
  const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
  const double t1 = std::stod(a, &p1);
  const double t2 = std::stod(b, &p2);
  if (p1 != a.size() || p2 != b.size()) {
    throw std::invalid_argument("malformed joint pair: " + text);
  }
  return {t1, t2};
}

KvConfig scenario_config_kv(const ScenarioConfig& cfg, int count, std::uint64_t seed) {
  KvConfig kv;
  kv["count"] = std::to_string(count);
  kv["seed"] = std::to_string(seed);
  kv["min_obstacles"] = std::to_string(cfg.min_obstacles);
  kv["max_obstacles"] = std::to_string(cfg.max_obstacles);
  kv["min_size"] = std::to_string(cfg.min_size);
  kv["max_rect_side"] = std::to_string(cfg.max_rect_side);
  kv["max_circle_radius"] = std::to_string(cfg.max_circle_radius);
  kv["forbidden_radius"] = std::to_string(cfg.forbidden_radius);
  kv["min_free_fraction"] = std::to_string(cfg.min_free_fraction);
  return kv;
}

KvConfig train_config_kv(const TrainRun& run) {
  KvConfig kv;
  kv["epochs"] = std::to_string(run.train.epochs);
  kv["batch"] = std::to_string(run.train.batch);
  kv["steps_per_epoch"] = std::to_string(run.train.steps_per_epoch);
  kv["lambda_identity"] = std::to_string(run.train.lambda_identity);
  kv["lambda_feature_match"] = std::to_string(run.train.lambda_feature_match);
  kv["lr"] = std::to_string(run.train.adam.lr);
  kv["beta1"] = std::to_string(run.train.adam.beta1);
  kv["beta2"] = std::to_string(run.train.adam.beta2);
  kv["seed"] = std::to_string(run.train.seed);
  kv["fold_index"] = std::to_string(run.fold_index);
  kv["fold_count"] = std::to_string(run.fold_count);
  kv["fold_seed"] = std::to_string(run.fold_seed);
  kv["cond_channels1"] = std::to_string(run.train.arch.cond_channels1);
  kv["cond_channels2"] = std::to_string(run.train.arch.cond_channels2);
  kv["cond_features"] = std::to_string(run.train.arch.cond_features);
  kv["trunk_width"] = std::to_string(run.train.arch.trunk_width);
  return kv;
}

void apply_train_file(TrainRun& run, const KvConfig& kv) {
  run.train.epochs = kv_get_int(kv, "epochs", run.train.epochs);
  run.train.batch = kv_get_int(kv, "batch", run.train.batch);
  run.train.steps_per_epoch = kv_get_int(kv, "steps_per_epoch", run.train.steps_per_epoch);
  run.train.lambda_identity = static_cast<float>(
      kv_get_double(kv, "lambda_identity", run.train.lambda_identity));
  run.train.lambda_feature_match = static_cast<float>(
      kv_get_double(kv, "lambda_feature_match", run.train.lambda_feature_match));
  run.train.adam.lr = static_cast<float>(kv_get_double(kv, "lr", run.train.adam.lr));
  run.train.adam.beta1 = static_cast<float>(kv_get_double(kv, "beta1", run.train.adam.beta1));
  run.train.adam.beta2 = static_cast<float>(kv_get_double(kv, "beta2", run.train.adam.beta2));
  run.train.seed = kv_get_u64(kv, "seed", run.train.seed);
  run.fold_index = kv_get_int(kv, "fold_index", run.fold_index);
  run.fold_count = kv_get_int(kv, "fold_count", run.fold_count);
  run.fold_seed = kv_get_u64(kv, "fold_seed", run.fold_seed);
  run.train.arch.cond_channels1 =
      kv_get_int(kv, "cond_channels1", run.train.arch.cond_channels1);
  run.train.arch.cond_channels2 =
      kv_get_int(kv, "cond_channels2", run.train.arch.cond_channels2);
  run.train.arch.cond_features = kv_get_int(kv, "cond_features", run.train.arch.cond_features);
  run.train.arch.trunk_width = kv_get_int(kv, "trunk_width", run.train.arch.trunk_width);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Collision-free 2-link arm path planning in a cGAN latent space"};
  app.set_version_flag("--version", std::string("cfplan ") + kVersion);
  app.require_subcommand(1);

  // --- gen-scenarios
  auto* gen_cmd = app.add_subcommand("gen-scenarios", "Generate random obstacle scenarios");
  int gs_count = 100;
  std::uint64_t gs_seed = 1;
  std::string gs_out;
  ScenarioConfig gs_cfg;
  gen_cmd->add_option("--count", gs_count, "Number of obstacle scenarios (plus empty id 0)");
  gen_cmd->add_option("--seed", gs_seed, "Master seed");
  gen_cmd->add_option("--out", gs_out, "Output scenario JSON")->required();
  gen_cmd->add_option("--min-obstacles", gs_cfg.min_obstacles);
  gen_cmd->add_option("--max-obstacles", gs_cfg.max_obstacles);
  gen_cmd->add_option("--forbidden-radius", gs_cfg.forbidden_radius);
  gen_cmd->add_option("--min-size", gs_cfg.min_size);
  gen_cmd->add_option("--max-rect-side", gs_cfg.max_rect_side);
  gen_cmd->add_option("--max-circle-radius", gs_cfg.max_circle_radius);

  // --- gen-dataset
  auto* ds_cmd = app.add_subcommand("gen-dataset", "Label the joint grid for each scenario");
  std::string ds_scenarios, ds_out;
  ds_cmd->add_option("--scenarios", ds_scenarios, "Scenario JSON")->required();
  ds_cmd->add_option("--out", ds_out, "Output dataset directory")->required();

  // --- train
  auto* tr_cmd = app.add_subcommand("train", "Train the cGAN on one fold");
  std::string tr_data, tr_config, tr_out, tr_log;
  TrainRun tr_run;
  tr_cmd->add_option("--data", tr_data, "Dataset directory")->required();
  auto* tr_fold_opt = tr_cmd->add_option("--fold", tr_run.fold_index, "Fold index");
  auto* tr_folds_opt = tr_cmd->add_option("--folds", tr_run.fold_count, "Fold count");
  tr_cmd->add_option("--config", tr_config, "Flat key=value config file");
  tr_cmd->add_option("--out", tr_out, "Output checkpoint")->required();
  tr_cmd->add_option("--log", tr_log, "Training log CSV (default <out>.log.csv)");
  auto* tr_epochs_opt = tr_cmd->add_option("--epochs", tr_run.train.epochs, "Epochs");
  auto* tr_batch_opt = tr_cmd->add_option("--batch", tr_run.train.batch, "Batch size");
  auto* tr_seed_opt = tr_cmd->add_option("--seed", tr_run.train.seed, "Training seed");
  auto* tr_fseed_opt = tr_cmd->add_option("--fold-seed", tr_run.fold_seed, "Fold shuffle seed");

  // --- eval
  auto* ev_cmd = app.add_subcommand("eval", "Grid IoU/precision evaluation");
  std::string ev_ckpt, ev_data, ev_out;
  double ev_dtheta = 1.0;
  int ev_bins = 10;
  ev_cmd->add_option("--ckpt", ev_ckpt, "Checkpoint")->required();
  ev_cmd->add_option("--data", ev_data, "Dataset directory")->required();
  ev_cmd->add_option("--dtheta", ev_dtheta, "Joint grid step in degrees");
  ev_cmd->add_option("--bins", ev_bins, "Histogram bins");
  ev_cmd->add_option("--out", ev_out, "Output directory")->required();

  // --- plan
  auto* pl_cmd = app.add_subcommand("plan", "Plan a path in the latent space");
  std::string pl_ckpt, pl_scenarios, pl_start, pl_goal, pl_out;
  std::string pl_method = "line";
  std::uint32_t pl_scenario_id = 0;
  PlanRequest pl_req;
  pl_cmd->add_option("--ckpt", pl_ckpt, "Checkpoint")->required();
  pl_cmd->add_option("--scenarios", pl_scenarios, "Scenario JSON")->required();
  pl_cmd->add_option("--scenario", pl_scenario_id, "Scenario id")->required();
  pl_cmd->add_option("--start", pl_start, "Start joints 'theta1,theta2' (deg)")->required();
  pl_cmd->add_option("--goal", pl_goal, "Goal joints 'theta1,theta2' (deg)")->required();
  pl_cmd->add_option("--method", pl_method, "line|astar");
  pl_cmd->add_option("--graph-n", pl_req.graph_n, "Latent lattice size for astar");
  pl_cmd->add_option("--line-steps", pl_req.line_steps, "Waypoints for line method");
  pl_cmd->add_option("--out", pl_out, "Output plan JSON (SVG lands next to it)")->required();

  // --- bench
  auto* be_cmd = app.add_subcommand("bench", "Scalability benchmark");
  std::string be_ckpt, be_scenarios, be_out;
  BenchConfig be_cfg;
  be_cmd->add_option("--ckpt", be_ckpt, "Checkpoint")->required();
  be_cmd->add_option("--scenarios", be_scenarios, "Scenario JSON")->required();
  be_cmd->add_option("--queries", be_cfg.queries, "Queries per scenario");
  be_cmd->add_option("--repetitions", be_cfg.repetitions, "Timed repetitions");
  be_cmd->add_option("--latent-n", be_cfg.latent_n, "Latent lattice size");
  be_cmd->add_option("--joint-n", be_cfg.joint_grid_n, "Baseline joint lattice size");
  be_cmd->add_option("--seed", be_cfg.seed, "Query sampling seed");
  be_cmd->add_option("--out", be_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitUsage);
  }

  if (gen_cmd->parsed()) {
    if (gs_count < 0 || gs_cfg.min_obstacles < 1 || gs_cfg.max_obstacles < gs_cfg.min_obstacles) {
      return fail("usage", "invalid scenario generation parameters", kExitUsage);
    }
    const auto scenarios = sample_scenario_set(gs_count, gs_seed, gs_cfg);
    save_scenarios(gs_out, scenarios, gs_seed,
                   hash_config(scenario_config_kv(gs_cfg, gs_count, gs_seed)));
    std::cout << "wrote " << scenarios.size() << " scenarios to " << gs_out << "\n";
    return 0;
  }

  if (ds_cmd->parsed()) {
    const ScenarioFile file = load_scenarios(ds_scenarios);
    write_dataset_dir(ds_out, file);
    std::cout << "wrote " << file.scenarios.size() << " labeled grids to " << ds_out << "\n";
    return 0;
  }

  if (tr_cmd->parsed()) {
    TrainRun run;
    if (!tr_config.empty()) apply_train_file(run, load_kv_file(tr_config));
    if (tr_fold_opt->count()) run.fold_index = tr_run.fold_index;
    if (tr_folds_opt->count()) run.fold_count = tr_run.fold_count;
    if (tr_epochs_opt->count()) run.train.epochs = tr_run.train.epochs;
    if (tr_batch_opt->count()) run.train.batch = tr_run.train.batch;
    if (tr_seed_opt->count()) run.train.seed = tr_run.train.seed;
    if (tr_fseed_opt->count()) run.fold_seed = tr_run.fold_seed;
    const DatasetDir data = load_dataset_dir(tr_data);
    const auto res =
        run_training(data, run, tr_out, tr_log, hash_config(train_config_kv(run)));
    std::cout << "trained fold " << run.fold_index << " on " << res.train_ids.size()
              << " scenarios (+empty), checkpoint " << tr_out << "\n";
    return 0;
  }

  if (ev_cmd->parsed()) {
    fs::create_directories(ev_out);
    auto loaded = gan::load_generator(ev_ckpt);
    const DatasetDir data = load_dataset_dir(ev_data);
    const FoldSplit split = fold_from_meta(data, loaded.meta);
    const std::set<std::uint32_t> test_ids(split.test_ids.begin(), split.test_ids.end());
    EvalConfig cfg{ev_dtheta};
    std::vector<ConditionEval> evals;
    std::vector<double> train_ious, test_ious;
    for (const ObstacleScenario& s : data.scenarios.scenarios) {
      const ConditionEval e = evaluate_condition(*loaded.gen, s, cfg);
      evals.push_back(e);
      if (s.id != 0) (test_ids.count(s.id) ? test_ious : train_ious).push_back(e.iou);
    }
    const CrossValSummary summary = summarize_evals(evals, test_ids);
    const FigureMeta fig{loaded.meta.seed, loaded.meta.config_hash};
    write_eval_csv((fs::path(ev_out) / "metrics.csv").string(), evals, test_ids,
                   loaded.meta.seed, loaded.meta.config_hash);
    write_summary_json((fs::path(ev_out) / "summary.json").string(), summary, cfg,
                       loaded.meta.seed, loaded.meta.config_hash);
    if (!train_ious.empty() && !test_ious.empty()) {
      render_iou_histogram((fs::path(ev_out) / "iou_histogram.svg").string(),
                           iou_histogram(train_ious, ev_bins), iou_histogram(test_ious, ev_bins),
                           fig);
    }
    std::cout << "eval: train IoU mean " << summary.train_iou.mean << ", test IoU mean "
              << summary.test_iou.mean << ", train precision mean "
              << summary.train_precision.mean << ", test precision mean "
              << summary.test_precision.mean << "\n";
    return 0;
  }

  if (pl_cmd->parsed()) {
    auto loaded = gan::load_generator(pl_ckpt);
    const ScenarioFile file = load_scenarios(pl_scenarios);
    const ObstacleScenario& scenario = find_scenario(file, pl_scenario_id);
    pl_req.start = parse_joint_pair(pl_start);
    pl_req.goal = parse_joint_pair(pl_goal);
    pl_req.method = pl_method;
    const PlanResult plan = plan_path(*loaded.gen, scenario, pl_req);
    save_plan_json(pl_out, plan, loaded.meta.seed, loaded.meta.config_hash);
    const fs::path svg_path = fs::path(pl_out).replace_extension(".svg");
    render_plan_triptych(svg_path.string(), plan, scenario,
                         {loaded.meta.seed, loaded.meta.config_hash});
    std::cout << "plan " << (plan.valid ? "valid" : "INVALID") << ", joint length "
              << plan.joint_path_length_deg << " deg, wrote " << pl_out << "\n";
    return 0;
  }

  if (be_cmd->parsed()) {
    fs::create_directories(be_out);
    auto loaded = gan::load_generator(be_ckpt);
    const ScenarioFile file = load_scenarios(be_scenarios);
    const auto records = run_bench(*loaded.gen, file.scenarios, be_cfg);
    write_bench_csv((fs::path(be_out) / "bench.csv").string(), records, be_cfg.seed,
                    loaded.meta.config_hash);
    render_bench_chart((fs::path(be_out) / "bench.svg").string(), records,
                       {be_cfg.seed, loaded.meta.config_hash});
    std::cout << "bench wrote " << records.size() << " records to " << be_out << "\n";
    return 0;
  }

  return fail("usage", "no subcommand given", kExitUsage);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const PlanningError& e) {
    return fail("planning", e.what(), kExitPlanning);
  } catch (const ModelError& e) {
    return fail("model", e.what(), kExitModel);
  } catch (const DataError& e) {
    return fail("data", e.what(), kExitData);
  } catch (const std::invalid_argument& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const std::out_of_range& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
}
