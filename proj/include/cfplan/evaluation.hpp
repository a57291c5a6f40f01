#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "cfplan/gan/io.hpp"
#include "cfplan/scenario.hpp"

namespace cfplan {

struct EvalCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

struct EvalConfig {
  double dtheta_deg = 1.0;  // joint grid step; latent grid matches its dimensions
};

struct ConditionEval {
  std::uint32_t scenario_id = 0;
  EvalCounts counts;
  double iou = 0.0;
  double precision = 0.0;
};

// Joint-grid dimensions at a given resolution (181 x 146 at 1 degree).
int eval_grid_theta1_count(double dtheta_deg);
int eval_grid_theta2_count(double dtheta_deg);

// Grid protocol: sample one latent point per latent cell (cell centers),
// generate, bin each output into its containing joint cell; a free cell with
// samples is TP, a colliding cell with samples FP, a free cell without FN.
ConditionEval evaluate_condition(gan::Generator<float>& gen, const ObstacleScenario& scenario,
                                 const EvalConfig& cfg);

struct SplitStats {
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

SplitStats summarize_values(const std::vector<double>& values);

struct CrossValSummary {
  SplitStats train_iou, test_iou;
  SplitStats train_precision, test_precision;
};

CrossValSummary summarize_evals(const std::vector<ConditionEval>& evals,
                                const std::set<std::uint32_t>& test_ids);

struct Histogram {
  std::vector<double> edges;        // bins+1 edges over [0,1]
  std::vector<double> frequencies;  // relative frequencies, sum 1
};

Histogram iou_histogram(const std::vector<double>& ious, int bins);

void write_eval_csv(const std::string& path, const std::vector<ConditionEval>& evals,
                    const std::set<std::uint32_t>& test_ids, std::uint64_t seed,
                    std::uint64_t config_hash);

void write_summary_json(const std::string& path, const CrossValSummary& summary,
                        const EvalConfig& cfg, std::uint64_t seed, std::uint64_t config_hash);

}  // namespace cfplan
