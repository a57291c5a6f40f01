#include "cfplan/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "cfplan/dataset.hpp"
#include "cfplan/errors.hpp"
#include "cfplan/version.hpp"
#include "json.hpp"

namespace cfplan {
namespace {

constexpr double kTiny = 1e-9;

nlohmann::json stats_to_json(const SplitStats& s) {
  return {{"mean", s.mean}, {"std", s.stddev}, {"min", s.min}, {"max", s.max},
          {"count", s.count}};
}

}  // namespace

int eval_grid_theta1_count(double dtheta_deg) {
  return static_cast<int>(std::floor((kTheta1Max - kTheta1Min) / dtheta_deg + kTiny)) + 1;
}

int eval_grid_theta2_count(double dtheta_deg) {
  return static_cast<int>(std::floor((kTheta2Max - kTheta2Min) / dtheta_deg + kTiny)) + 1;
}

ConditionEval evaluate_condition(gan::Generator<float>& gen, const ObstacleScenario& scenario,
                                 const EvalConfig& cfg) {
  if (cfg.dtheta_deg <= 0.0) throw std::invalid_argument("dtheta must be positive");
  const int n1 = eval_grid_theta1_count(cfg.dtheta_deg);
  const int n2 = eval_grid_theta2_count(cfg.dtheta_deg);
  const std::size_t cells = static_cast<std::size_t>(n1) * n2;

  std::vector<std::uint8_t> free_cell(cells);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const JointAngles q{kTheta1Min + i * cfg.dtheta_deg, kTheta2Min + j * cfg.dtheta_deg};
      free_cell[static_cast<std::size_t>(i) * n2 + j] = !collides(q, scenario.obstacles);
    }
  }

  // One latent sample per latent-grid cell, taken at the cell center.
  gan::Tensor<float> z({cells, 2});
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const std::size_t node = static_cast<std::size_t>(i) * n2 + j;
      z.at(node, 0) = static_cast<float>((i + 0.5) / n1);
      z.at(node, 1) = static_cast<float>((j + 0.5) / n2);
    }
  }
  const gan::Tensor<float> out = gan::generate_batch(gen, z, scenario.mask);

  std::vector<std::uint8_t> generated(cells, 0);
  for (std::size_t s = 0; s < cells; ++s) {
    const JointAngles q = denormalize_joints(out.at(s, 0), out.at(s, 1));
    const int ci = std::clamp(
        static_cast<int>(std::lround((q.theta1 - kTheta1Min) / cfg.dtheta_deg)), 0, n1 - 1);
    const int cj = std::clamp(
        static_cast<int>(std::lround((q.theta2 - kTheta2Min) / cfg.dtheta_deg)), 0, n2 - 1);
    generated[static_cast<std::size_t>(ci) * n2 + cj] = 1;
  }

  ConditionEval ev;
  ev.scenario_id = scenario.id;
  for (std::size_t c = 0; c < cells; ++c) {
    if (generated[c]) {
      (free_cell[c] ? ev.counts.tp : ev.counts.fp) += 1;
    } else if (free_cell[c]) {
      ev.counts.fn += 1;
    }
  }
  const std::int64_t denom_iou = ev.counts.tp + ev.counts.fp + ev.counts.fn;
  const std::int64_t denom_p = ev.counts.tp + ev.counts.fp;
  ev.iou = denom_iou > 0 ? static_cast<double>(ev.counts.tp) / denom_iou : 0.0;
  ev.precision = denom_p > 0 ? static_cast<double>(ev.counts.tp) / denom_p : 0.0;
  return ev;
}

SplitStats summarize_values(const std::vector<double>& values) {
  SplitStats s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  s.min = values[0];
  s.max = values[0];
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / values.size();
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / values.size());
  return s;
}

CrossValSummary summarize_evals(const std::vector<ConditionEval>& evals,
                                const std::set<std::uint32_t>& test_ids) {
  std::vector<double> train_iou, test_iou, train_p, test_p;
  for (const ConditionEval& e : evals) {
    const bool is_test = test_ids.count(e.scenario_id) > 0;
    (is_test ? test_iou : train_iou).push_back(e.iou);
    (is_test ? test_p : train_p).push_back(e.precision);
  }
  CrossValSummary out;
  out.train_iou = summarize_values(train_iou);
  out.test_iou = summarize_values(test_iou);
  out.train_precision = summarize_values(train_p);
  out.test_precision = summarize_values(test_p);
  return out;
}

Histogram iou_histogram(const std::vector<double>& ious, int bins) {
  if (ious.empty()) throw std::invalid_argument("iou_histogram needs a nonempty list");
  if (bins < 1) throw std::invalid_argument("iou_histogram needs bins >= 1");
  Histogram h;
  h.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) h.edges[b] = static_cast<double>(b) / bins;
  h.frequencies.assign(bins, 0.0);
  for (double v : ious) {
    int b = static_cast<int>(std::floor(v * bins));
    b = std::clamp(b, 0, bins - 1);  // v == 1.0 lands in the last bin
    h.frequencies[b] += 1.0;
  }
  for (double& f : h.frequencies) f /= static_cast<double>(ious.size());
  return h;
}

void write_eval_csv(const std::string& path, const std::vector<ConditionEval>& evals,
                    const std::set<std::uint32_t>& test_ids, std::uint64_t seed,
                    std::uint64_t config_hash) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write eval csv: " + path);
  char meta[128];
  std::snprintf(meta, sizeof meta, "# cfplan %s seed=%llu config=%016llx\n", kVersion,
                static_cast<unsigned long long>(seed),
                static_cast<unsigned long long>(config_hash));
  f << meta << "scenario_id,split,TP,FP,FN,IoU,Precision\n";
  for (const ConditionEval& e : evals) {
    char line[192];
    std::snprintf(line, sizeof line, "%u,%s,%lld,%lld,%lld,%.9g,%.9g\n", e.scenario_id,
                  test_ids.count(e.scenario_id) ? "test" : "train",
                  static_cast<long long>(e.counts.tp), static_cast<long long>(e.counts.fp),
                  static_cast<long long>(e.counts.fn), e.iou, e.precision);
    f << line;
  }
}

void write_summary_json(const std::string& path, const CrossValSummary& summary,
                        const EvalConfig& cfg, std::uint64_t seed, std::uint64_t config_hash) {
  nlohmann::json root;
  root["version"] = kVersion;
  root["seed"] = seed;
  root["config_hash"] = config_hash;
  root["dtheta_deg"] = cfg.dtheta_deg;
  root["iou"] = {{"train", stats_to_json(summary.train_iou)},
                 {"test", stats_to_json(summary.test_iou)}};
  root["precision"] = {{"train", stats_to_json(summary.train_precision)},
                       {"test", stats_to_json(summary.test_precision)}};
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write summary json: " + path);
  f << root.dump(2) << '\n';
}

}  // namespace cfplan
