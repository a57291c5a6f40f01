#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfplan/bench.hpp"
#include "cfplan/evaluation.hpp"
#include "cfplan/planner.hpp"
#include "cfplan/scenario.hpp"

namespace cfplan {

struct FigureMeta {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

void render_iou_histogram(const std::string& path, const Histogram& train,
                          const Histogram& test, const FigureMeta& meta);

// Three panels: latent-space path, joint-space path over the collision
// region, and the xy workspace with obstacles and sampled arm poses.
void render_plan_triptych(const std::string& path, const PlanResult& plan,
                          const ObstacleScenario& scenario, const FigureMeta& meta);

void render_bench_chart(const std::string& path, const std::vector<BenchRecord>& records,
                        const FigureMeta& meta);

}  // namespace cfplan
