#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cfplan/dataset.hpp"
#include "cfplan/gan/io.hpp"
#include "cfplan/geometry.hpp"
#include "cfplan/scenario.hpp"

namespace cfplan {

struct LatentPath {
  std::vector<std::array<double, 2>> points;  // each in [0,1]^2
};

// Uniform linear interpolation with `steps` waypoints, endpoints inclusive.
// Requires steps >= 2 and endpoints in [0,1]^2.
LatentPath straight_line_path(const std::array<double, 2>& z_start,
                              const std::array<double, 2>& z_goal, int steps);

// n x n latent lattice with generated joint configurations under one
// condition; edges connect 8-neighbors, weighted by joint distance in degrees.
struct LatentGridGraph {
  int n = 0;
  std::vector<std::array<double, 2>> latent;  // node -> z
  std::vector<JointAngles> joints;            // node -> generated config (degrees)

  int node_count() const { return n * n; }
  int row_of(int node) const { return node / n; }
  int col_of(int node) const { return node % n; }
  double edge_weight(int a, int b) const;
  // Appends the 8-neighborhood of `node` in ascending index order.
  void neighbors(int node, std::vector<int>& out) const;
  int edge_count() const;
};

LatentGridGraph build_graph(gan::Generator<float>& gen, const ConditionMask& mask, int n = 128);

// Nearest node by generated-joint proximity (Euclidean degrees, smallest
// index wins ties).
int snap_to_node(const LatentGridGraph& graph, const JointAngles& q);

struct AstarResult {
  std::vector<int> nodes;
  double cost_deg = 0.0;
};

// Minimal joint-distance path over the lattice; Euclidean joint distance to
// the goal's configuration as heuristic, ties broken by smaller node index.
// Throws PlanningError when no path exists.
AstarResult astar(const LatentGridGraph& graph, int start_node, int goal_node);

std::vector<JointAngles> map_to_joint_trajectory(gan::Generator<float>& gen,
                                                 const ConditionMask& mask,
                                                 const LatentPath& path,
                                                 int steps_per_segment = 1);

struct ValidationReport {
  bool pass = true;
  int first_violation_waypoint = -1;  // leading waypoint of the violating segment
  JointAngles violating_config;
  std::vector<std::uint8_t> waypoint_collisions;
  std::size_t checked_configs = 0;
};

// Collision-checks every waypoint plus interpolated configurations at most
// max_step_deg apart per joint. Consults geometry only, never the model.
ValidationReport validate_trajectory(const std::vector<JointAngles>& trajectory,
                                     const ObstacleSet& obstacles, double max_step_deg = 1.0);

struct PlanRequest {
  JointAngles start;
  JointAngles goal;
  std::string method = "line";  // "line" | "astar"
  int line_steps = 33;
  int graph_n = 128;
  int steps_per_segment = 4;
};

struct PlanResult {
  std::uint32_t scenario_id = 0;
  std::string method;
  LatentPath latent;
  std::vector<JointAngles> trajectory;
  bool valid = false;
  double joint_path_length_deg = 0.0;
  ValidationReport report;
};

PlanResult plan_path(gan::Generator<float>& gen, const ObstacleScenario& scenario,
                     const PlanRequest& request);

double trajectory_length_deg(const std::vector<JointAngles>& trajectory);

void save_plan_json(const std::string& path, const PlanResult& plan, std::uint64_t seed,
                    std::uint64_t config_hash);

}  // namespace cfplan
