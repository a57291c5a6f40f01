#include "cfplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <stdexcept>

#include "cfplan/errors.hpp"
#include "cfplan/version.hpp"
#include "json.hpp"

namespace cfplan {
namespace {

double joint_distance_deg(const JointAngles& a, const JointAngles& b) {
  return std::hypot(a.theta1 - b.theta1, a.theta2 - b.theta2);
}

void require_latent(const std::array<double, 2>& z) {
  if (z[0] < 0.0 || z[0] > 1.0 || z[1] < 0.0 || z[1] > 1.0) {
    throw std::out_of_range("latent point outside [0,1]^2");
  }
}

}  // namespace

LatentPath straight_line_path(const std::array<double, 2>& z_start,
                              const std::array<double, 2>& z_goal, int steps) {
  require_latent(z_start);
  require_latent(z_goal);
  if (steps < 2) throw std::invalid_argument("straight_line_path needs steps >= 2");
  LatentPath path;
  path.points.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / (steps - 1);
    path.points.push_back({z_start[0] + t * (z_goal[0] - z_start[0]),
                           z_start[1] + t * (z_goal[1] - z_start[1])});
  }
  return path;
}

double LatentGridGraph::edge_weight(int a, int b) const {
  return joint_distance_deg(joints[a], joints[b]);
}

void LatentGridGraph::neighbors(int node, std::vector<int>& out) const {
  const int r = row_of(node), c = col_of(node);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const int nr = r + dr, nc = c + dc;
      if (nr < 0 || nr >= n || nc < 0 || nc >= n) continue;
      out.push_back(nr * n + nc);
    }
  }
}

int LatentGridGraph::edge_count() const {
  // n^2 lattice, 8-connectivity: horizontal + vertical + two diagonal families.
  return 2 * n * (n - 1) + 2 * (n - 1) * (n - 1);
}

LatentGridGraph build_graph(gan::Generator<float>& gen, const ConditionMask& mask, int n) {
  if (n < 2) throw std::invalid_argument("latent graph needs n >= 2");
  LatentGridGraph graph;
  graph.n = n;
  graph.latent.resize(static_cast<std::size_t>(n) * n);
  gan::Tensor<float> z({static_cast<std::size_t>(n) * n, 2});
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const int node = row * n + col;
      const double z1 = static_cast<double>(col) / (n - 1);
      const double z2 = static_cast<double>(row) / (n - 1);
      graph.latent[node] = {z1, z2};
      z.at(node, 0) = static_cast<float>(z1);
      z.at(node, 1) = static_cast<float>(z2);
    }
  }
  const gan::Tensor<float> out = gan::generate_batch(gen, z, mask);
  graph.joints.resize(graph.latent.size());
  for (std::size_t i = 0; i < graph.joints.size(); ++i) {
    graph.joints[i] = denormalize_joints(out.at(i, 0), out.at(i, 1));
  }
  return graph;
}

int snap_to_node(const LatentGridGraph& graph, const JointAngles& q) {
  require_in_range(q);
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < graph.node_count(); ++i) {
    const double d = joint_distance_deg(graph.joints[i], q);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

AstarResult astar(const LatentGridGraph& graph, int start_node, int goal_node) {
  const int count = graph.node_count();
  if (start_node < 0 || start_node >= count || goal_node < 0 || goal_node >= count) {
    throw std::invalid_argument("astar node index out of range");
  }
  const JointAngles goal_cfg = graph.joints[goal_node];
  std::vector<double> g(count, std::numeric_limits<double>::infinity());
  std::vector<int> parent(count, -1);
  // (f, node); ties resolved by the smaller node index.
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[start_node] = 0.0;
  open.emplace(joint_distance_deg(graph.joints[start_node], goal_cfg), start_node);
  std::vector<int> nbrs;
  nbrs.reserve(8);
  while (!open.empty()) {
    const auto [f, node] = open.top();
    open.pop();
    const double h = joint_distance_deg(graph.joints[node], goal_cfg);
    if (f > g[node] + h) continue;  // stale entry
    if (node == goal_node) break;
    nbrs.clear();
    graph.neighbors(node, nbrs);
    for (int nb : nbrs) {
      const double cand = g[node] + graph.edge_weight(node, nb);
      if (cand < g[nb]) {
        g[nb] = cand;
        parent[nb] = node;
        open.emplace(cand + joint_distance_deg(graph.joints[nb], goal_cfg), nb);
      }
    }
  }
  if (!std::isfinite(g[goal_node])) {
    throw PlanningError("no path between the requested latent nodes");
  }
  AstarResult result;
  result.cost_deg = g[goal_node];
  for (int node = goal_node; node != -1; node = parent[node]) result.nodes.push_back(node);
  std::reverse(result.nodes.begin(), result.nodes.end());
  return result;
}

std::vector<JointAngles> map_to_joint_trajectory(gan::Generator<float>& gen,
                                                 const ConditionMask& mask,
                                                 const LatentPath& path, int steps_per_segment) {
  if (path.points.empty()) throw std::invalid_argument("latent path is empty");
  if (steps_per_segment < 1) throw std::invalid_argument("steps_per_segment must be >= 1");
  std::vector<std::array<double, 2>> dense;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const auto& a = path.points[i];
    const auto& b = path.points[i + 1];
    for (int k = 0; k < steps_per_segment; ++k) {
      const double t = static_cast<double>(k) / steps_per_segment;
      dense.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
    }
  }
  dense.push_back(path.points.back());

  gan::Tensor<float> z({dense.size(), 2});
  for (std::size_t i = 0; i < dense.size(); ++i) {
    z.at(i, 0) = static_cast<float>(dense[i][0]);
    z.at(i, 1) = static_cast<float>(dense[i][1]);
  }
  const gan::Tensor<float> out = gan::generate_batch(gen, z, mask);
  std::vector<JointAngles> traj(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    traj[i] = denormalize_joints(out.at(i, 0), out.at(i, 1));
  }
  return traj;
}

ValidationReport validate_trajectory(const std::vector<JointAngles>& trajectory,
                                     const ObstacleSet& obstacles, double max_step_deg) {
  ValidationReport report;
  report.waypoint_collisions.assign(trajectory.size(), 0);
  const auto fail_at = [&](int waypoint, const JointAngles& q) {
    if (report.pass) {
      report.pass = false;
      report.first_violation_waypoint = waypoint;
      report.violating_config = q;
    }
  };
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    ++report.checked_configs;
    if (collides(trajectory[i], obstacles)) {
      report.waypoint_collisions[i] = 1;
      fail_at(static_cast<int>(i), trajectory[i]);
    }
  }
  for (std::size_t i = 0; i + 1 < trajectory.size(); ++i) {
    const JointAngles& a = trajectory[i];
    const JointAngles& b = trajectory[i + 1];
    const double span =
        std::max(std::abs(b.theta1 - a.theta1), std::abs(b.theta2 - a.theta2));
    const int pieces = std::max(1, static_cast<int>(std::ceil(span / max_step_deg)));
    for (int k = 1; k < pieces; ++k) {
      const double t = static_cast<double>(k) / pieces;
      const JointAngles q{a.theta1 + t * (b.theta1 - a.theta1),
                          a.theta2 + t * (b.theta2 - a.theta2)};
      ++report.checked_configs;
      if (collides(q, obstacles)) {
        fail_at(static_cast<int>(i), q);
      }
    }
  }
  return report;
}

double trajectory_length_deg(const std::vector<JointAngles>& trajectory) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < trajectory.size(); ++i) {
    len += joint_distance_deg(trajectory[i], trajectory[i + 1]);
  }
  return len;
}

PlanResult plan_path(gan::Generator<float>& gen, const ObstacleScenario& scenario,
                     const PlanRequest& request) {
  require_in_range(request.start);
  require_in_range(request.goal);
  PlanResult result;
  result.scenario_id = scenario.id;
  result.method = request.method;
  if (request.method == "line") {
    const auto s = normalize_joints(request.start);
    const auto g = normalize_joints(request.goal);
    result.latent = straight_line_path({s[0], s[1]}, {g[0], g[1]}, request.line_steps);
  } else if (request.method == "astar") {
    const LatentGridGraph graph = build_graph(gen, scenario.mask, request.graph_n);
    const int s = snap_to_node(graph, request.start);
    const int g = snap_to_node(graph, request.goal);
    const AstarResult ar = astar(graph, s, g);
    for (int node : ar.nodes) result.latent.points.push_back(graph.latent[node]);
  } else {
    throw std::invalid_argument("unknown plan method: " + request.method);
  }
  result.trajectory = map_to_joint_trajectory(gen, scenario.mask, result.latent,
                                              request.method == "line" ? request.steps_per_segment
                                                                       : 1);
  result.report = validate_trajectory(result.trajectory, scenario.obstacles);
  result.valid = result.report.pass;
  result.joint_path_length_deg = trajectory_length_deg(result.trajectory);
  return result;
}

void save_plan_json(const std::string& path, const PlanResult& plan, std::uint64_t seed,
                    std::uint64_t config_hash) {
  nlohmann::json root;
  root["version"] = kVersion;
  root["seed"] = seed;
  root["config_hash"] = config_hash;
  root["scenario_id"] = plan.scenario_id;
  root["method"] = plan.method;
  nlohmann::json latent = nlohmann::json::array();
  for (const auto& z : plan.latent.points) latent.push_back({z[0], z[1]});
  root["latent_waypoints"] = latent;
  nlohmann::json traj = nlohmann::json::array();
  for (const JointAngles& q : plan.trajectory) traj.push_back({q.theta1, q.theta2});
  root["joint_trajectory_deg"] = traj;
  root["valid"] = plan.valid;
  root["joint_path_length_deg"] = plan.joint_path_length_deg;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write plan file: " + path);
  f << root.dump(2) << '\n';
}

}  // namespace cfplan
