#include "cfplan/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>

#include "cfplan/errors.hpp"
#include "cfplan/planner.hpp"
#include "cfplan/rng.hpp"
#include "cfplan/version.hpp"

namespace cfplan {
namespace {

using Clock = std::chrono::steady_clock;

struct JointLattice {
  int n = 0;

  JointAngles config(int node) const {
    const int i = node / n, j = node % n;
    return {kTheta1Min + (kTheta1Max - kTheta1Min) * i / (n - 1),
            kTheta2Min + (kTheta2Max - kTheta2Min) * j / (n - 1)};
  }

  int node_count() const { return n * n; }
};

double config_distance(const JointAngles& a, const JointAngles& b) {
  return std::hypot(a.theta1 - b.theta1, a.theta2 - b.theta2);
}

// A* over the joint lattice; passability is resolved lazily with a live
// collision check per touched node, memoized for the duration of one query.
struct BaselineQueryResult {
  bool found = false;
  std::vector<int> nodes;
};

BaselineQueryResult baseline_astar(const JointLattice& lattice, const ObstacleSet& obstacles,
                                   int start, int goal, std::vector<std::int8_t>& occupancy) {
  std::fill(occupancy.begin(), occupancy.end(), std::int8_t{-1});
  const auto blocked = [&](int node) {
    if (occupancy[node] < 0) {
      occupancy[node] = collides(lattice.config(node), obstacles) ? 1 : 0;
    }
    return occupancy[node] == 1;
  };
  BaselineQueryResult result;
  if (blocked(start) || blocked(goal)) return result;
  const JointAngles goal_cfg = lattice.config(goal);
  const int count = lattice.node_count();
  std::vector<double> g(count, std::numeric_limits<double>::infinity());
  std::vector<int> parent(count, -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[start] = 0.0;
  open.emplace(config_distance(lattice.config(start), goal_cfg), start);
  while (!open.empty()) {
    const auto [f, node] = open.top();
    open.pop();
    const JointAngles cfg = lattice.config(node);
    if (f > g[node] + config_distance(cfg, goal_cfg)) continue;
    if (node == goal) break;
    const int r = node / lattice.n, c = node % lattice.n;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const int nr = r + dr, nc = c + dc;
        if (nr < 0 || nr >= lattice.n || nc < 0 || nc >= lattice.n) continue;
        const int nb = nr * lattice.n + nc;
        if (blocked(nb)) continue;
        const JointAngles nb_cfg = lattice.config(nb);
        const double cand = g[node] + config_distance(cfg, nb_cfg);
        if (cand < g[nb]) {
          g[nb] = cand;
          parent[nb] = node;
          open.emplace(cand + config_distance(nb_cfg, goal_cfg), nb);
        }
      }
    }
  }
  if (!std::isfinite(g[goal])) return result;
  result.found = true;
  for (int node = goal; node != -1; node = parent[node]) result.nodes.push_back(node);
  std::reverse(result.nodes.begin(), result.nodes.end());
  return result;
}

struct Query {
  JointAngles start;
  JointAngles goal;
};

std::vector<Query> sample_queries(const ObstacleScenario& scenario, const JointLattice& lattice,
                                  const BenchConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, scenario.id));
  std::vector<int> free_nodes;
  for (int node = 0; node < lattice.node_count(); ++node) {
    if (!collides(lattice.config(node), scenario.obstacles)) free_nodes.push_back(node);
  }
  if (free_nodes.size() < 2) {
    throw DataError("bench scenario leaves fewer than two free lattice nodes");
  }
  std::vector<Query> queries;
  for (int q = 0; q < cfg.queries; ++q) {
    const int a = free_nodes[rng.index(free_nodes.size())];
    int b = a;
    while (b == a) b = free_nodes[rng.index(free_nodes.size())];
    queries.push_back({lattice.config(a), lattice.config(b)});
  }
  return queries;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

int snap_lattice_node(const JointLattice& lattice, const JointAngles& q) {
  // The lattice is uniform, so rounding the indices is exact.
  const int i = static_cast<int>(
      std::lround((q.theta1 - kTheta1Min) / (kTheta1Max - kTheta1Min) * (lattice.n - 1)));
  const int j = static_cast<int>(
      std::lround((q.theta2 - kTheta2Min) / (kTheta2Max - kTheta2Min) * (lattice.n - 1)));
  return std::clamp(i, 0, lattice.n - 1) * lattice.n + std::clamp(j, 0, lattice.n - 1);
}

BenchRecord make_record(const ObstacleScenario& scenario, const char* method,
                        const BenchConfig& cfg) {
  BenchRecord rec;
  rec.scenario_id = scenario.id;
  rec.obstacle_count = static_cast<int>(scenario.obstacles.size());
  for (const Obstacle& ob : scenario.obstacles) rec.total_obstacle_area += obstacle_area(ob);
  rec.method = method;
  rec.queries = cfg.queries;
  return rec;
}

}  // namespace

BenchRecord run_baseline(const ObstacleScenario& scenario, const BenchConfig& cfg) {
  const JointLattice lattice{cfg.joint_grid_n};
  const std::vector<Query> queries = sample_queries(scenario, lattice, cfg);
  BenchRecord rec = make_record(scenario, kMethodBaseline, cfg);

  std::vector<std::int8_t> occupancy(lattice.node_count());
  std::vector<BaselineQueryResult> last_results;
  std::vector<double> times;
  for (int rep = 0; rep <= cfg.repetitions; ++rep) {  // rep 0 is the warm-up
    std::vector<BaselineQueryResult> results;
    const auto t0 = Clock::now();
    for (const Query& q : queries) {
      results.push_back(baseline_astar(lattice, scenario.obstacles,
                                       snap_lattice_node(lattice, q.start),
                                       snap_lattice_node(lattice, q.goal), occupancy));
    }
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (rep > 0) times.push_back(dt);
    last_results = std::move(results);
  }
  rec.seconds = median(times);

  int valid = 0;
  for (const BaselineQueryResult& r : last_results) {
    if (!r.found) continue;
    std::vector<JointAngles> traj;
    traj.reserve(r.nodes.size());
    for (int node : r.nodes) traj.push_back(lattice.config(node));
    if (validate_trajectory(traj, scenario.obstacles).pass) ++valid;
  }
  rec.validity_rate = static_cast<double>(valid) / cfg.queries;
  return rec;
}

BenchRecord run_generator(gan::Generator<float>& gen, const ObstacleScenario& scenario,
                          const BenchConfig& cfg) {
  const JointLattice lattice{cfg.joint_grid_n};
  const std::vector<Query> queries = sample_queries(scenario, lattice, cfg);
  BenchRecord rec = make_record(scenario, kMethodGenerator, cfg);

  std::vector<double> times;
  LatentGridGraph graph;
  std::vector<AstarResult> last_paths;
  for (int rep = 0; rep <= cfg.repetitions; ++rep) {
    const auto t0 = Clock::now();
    graph = build_graph(gen, scenario.mask, cfg.latent_n);
    std::vector<AstarResult> paths;
    for (const Query& q : queries) {
      paths.push_back(astar(graph, snap_to_node(graph, q.start), snap_to_node(graph, q.goal)));
    }
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (rep > 0) times.push_back(dt);
    last_paths = std::move(paths);
  }
  rec.seconds = median(times);

  int valid = 0;
  for (const AstarResult& p : last_paths) {
    std::vector<JointAngles> traj;
    traj.reserve(p.nodes.size());
    for (int node : p.nodes) traj.push_back(graph.joints[node]);
    if (validate_trajectory(traj, scenario.obstacles).pass) ++valid;
  }
  rec.validity_rate = static_cast<double>(valid) / cfg.queries;
  return rec;
}

void assign_ratios(std::vector<BenchRecord>& records) {
  for (const char* method : {kMethodBaseline, kMethodGenerator}) {
    const BenchRecord* simplest = nullptr;
    for (const BenchRecord& r : records) {
      if (r.method != method) continue;
      if (simplest == nullptr || r.obstacle_count < simplest->obstacle_count ||
          (r.obstacle_count == simplest->obstacle_count &&
           r.total_obstacle_area < simplest->total_obstacle_area)) {
        simplest = &r;
      }
    }
    if (simplest == nullptr || simplest->seconds <= 0.0) continue;
    const double base = simplest->seconds;
    for (BenchRecord& r : records) {
      if (r.method == method) r.ratio = r.seconds / base;
    }
  }
}

std::vector<BenchRecord> run_bench(gan::Generator<float>& gen,
                                   const std::vector<ObstacleScenario>& scenarios,
                                   const BenchConfig& cfg) {
  std::vector<BenchRecord> records;
  for (const ObstacleScenario& s : scenarios) {
    records.push_back(run_baseline(s, cfg));
    records.push_back(run_generator(gen, s, cfg));
  }
  assign_ratios(records);
  return records;
}

void write_bench_csv(const std::string& path, const std::vector<BenchRecord>& records,
                     std::uint64_t seed, std::uint64_t config_hash) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write bench csv: " + path);
  char meta[128];
  std::snprintf(meta, sizeof meta, "# cfplan %s seed=%llu config=%016llx\n", kVersion,
                static_cast<unsigned long long>(seed),
                static_cast<unsigned long long>(config_hash));
  f << meta
    << "scenario_id,obstacle_count,total_obstacle_area,method,seconds,ratio,validity_rate,"
       "queries\n";
  for (const BenchRecord& r : records) {
    char line[256];
    std::snprintf(line, sizeof line, "%u,%d,%.9g,%s,%.9g,%.9g,%.4f,%d\n", r.scenario_id,
                  r.obstacle_count, r.total_obstacle_area, r.method.c_str(), r.seconds, r.ratio,
                  r.validity_rate, r.queries);
    f << line;
  }
}

}  // namespace cfplan
