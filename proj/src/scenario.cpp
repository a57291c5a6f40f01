#include "cfplan/scenario.hpp"

#include <algorithm>
#include <fstream>

#include "cfplan/dataset.hpp"
#include "cfplan/errors.hpp"
#include "cfplan/rng.hpp"
#include "cfplan/version.hpp"
#include "json.hpp"

namespace cfplan {
namespace {

using nlohmann::json;

bool cell_occupied(int row, int col, const Obstacle& ob) {
  const double x0 = kWorkspaceXMin + col * ConditionMask::kCellSize;
  const double y0 = kWorkspaceYMin + row * ConditionMask::kCellSize;
  const double x1 = x0 + ConditionMask::kCellSize;
  const double y1 = y0 + ConditionMask::kCellSize;
  const Vec2 corners[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  if (point_in_obstacle({(x0 + x1) / 2, (y0 + y1) / 2}, ob)) return true;
  for (const Vec2& c : corners) {
    if (point_in_obstacle(c, ob)) return true;
  }
  // Cell edge touching or crossing the obstacle.
  for (int e = 0; e < 4; ++e) {
    if (segment_intersects_obstacle({corners[e], corners[(e + 1) % 4]}, ob)) return true;
  }
  return false;
}

bool overlaps_forbidden_zone(const Obstacle& ob, double radius) {
  if (const auto* c = std::get_if<Circle>(&ob)) {
    return c->center.norm() <= radius + c->radius;
  }
  const auto& r = std::get<Rect>(ob);
  const Vec2 nearest{std::clamp(0.0, r.lo.x, r.hi.x), std::clamp(0.0, r.lo.y, r.hi.y)};
  return nearest.norm() <= radius;
}

Obstacle draw_obstacle(Rng& rng, const ScenarioConfig& cfg) {
  if (rng.coin()) {
    const double r = rng.uniform(cfg.min_size / 2.0, cfg.max_circle_radius);
    const double cx = rng.uniform(kWorkspaceXMin + r, kWorkspaceXMax - r);
    const double cy = rng.uniform(kWorkspaceYMin + r, kWorkspaceYMax - r);
    return Circle{{cx, cy}, r};
  }
  const double w = rng.uniform(cfg.min_size, cfg.max_rect_side);
  const double h = rng.uniform(cfg.min_size, cfg.max_rect_side);
  const double x0 = rng.uniform(kWorkspaceXMin, kWorkspaceXMax - w);
  const double y0 = rng.uniform(kWorkspaceYMin, kWorkspaceYMax - h);
  return Rect{{x0, y0}, {x0 + w, y0 + h}};
}

int count_free_grid_points(const ObstacleSet& obstacles) {
  int free = 0;
  for (int i = 0; i < kTheta1Count; ++i) {
    for (int j = 0; j < kTheta2Count; ++j) {
      if (!collides({theta1_at(i), theta2_at(j)}, obstacles)) ++free;
    }
  }
  return free;
}

json obstacle_to_json(const Obstacle& ob) {
  if (const auto* c = std::get_if<Circle>(&ob)) {
    return json{{"type", "circle"}, {"cx", c->center.x}, {"cy", c->center.y}, {"r", c->radius}};
  }
  const auto& r = std::get<Rect>(ob);
  return json{{"type", "rect"}, {"x0", r.lo.x}, {"y0", r.lo.y}, {"x1", r.hi.x}, {"y1", r.hi.y}};
}

Obstacle obstacle_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "circle") {
    return Circle{{j.at("cx").get<double>(), j.at("cy").get<double>()}, j.at("r").get<double>()};
  }
  if (type == "rect") {
    return Rect{{j.at("x0").get<double>(), j.at("y0").get<double>()},
                {j.at("x1").get<double>(), j.at("y1").get<double>()}};
  }
  throw DataError("unknown obstacle type: " + type);
}

}  // namespace

int ConditionMask::occupied_count() const {
  int n = 0;
  for (std::uint8_t c : cells) n += c != 0;
  return n;
}

std::vector<std::string> ConditionMask::to_rows() const {
  std::vector<std::string> rows(kRows, std::string(kCols, '0'));
  for (int r = 0; r < kRows; ++r) {
    for (int c = 0; c < kCols; ++c) {
      if (at(r, c)) rows[r][c] = '1';
    }
  }
  return rows;
}

ConditionMask ConditionMask::from_rows(const std::vector<std::string>& rows) {
  if (rows.size() != kRows) throw DataError("condition mask needs 32 rows");
  ConditionMask m;
  for (int r = 0; r < kRows; ++r) {
    if (rows[r].size() != kCols) throw DataError("condition mask rows must be 24 chars");
    for (int c = 0; c < kCols; ++c) {
      const char ch = rows[r][c];
      if (ch != '0' && ch != '1') throw DataError("condition mask cells must be '0' or '1'");
      m.set(r, c, ch == '1');
    }
  }
  return m;
}

ConditionMask rasterize(const ObstacleSet& obstacles) {
  ConditionMask mask;
  for (const Obstacle& ob : obstacles) {
    for (int r = 0; r < ConditionMask::kRows; ++r) {
      for (int c = 0; c < ConditionMask::kCols; ++c) {
        if (!mask.at(r, c) && cell_occupied(r, c, ob)) mask.set(r, c, 1);
      }
    }
  }
  return mask;
}

ObstacleScenario sample_scenario(std::uint64_t seed, const ScenarioConfig& cfg,
                                 std::uint32_t id) {
  Rng rng(seed);
  const int min_free =
      static_cast<int>(cfg.min_free_fraction * kGridPointCount) + 1;
  int attempts = 0;
  while (attempts < cfg.max_attempts) {
    ObstacleSet obstacles;
    const int count =
        cfg.min_obstacles + static_cast<int>(rng.below(cfg.max_obstacles - cfg.min_obstacles + 1));
    bool placed_all = true;
    for (int i = 0; i < count; ++i) {
      bool placed = false;
      while (attempts < cfg.max_attempts) {
        Obstacle ob = draw_obstacle(rng, cfg);
        if (!overlaps_forbidden_zone(ob, cfg.forbidden_radius)) {
          obstacles.push_back(std::move(ob));
          placed = true;
          break;
        }
        ++attempts;
      }
      if (!placed) {
        placed_all = false;
        break;
      }
    }
    if (placed_all && count_free_grid_points(obstacles) >= min_free) {
      return ObstacleScenario{id, obstacles, rasterize(obstacles)};
    }
    ++attempts;
  }
  throw DataError("scenario generation failed after " + std::to_string(cfg.max_attempts) +
                  " rejection attempts");
}

std::vector<ObstacleScenario> sample_scenario_set(int count, std::uint64_t seed,
                                                  const ScenarioConfig& cfg) {
  std::vector<ObstacleScenario> out;
  out.reserve(count + 1);
  out.push_back(ObstacleScenario{0, {}, ConditionMask{}});
  for (int i = 1; i <= count; ++i) {
    out.push_back(sample_scenario(derive_seed(seed, i), cfg, static_cast<std::uint32_t>(i)));
  }
  return out;
}

void save_scenarios(const std::string& path, const std::vector<ObstacleScenario>& scenarios,
                    std::uint64_t seed, std::uint64_t config_hash) {
  json root;
  root["version"] = kVersion;
  root["seed"] = seed;
  root["config_hash"] = config_hash;
  json list = json::array();
  for (const ObstacleScenario& s : scenarios) {
    json obs = json::array();
    for (const Obstacle& ob : s.obstacles) obs.push_back(obstacle_to_json(ob));
    list.push_back(json{{"id", s.id}, {"obstacles", obs}, {"mask", s.mask.to_rows()}});
  }
  root["scenarios"] = list;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write scenario file: " + path);
  f << root.dump(2) << '\n';
}

ScenarioFile load_scenarios(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open scenario file: " + path);
  json root;
  try {
    f >> root;
  } catch (const json::exception& e) {
    throw DataError("scenario file parse error: " + std::string(e.what()));
  }
  try {
    ScenarioFile out;
    out.version = root.at("version").get<std::string>();
    out.seed = root.at("seed").get<std::uint64_t>();
    out.config_hash = root.value("config_hash", 0ull);
    for (const json& js : root.at("scenarios")) {
      ObstacleScenario s;
      s.id = js.at("id").get<std::uint32_t>();
      for (const json& jo : js.at("obstacles")) s.obstacles.push_back(obstacle_from_json(jo));
      s.mask = ConditionMask::from_rows(js.at("mask").get<std::vector<std::string>>());
      out.scenarios.push_back(std::move(s));
    }
    return out;
  } catch (const json::exception& e) {
    throw DataError("scenario file schema error: " + std::string(e.what()));
  }
}

const ObstacleScenario& find_scenario(const ScenarioFile& file, std::uint32_t id) {
  for (const ObstacleScenario& s : file.scenarios) {
    if (s.id == id) return s;
  }
  throw DataError("scenario id " + std::to_string(id) + " not in file");
}

}  // namespace cfplan
