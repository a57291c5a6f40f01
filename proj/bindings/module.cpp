#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <memory>
#include <vector>

#include "cfplan/bench.hpp"
#include "cfplan/dataset.hpp"
#include "cfplan/evaluation.hpp"
#include "cfplan/gan/io.hpp"
#include "cfplan/gan/train.hpp"
#include "cfplan/geometry.hpp"
#include "cfplan/pipeline.hpp"
#include "cfplan/planner.hpp"
#include "cfplan/scenario.hpp"
#include "cfplan/version.hpp"

namespace py = pybind11;
using namespace cfplan;

namespace {

Obstacle make_circle(double cx, double cy, double r) { return Circle{{cx, cy}, r}; }

Obstacle make_rect(double x0, double y0, double x1, double y1) {
  return Rect{{x0, y0}, {x1, y1}};
}

std::vector<std::vector<double>> latent_as_lists(const LatentPath& path) {
  std::vector<std::vector<double>> out;
  for (const auto& z : path.points) out.push_back({z[0], z[1]});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Collision-free 2-link arm path planning in a cGAN latent space";
  m.attr("__version__") = kVersion;

  py::register_exception<DataError>(m, "DataError");
  py::register_exception<ModelError>(m, "ModelError");
  py::register_exception<PlanningError>(m, "PlanningError");

  // --- geometry
  py::class_<Vec2>(m, "Vec2")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return Vec2{x, y}; }))
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("y", &Vec2::y)
      .def("__repr__", [](const Vec2& v) {
        return "Vec2(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")";
      });

  py::class_<JointAngles>(m, "JointAngles")
      .def(py::init<>())
      .def(py::init([](double t1, double t2) { return JointAngles{t1, t2}; }))
      .def_readwrite("theta1", &JointAngles::theta1)
      .def_readwrite("theta2", &JointAngles::theta2)
      .def("__repr__", [](const JointAngles& q) {
        return "JointAngles(" + std::to_string(q.theta1) + ", " + std::to_string(q.theta2) + ")";
      });

  py::class_<ArmPose>(m, "ArmPose")
      .def_readonly("base", &ArmPose::base)
      .def_readonly("elbow", &ArmPose::elbow)
      .def_readonly("tip", &ArmPose::tip);

  py::class_<Circle>(m, "Circle")
      .def_readwrite("center", &Circle::center)
      .def_readwrite("radius", &Circle::radius);
  py::class_<Rect>(m, "Rect")
      .def_readwrite("lo", &Rect::lo)
      .def_readwrite("hi", &Rect::hi);
  m.def("circle", &make_circle, py::arg("cx"), py::arg("cy"), py::arg("r"));
  m.def("rect", &make_rect, py::arg("x0"), py::arg("y0"), py::arg("x1"), py::arg("y1"));
  m.def("obstacle_area", &obstacle_area);

  m.def("forward_kinematics", &forward_kinematics, py::arg("q"));
  m.def("collides", &collides, py::arg("q"), py::arg("obstacles"));
  m.def(
      "segment_intersects_obstacle",
      [](double ax, double ay, double bx, double by, const Obstacle& ob) {
        return segment_intersects_obstacle({{ax, ay}, {bx, by}}, ob);
      },
      py::arg("ax"), py::arg("ay"), py::arg("bx"), py::arg("by"), py::arg("obstacle"));

  m.def("normalize_joints", [](const JointAngles& q) {
    const auto n = normalize_joints(q);
    return py::make_tuple(n[0], n[1]);
  });
  m.def("denormalize_joints", &denormalize_joints, py::arg("u1"), py::arg("u2"));

  // --- scenarios / masks
  py::class_<ConditionMask>(m, "ConditionMask")
      .def(py::init<>())
      .def_property_readonly_static("rows", [](py::object) { return ConditionMask::kRows; })
      .def_property_readonly_static("cols", [](py::object) { return ConditionMask::kCols; })
      .def("occupied_count", &ConditionMask::occupied_count)
      .def("to_rows", &ConditionMask::to_rows)
      .def_static("from_rows", &ConditionMask::from_rows)
      .def("__eq__", [](const ConditionMask& a, const ConditionMask& b) { return a == b; });

  m.def("rasterize", &rasterize, py::arg("obstacles"));

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("min_obstacles", &ScenarioConfig::min_obstacles)
      .def_readwrite("max_obstacles", &ScenarioConfig::max_obstacles)
      .def_readwrite("min_size", &ScenarioConfig::min_size)
      .def_readwrite("max_rect_side", &ScenarioConfig::max_rect_side)
      .def_readwrite("max_circle_radius", &ScenarioConfig::max_circle_radius)
      .def_readwrite("forbidden_radius", &ScenarioConfig::forbidden_radius)
      .def_readwrite("min_free_fraction", &ScenarioConfig::min_free_fraction)
      .def_readwrite("max_attempts", &ScenarioConfig::max_attempts);

  py::class_<ObstacleScenario>(m, "ObstacleScenario")
      .def(py::init<>())
      .def_readwrite("id", &ObstacleScenario::id)
      .def_readwrite("obstacles", &ObstacleScenario::obstacles)
      .def_readwrite("mask", &ObstacleScenario::mask);

  m.def("sample_scenario", &sample_scenario, py::arg("seed"),
        py::arg("config") = ScenarioConfig{}, py::arg("id") = 0);
  m.def("sample_scenario_set", &sample_scenario_set, py::arg("count"), py::arg("seed"),
        py::arg("config") = ScenarioConfig{});
  m.def("save_scenarios", &save_scenarios, py::arg("path"), py::arg("scenarios"),
        py::arg("seed"), py::arg("config_hash") = 0);
  m.def("load_scenarios", [](const std::string& path) {
    auto file = load_scenarios(path);
    return py::make_tuple(file.version, file.seed, file.scenarios);
  });

  // --- dataset
  py::class_<LabeledGrid::Point>(m, "GridPoint")
      .def_readonly("q", &LabeledGrid::Point::q)
      .def_readonly("n1", &LabeledGrid::Point::n1)
      .def_readonly("n2", &LabeledGrid::Point::n2)
      .def_readonly("label", &LabeledGrid::Point::label);

  py::class_<LabeledGrid>(m, "LabeledGrid")
      .def_readonly("scenario_id", &LabeledGrid::scenario_id)
      .def_readonly("points", &LabeledGrid::points)
      .def("collision_count", &LabeledGrid::collision_count)
      .def("free_count", &LabeledGrid::free_count);

  m.def("build_labeled_grid", &build_labeled_grid);
  m.def("save_dataset", &save_dataset);
  m.def("load_dataset", &load_dataset);

  py::class_<FoldSplit>(m, "FoldSplit")
      .def_readonly("fold_index", &FoldSplit::fold_index)
      .def_readonly("train_ids", &FoldSplit::train_ids)
      .def_readonly("test_ids", &FoldSplit::test_ids);
  m.def("make_folds", &make_folds, py::arg("ids"), py::arg("fold_count"), py::arg("seed"));

  // --- training / model
  py::class_<gan::ArchConfig>(m, "ArchConfig")
      .def(py::init<>())
      .def_readwrite("cond_channels1", &gan::ArchConfig::cond_channels1)
      .def_readwrite("cond_channels2", &gan::ArchConfig::cond_channels2)
      .def_readwrite("cond_features", &gan::ArchConfig::cond_features)
      .def_readwrite("trunk_width", &gan::ArchConfig::trunk_width);

  py::class_<gan::TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("arch", &gan::TrainConfig::arch)
      .def_readwrite("epochs", &gan::TrainConfig::epochs)
      .def_readwrite("batch", &gan::TrainConfig::batch)
      .def_readwrite("steps_per_epoch", &gan::TrainConfig::steps_per_epoch)
      .def_readwrite("lambda_identity", &gan::TrainConfig::lambda_identity)
      .def_readwrite("lambda_feature_match", &gan::TrainConfig::lambda_feature_match)
      .def_readwrite("seed", &gan::TrainConfig::seed)
      .def_property(
          "lr", [](const gan::TrainConfig& c) { return c.adam.lr; },
          [](gan::TrainConfig& c, float v) { c.adam.lr = v; });

  py::class_<gan::EpochLog>(m, "EpochLog")
      .def_readonly("epoch", &gan::EpochLog::epoch)
      .def_readonly("d_loss", &gan::EpochLog::d_loss)
      .def_readonly("g_loss", &gan::EpochLog::g_loss)
      .def_readonly("collision_loss", &gan::EpochLog::collision_loss)
      .def_readonly("identity_loss", &gan::EpochLog::identity_loss)
      .def_readonly("fm_loss", &gan::EpochLog::fm_loss)
      .def_readonly("wall_seconds", &gan::EpochLog::wall_seconds);

  // Owns the generator loaded from (or trained into) a checkpoint.
  py::class_<gan::LoadedGenerator>(m, "Generator")
      .def_property_readonly("seed",
                             [](const gan::LoadedGenerator& g) { return g.meta.seed; })
      .def_property_readonly("fold_index",
                             [](const gan::LoadedGenerator& g) { return g.meta.fold_index; })
      .def(
          "generate",
          [](gan::LoadedGenerator& g, double z1, double z2, const ConditionMask& mask) {
            const auto out = gan::generate_one(*g.gen, z1, z2, mask);
            return py::make_tuple(out[0], out[1]);
          },
          py::arg("z1"), py::arg("z2"), py::arg("mask"))
      .def(
          "generate_batch",
          [](gan::LoadedGenerator& g, const std::vector<std::array<double, 2>>& zs,
             const ConditionMask& mask) {
            gan::Tensor<float> z({zs.size(), 2});
            for (std::size_t i = 0; i < zs.size(); ++i) {
              z.at(i, 0) = static_cast<float>(zs[i][0]);
              z.at(i, 1) = static_cast<float>(zs[i][1]);
            }
            const auto out = gan::generate_batch(*g.gen, z, mask);
            std::vector<std::array<double, 2>> res(zs.size());
            for (std::size_t i = 0; i < zs.size(); ++i) {
              res[i] = {static_cast<double>(out.at(i, 0)), static_cast<double>(out.at(i, 1))};
            }
            return res;
          },
          py::arg("zs"), py::arg("mask"));

  m.def("load_generator", &gan::load_generator, py::arg("path"));

  m.def(
      "train",
      [](const std::vector<ObstacleScenario>& scenarios, const gan::TrainConfig& cfg,
         const std::string& ckpt_path) {
        std::vector<LabeledGrid> grids;
        grids.reserve(scenarios.size());
        for (const auto& s : scenarios) grids.push_back(build_labeled_grid(s));
        std::vector<gan::ScenarioData> data;
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
          data.push_back({&grids[i], &scenarios[i].mask});
        }
        gan::Generator<float> gen(cfg.arch);
        gan::Discriminator<float> disc(cfg.arch);
        auto result = gan::train_cgan(gen, disc, data, cfg);
        gan::CheckpointMeta meta;
        meta.seed = cfg.seed;
        meta.arch = cfg.arch;
        gan::save_models(ckpt_path, gen, disc, meta);
        return result.log;
      },
      py::arg("scenarios"), py::arg("config"), py::arg("checkpoint_path"),
      "Train on the given scenarios and write a checkpoint");

  // --- planner
  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("ok", &ValidationReport::pass)
      .def_readonly("first_violation_waypoint", &ValidationReport::first_violation_waypoint)
      .def_readonly("violating_config", &ValidationReport::violating_config)
      .def_readonly("checked_configs", &ValidationReport::checked_configs);

  py::class_<PlanResult>(m, "PlanResult")
      .def_readonly("scenario_id", &PlanResult::scenario_id)
      .def_readonly("method", &PlanResult::method)
      .def_property_readonly("latent_waypoints",
                             [](const PlanResult& p) { return latent_as_lists(p.latent); })
      .def_readonly("trajectory", &PlanResult::trajectory)
      .def_readonly("valid", &PlanResult::valid)
      .def_readonly("joint_path_length_deg", &PlanResult::joint_path_length_deg);

  m.def(
      "plan",
      [](gan::LoadedGenerator& g, const ObstacleScenario& scenario, const JointAngles& start,
         const JointAngles& goal, const std::string& method, int graph_n) {
        PlanRequest req;
        req.start = start;
        req.goal = goal;
        req.method = method;
        req.graph_n = graph_n;
        return plan_path(*g.gen, scenario, req);
      },
      py::arg("generator"), py::arg("scenario"), py::arg("start"), py::arg("goal"),
      py::arg("method") = "line", py::arg("graph_n") = 128);

  m.def(
      "validate_trajectory",
      [](const std::vector<JointAngles>& traj, const std::vector<Obstacle>& obstacles,
         double max_step_deg) { return validate_trajectory(traj, obstacles, max_step_deg); },
      py::arg("trajectory"), py::arg("obstacles"), py::arg("max_step_deg") = 1.0);

  m.def(
      "straight_line_path",
      [](double z1a, double z2a, double z1b, double z2b, int steps) {
        return latent_as_lists(straight_line_path({z1a, z2a}, {z1b, z2b}, steps));
      },
      py::arg("z1_start"), py::arg("z2_start"), py::arg("z1_goal"), py::arg("z2_goal"),
      py::arg("steps"));

  // --- evaluation
  py::class_<EvalCounts>(m, "EvalCounts")
      .def_readonly("tp", &EvalCounts::tp)
      .def_readonly("fp", &EvalCounts::fp)
      .def_readonly("fn", &EvalCounts::fn);

  py::class_<ConditionEval>(m, "ConditionEval")
      .def_readonly("scenario_id", &ConditionEval::scenario_id)
      .def_readonly("counts", &ConditionEval::counts)
      .def_readonly("iou", &ConditionEval::iou)
      .def_readonly("precision", &ConditionEval::precision);

  m.def(
      "evaluate_condition",
      [](gan::LoadedGenerator& g, const ObstacleScenario& scenario, double dtheta) {
        return evaluate_condition(*g.gen, scenario, EvalConfig{dtheta});
      },
      py::arg("generator"), py::arg("scenario"), py::arg("dtheta") = 1.0);

  m.def("iou_histogram", [](const std::vector<double>& ious, int bins) {
    const Histogram h = iou_histogram(ious, bins);
    return py::make_tuple(h.edges, h.frequencies);
  });
}
