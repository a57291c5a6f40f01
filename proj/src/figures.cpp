#include "cfplan/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cfplan/dataset.hpp"
#include "cfplan/svg.hpp"
#include "cfplan/version.hpp"

namespace cfplan {
namespace {

std::string meta_line(const FigureMeta& meta) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "cfplan %s seed=%llu config=%016llx", kVersion,
                static_cast<unsigned long long>(meta.seed),
                static_cast<unsigned long long>(meta.config_hash));
  return buf;
}

// Maps data coordinates into a pixel box with inverted y.
struct Frame {
  double x0, y0, w, h;      // pixel box
  double dx0, dy0, dx1, dy1;  // data extents

  double px(double x) const { return x0 + (x - dx0) / (dx1 - dx0) * w; }
  double py(double y) const { return y0 + h - (y - dy0) / (dy1 - dy0) * h; }
};

void draw_frame_box(SvgCanvas& svg, const Frame& f, const std::string& title) {
  svg.rect(f.x0, f.y0, f.w, f.h, "#ffffff", "#333333", 1.0);
  svg.text(f.x0 + f.w / 2, f.y0 - 8, title, 13, "middle");
}

void draw_obstacle(SvgCanvas& svg, const Frame& f, const Obstacle& ob, const std::string& fill) {
  if (const auto* c = std::get_if<Circle>(&ob)) {
    svg.circle(f.px(c->center.x), f.py(c->center.y),
               c->radius / (f.dx1 - f.dx0) * f.w, fill, "#555555", 0.8);
  } else {
    const auto& r = std::get<Rect>(ob);
    svg.rect(f.px(r.lo.x), f.py(r.hi.y), (r.hi.x - r.lo.x) / (f.dx1 - f.dx0) * f.w,
             (r.hi.y - r.lo.y) / (f.dy1 - f.dy0) * f.h, fill, "#555555", 0.8);
  }
}

}  // namespace

void render_iou_histogram(const std::string& path, const Histogram& train,
                          const Histogram& test, const FigureMeta& meta) {
  SvgCanvas svg(640, 400);
  svg.comment(meta_line(meta));
  const Frame f{70, 40, 520, 300, 0.0, 0.0, 1.0, 1.0};
  double max_freq = 0.0;
  for (double v : train.frequencies) max_freq = std::max(max_freq, v);
  for (double v : test.frequencies) max_freq = std::max(max_freq, v);
  if (max_freq <= 0.0) max_freq = 1.0;
  const Frame fy{f.x0, f.y0, f.w, f.h, 0.0, 0.0, 1.0, max_freq * 1.1};
  draw_frame_box(svg, f, "IoU histogram (relative frequency)");
  const std::size_t bins = train.frequencies.size();
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = train.edges[b], hi = train.edges[b + 1];
    const double wpx = (hi - lo) * f.w;
    const double xpx = f.px(lo);
    const double th = train.frequencies[b] / fy.dy1 * f.h;
    svg.rect(xpx + 1, f.y0 + f.h - th, wpx / 2 - 2, th, "#4878cf");
    if (b < test.frequencies.size()) {
      const double eh = test.frequencies[b] / fy.dy1 * f.h;
      svg.rect(xpx + wpx / 2 + 1, f.y0 + f.h - eh, wpx / 2 - 2, eh, "#ee854a");
    }
  }
  for (int t = 0; t <= 5; ++t) {
    const double x = t / 5.0;
    svg.line(f.px(x), f.y0 + f.h, f.px(x), f.y0 + f.h + 5, "#333333", 1.0);
    char label[16];
    std::snprintf(label, sizeof label, "%.1f", x);
    svg.text(f.px(x), f.y0 + f.h + 20, label, 11, "middle");
  }
  svg.text(f.x0 + f.w / 2, 385, "IoU", 12, "middle");
  svg.rect(f.x0 + 10, f.y0 + 10, 14, 14, "#4878cf");
  svg.text(f.x0 + 30, f.y0 + 22, "train", 12);
  svg.rect(f.x0 + 90, f.y0 + 10, 14, 14, "#ee854a");
  svg.text(f.x0 + 110, f.y0 + 22, "test", 12);
  svg.save(path);
}

void render_plan_triptych(const std::string& path, const PlanResult& plan,
                          const ObstacleScenario& scenario, const FigureMeta& meta) {
  SvgCanvas svg(1160, 430);
  svg.comment(meta_line(meta));
  const Frame latent{40, 50, 330, 330, 0.0, 0.0, 1.0, 1.0};
  const Frame joint{420, 50, 330, 330, kTheta1Min, kTheta2Min, kTheta1Max, kTheta2Max};
  const Frame xy{800, 50, 330, 330, -2.2, -2.2, 2.2, 2.2};

  draw_frame_box(svg, latent, "latent space");
  draw_frame_box(svg, joint, "joint space [deg]");
  draw_frame_box(svg, xy, "xy workspace");

  // Collision region in joint space, sampled on a coarse grid.
  const double step = 2.5;
  for (double t1 = kTheta1Min; t1 < kTheta1Max; t1 += step) {
    for (double t2 = kTheta2Min; t2 < kTheta2Max; t2 += step) {
      if (collides({t1 + step / 2, t2 + step / 2}, scenario.obstacles)) {
        svg.rect(joint.px(t1), joint.py(t2 + step), step / (joint.dx1 - joint.dx0) * joint.w,
                 step / (joint.dy1 - joint.dy0) * joint.h, "#cccccc");
      }
    }
  }

  // Latent path.
  std::vector<std::pair<double, double>> lpts;
  for (const auto& z : plan.latent.points) lpts.emplace_back(latent.px(z[0]), latent.py(z[1]));
  svg.polyline(lpts, "#2060c0", 2.0);
  if (!lpts.empty()) {
    svg.circle(lpts.front().first, lpts.front().second, 4, "#109010");
    svg.circle(lpts.back().first, lpts.back().second, 4, "#c03030");
  }

  // Joint trajectory.
  std::vector<std::pair<double, double>> jpts;
  for (const JointAngles& q : plan.trajectory) {
    jpts.emplace_back(joint.px(q.theta1), joint.py(q.theta2));
  }
  svg.polyline(jpts, "#2060c0", 2.0);
  if (!jpts.empty()) {
    svg.circle(jpts.front().first, jpts.front().second, 4, "#109010");
    svg.circle(jpts.back().first, jpts.back().second, 4, "#c03030");
  }

  // Workspace: obstacles, a few arm poses along the path, and the tip trace.
  for (const Obstacle& ob : scenario.obstacles) draw_obstacle(svg, xy, ob, "#bbbbbb");
  std::vector<std::pair<double, double>> tip_trace;
  const std::size_t n = plan.trajectory.size();
  for (std::size_t i = 0; i < n; ++i) {
    const ArmPose pose = forward_kinematics(plan.trajectory[i]);
    tip_trace.emplace_back(xy.px(pose.tip.x), xy.py(pose.tip.y));
  }
  svg.polyline(tip_trace, "#90b8e8", 1.2);
  const int pose_samples = 5;
  for (int k = 0; k < pose_samples && n > 0; ++k) {
    const std::size_t i = n <= 1 ? 0 : k * (n - 1) / (pose_samples - 1);
    const ArmPose pose = forward_kinematics(plan.trajectory[i]);
    const std::string shade = k == 0 ? "#109010" : (k == pose_samples - 1 ? "#c03030" : "#505050");
    svg.polyline({{xy.px(pose.base.x), xy.py(pose.base.y)},
                  {xy.px(pose.elbow.x), xy.py(pose.elbow.y)},
                  {xy.px(pose.tip.x), xy.py(pose.tip.y)}},
                 shade, 2.0);
  }
  svg.circle(xy.px(0), xy.py(0), 3, "#000000");

  char caption[160];
  std::snprintf(caption, sizeof caption, "scenario %u  method=%s  valid=%s  length=%.1f deg",
                plan.scenario_id, plan.method.c_str(), plan.valid ? "true" : "false",
                plan.joint_path_length_deg);
  svg.text(580, 415, caption, 13, "middle");
  svg.save(path);
}

void render_bench_chart(const std::string& path, const std::vector<BenchRecord>& records,
                        const FigureMeta& meta) {
  SvgCanvas svg(640, 400);
  svg.comment(meta_line(meta));
  double max_ratio = 1.0;
  int max_count = 1;
  for (const BenchRecord& r : records) {
    max_ratio = std::max(max_ratio, r.ratio);
    max_count = std::max(max_count, r.obstacle_count);
  }
  const Frame f{70, 40, 520, 300, 0.0, 0.0, static_cast<double>(max_count) * 1.05,
                max_ratio * 1.1};
  draw_frame_box(svg, f, "planning cost vs obstacle count (ratio to simplest)");

  const struct {
    const char* method;
    const char* color;
    const char* label;
  } series[] = {{kMethodBaseline, "#c03030", "collision-checked A*"},
                {kMethodGenerator, "#2060c0", "generator inference + A*"}};
  for (const auto& s : series) {
    std::vector<std::pair<int, double>> pts;
    for (const BenchRecord& r : records) {
      if (r.method == s.method) pts.emplace_back(r.obstacle_count, r.ratio);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> px;
    for (const auto& [count, ratio] : pts) px.emplace_back(f.px(count), f.py(ratio));
    svg.polyline(px, s.color, 2.0);
    for (const auto& [x, y] : px) svg.circle(x, y, 3.5, s.color);
  }
  svg.line(f.px(0), f.py(1.0), f.px(f.dx1), f.py(1.0), "#999999", 0.8);
  for (int c = 1; c <= max_count; c *= 2) {
    svg.line(f.px(c), f.y0 + f.h, f.px(c), f.y0 + f.h + 5, "#333333", 1.0);
    svg.text(f.px(c), f.y0 + f.h + 20, std::to_string(c), 11, "middle");
  }
  svg.text(f.x0 + f.w / 2, 385, "obstacles", 12, "middle");
  svg.rect(f.x0 + 10, f.y0 + 10, 14, 14, "#c03030");
  svg.text(f.x0 + 30, f.y0 + 22, "collision-checked A*", 12);
  svg.rect(f.x0 + 10, f.y0 + 32, 14, 14, "#2060c0");
  svg.text(f.x0 + 30, f.y0 + 44, "generator inference + A*", 12);
  svg.save(path);
}

}  // namespace cfplan
