#include "cfplan/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cfplan {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = (b - a).cross(c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Inclusive segment-segment test; shared endpoints and collinear overlap count.
bool segments_intersect(const Segment& s, const Segment& t) {
  const int o1 = orientation(s.a, s.b, t.a);
  const int o2 = orientation(s.a, s.b, t.b);
  const int o3 = orientation(t.a, t.b, s.a);
  const int o4 = orientation(t.a, t.b, s.b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(s.a, s.b, t.a)) return true;
  if (o2 == 0 && on_segment(s.a, s.b, t.b)) return true;
  if (o3 == 0 && on_segment(t.a, t.b, s.a)) return true;
  if (o4 == 0 && on_segment(t.a, t.b, s.b)) return true;
  return false;
}

bool segment_hits_rect(const Segment& s, const Rect& r) {
  // Endpoint containment catches segments wholly inside; edge tests catch the rest.
  if (point_in_obstacle(s.a, r) || point_in_obstacle(s.b, r)) return true;
  const Vec2 p00 = r.lo;
  const Vec2 p10 = {r.hi.x, r.lo.y};
  const Vec2 p11 = r.hi;
  const Vec2 p01 = {r.lo.x, r.hi.y};
  return segments_intersect(s, {p00, p10}) || segments_intersect(s, {p10, p11}) ||
         segments_intersect(s, {p11, p01}) || segments_intersect(s, {p01, p00});
}

}  // namespace

bool in_joint_range(const JointAngles& q) {
  return q.theta1 >= kTheta1Min && q.theta1 <= kTheta1Max &&
         q.theta2 >= kTheta2Min && q.theta2 <= kTheta2Max;
}

void require_in_range(const JointAngles& q) {
  if (!in_joint_range(q)) {
    throw std::out_of_range("joint angles (" + std::to_string(q.theta1) + ", " +
                            std::to_string(q.theta2) + ") outside [" +
                            std::to_string(kTheta1Min) + "," + std::to_string(kTheta1Max) +
                            "]x[" + std::to_string(kTheta2Min) + "," +
                            std::to_string(kTheta2Max) + "]");
  }
}

ArmPose forward_kinematics(const JointAngles& q) {
  require_in_range(q);
  const double a1 = q.theta1 * kDegToRad;
  const double a2 = (q.theta1 + q.theta2) * kDegToRad;
  ArmPose pose;
  pose.base = {0.0, 0.0};
  pose.elbow = {kLinkLength * std::cos(a1), kLinkLength * std::sin(a1)};
  pose.tip = {pose.elbow.x + kLinkLength * std::cos(a2),
              pose.elbow.y + kLinkLength * std::sin(a2)};
  return pose;
}

bool point_in_obstacle(const Vec2& p, const Obstacle& ob) {
  if (const auto* c = std::get_if<Circle>(&ob)) {
    return (p - c->center).dot(p - c->center) <= c->radius * c->radius;
  }
  const auto& r = std::get<Rect>(ob);
  return p.x >= r.lo.x && p.x <= r.hi.x && p.y >= r.lo.y && p.y <= r.hi.y;
}

double distance_point_segment(const Vec2& p, const Segment& s) {
  const Vec2 d = s.b - s.a;
  const double len2 = d.dot(d);
  if (len2 == 0.0) return (p - s.a).norm();
  const double t = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
  return (p - (s.a + d * t)).norm();
}

bool segment_intersects_obstacle(const Segment& s, const Obstacle& ob) {
  if (const auto* c = std::get_if<Circle>(&ob)) {
    return distance_point_segment(c->center, s) <= c->radius;
  }
  return segment_hits_rect(s, std::get<Rect>(ob));
}

bool collides(const JointAngles& q, const ObstacleSet& obstacles) {
  const ArmPose pose = forward_kinematics(q);
  const Segment link1{pose.base, pose.elbow};
  const Segment link2{pose.elbow, pose.tip};
  for (const Obstacle& ob : obstacles) {
    if (segment_intersects_obstacle(link1, ob) || segment_intersects_obstacle(link2, ob)) {
      return true;
    }
  }
  return false;
}

double obstacle_area(const Obstacle& ob) {
  if (const auto* c = std::get_if<Circle>(&ob)) {
    return std::numbers::pi * c->radius * c->radius;
  }
  const auto& r = std::get<Rect>(ob);
  return (r.hi.x - r.lo.x) * (r.hi.y - r.lo.y);
}

}  // namespace cfplan
