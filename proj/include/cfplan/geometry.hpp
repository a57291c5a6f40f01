#pragma once

#include <cmath>
#include <variant>
#include <vector>

namespace cfplan {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

// Two-link planar arm. Joint angles are degrees, measured counter-clockwise;
// theta1 from the +x axis, theta2 relative to link 1. Base is the origin.
inline constexpr double kLinkLength = 1.0;
inline constexpr double kTheta1Min = -90.0;
inline constexpr double kTheta1Max = 90.0;
inline constexpr double kTheta2Min = 5.0;
inline constexpr double kTheta2Max = 150.0;

// Obstacle workspace bounds.
inline constexpr double kWorkspaceXMin = -1.0;
inline constexpr double kWorkspaceXMax = 2.0;
inline constexpr double kWorkspaceYMin = -2.0;
inline constexpr double kWorkspaceYMax = 2.0;

struct JointAngles {
  double theta1 = 0.0;  // degrees
  double theta2 = 0.0;  // degrees

  bool operator==(const JointAngles&) const = default;
};

struct ArmPose {
  Vec2 base;
  Vec2 elbow;
  Vec2 tip;
};

struct Segment {
  Vec2 a;
  Vec2 b;
};

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

// Axis-aligned rectangle, lo component-wise <= hi.
struct Rect {
  Vec2 lo;
  Vec2 hi;
};

using Obstacle = std::variant<Circle, Rect>;
using ObstacleSet = std::vector<Obstacle>;

bool in_joint_range(const JointAngles& q);

// Throws std::out_of_range when q violates the joint limits.
void require_in_range(const JointAngles& q);

ArmPose forward_kinematics(const JointAngles& q);

// Closed-region containment: boundary points count as inside.
bool point_in_obstacle(const Vec2& p, const Obstacle& ob);

double distance_point_segment(const Vec2& p, const Segment& s);

// True iff the segment touches or crosses the obstacle boundary, or lies
// wholly inside it. Touching counts as intersection.
bool segment_intersects_obstacle(const Segment& s, const Obstacle& ob);

bool collides(const JointAngles& q, const ObstacleSet& obstacles);

double obstacle_area(const Obstacle& ob);

}  // namespace cfplan
