#ifndef TASKPLAN_GEOMETRY_HPP
#define TASKPLAN_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace taskplan {

inline constexpr double kPi = 3.14159265358979323846;

/// Wrap an angle into (-pi, pi]. Idempotent.
inline double normalize_angle(double a) {
  while (a <= -kPi) a += 2.0 * kPi;
  while (a > kPi) a -= 2.0 * kPi;
  return a;
}

struct Vec2 {
  double x{0.0};  // [m]
  double y{0.0};  // [m]

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

/// Rotate a vector by angle a (counter-clockwise positive).
inline Vec2 rotate(const Vec2& v, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Planar pose. theta is kept in (-pi, pi].
struct Pose2 {
  double x{0.0};      // [m]
  double y{0.0};      // [m]
  double theta{0.0};  // [rad]

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }
};

/// Frame a pose or disturbance is expressed in: the fixed plane is
/// ego-centric to the real robot at the start of a run; the moving plane
/// rides with a simulated robot's centre of mass.
enum class FrameTag { Fixed, Moving };

/// What a disturbance is: an obstacle the robot has hit, an obstacle it
/// has detected without contact, or a target it is asked to reach.
enum class DisturbanceKind { ObstacleCollided, ObstacleLooming, Target };

inline const char* to_string(DisturbanceKind k) {
  switch (k) {
    case DisturbanceKind::ObstacleCollided: return "obstacle_collided";
    case DisturbanceKind::ObstacleLooming: return "obstacle_looming";
    case DisturbanceKind::Target: return "target";
  }
  return "?";
}

/// Rectangular stimulus with pose and extent. w is the extent along the
/// disturbance's own x axis, l the extent along its y axis (both full
/// widths, metres), matching how clusters are measured.
struct Disturbance {
  double x{0.0};
  double y{0.0};
  double theta{0.0};
  double w{0.0};
  double l{0.0};
  DisturbanceKind kind{DisturbanceKind::ObstacleLooming};

  Vec2 position() const { return {x, y}; }
  bool is_obstacle() const { return kind != DisturbanceKind::Target; }
  bool collided() const { return kind == DisturbanceKind::ObstacleCollided; }
};

/// Differential-drive robot geometry and speed limits.
/// The pose of the robot refers to its centre of mass (COM), which sits
/// com_offset ahead of the footprint centroid along the heading.
struct RobotModel {
  double length{0.27};          ///< footprint extent along heading [m]
  double width{0.18};           ///< footprint extent across heading [m]
  double com_offset{0.05};      ///< COM forward of centroid [m]
  double linear_speed{0.2};     ///< straight-drive speed [m/s]
  double angular_speed{kPi / 4.0};  ///< turn rate [rad/s]
};

/// Oriented rectangle: centre, orientation, and half extents along its
/// own axes.
struct OrientedRect {
  Vec2 center{};
  double theta{0.0};
  double half_x{0.0};
  double half_y{0.0};

  std::array<Vec2, 4> corners() const {
    std::array<Vec2, 4> out{};
    const std::array<Vec2, 4> local{{{half_x, half_y},
                                     {half_x, -half_y},
                                     {-half_x, -half_y},
                                     {-half_x, half_y}}};
    for (int i = 0; i < 4; ++i) out[i] = center + rotate(local[i], theta);
    return out;
  }
};

inline OrientedRect rect_of(const Disturbance& d) {
  return {{d.x, d.y}, d.theta, d.w / 2.0, d.l / 2.0};
}

/// Robot footprint rectangle for a COM pose.
inline OrientedRect robot_footprint(const Pose2& p, const RobotModel& r) {
  const Vec2 centroid = p.position() - p.heading() * r.com_offset;
  return {centroid, p.theta, r.length / 2.0, r.width / 2.0};
}

namespace detail {
inline void project(const std::array<Vec2, 4>& pts, const Vec2& axis,
                    double& lo, double& hi) {
  lo = hi = pts[0].dot(axis);
  for (int i = 1; i < 4; ++i) {
    const double v = pts[i].dot(axis);
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
}
}  // namespace detail

/// Separating-axis overlap test for two oriented rectangles. Closed:
/// rectangles that merely touch count as overlapping.
inline bool obb_overlap(const OrientedRect& a, const OrientedRect& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes{{rotate({1, 0}, a.theta), rotate({0, 1}, a.theta),
                                  rotate({1, 0}, b.theta), rotate({0, 1}, b.theta)}};
  for (const Vec2& ax : axes) {
    double alo, ahi, blo, bhi;
    detail::project(ca, ax, alo, ahi);
    detail::project(cb, ax, blo, bhi);
    if (ahi < blo || bhi < alo) return false;
  }
  return true;
}

/// Express a fixed-frame pose in the moving frame of `robot`.
inline Pose2 to_moving_frame(const Pose2& robot, const Pose2& p) {
  const Vec2 t = rotate(p.position() - robot.position(), -robot.theta);
  return {t.x, t.y, normalize_angle(p.theta - robot.theta)};
}

/// Express a moving-frame pose of `robot` back in the fixed frame.
inline Pose2 to_fixed_frame(const Pose2& robot, const Pose2& p) {
  const Vec2 t = robot.position() + rotate(p.position(), robot.theta);
  return {t.x, t.y, normalize_angle(p.theta + robot.theta)};
}

inline Disturbance to_moving_frame(const Pose2& robot, const Disturbance& d) {
  const Pose2 q = to_moving_frame(robot, Pose2{d.x, d.y, d.theta});
  Disturbance out = d;
  out.x = q.x;
  out.y = q.y;
  out.theta = q.theta;
  return out;
}

inline Disturbance to_fixed_frame(const Pose2& robot, const Disturbance& d) {
  const Pose2 q = to_fixed_frame(robot, Pose2{d.x, d.y, d.theta});
  Disturbance out = d;
  out.x = q.x;
  out.y = q.y;
  out.theta = q.theta;
  return out;
}

/// Rigid-transform shift of a disturbance description when the reference
/// pose moves from `from` to `to` (both fixed-frame): the disturbance
/// keeps its place in the world, only its relative expression changes.
inline Disturbance shift(const Pose2& from, const Pose2& to,
                         const Disturbance& d_rel_from) {
  return to_moving_frame(to, to_fixed_frame(from, d_rel_from));
}

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct RobotInCollision : Error {
  RobotInCollision() : Error("robot overlaps scenario geometry") {}
};
struct InvalidTask : Error {
  explicit InvalidTask(const std::string& w) : Error("invalid task: " + w) {}
};
struct NoGoal : Error {
  NoGoal() : Error("operation requires a goal disturbance") {}
};
struct UndefinedReset : Error {
  UndefinedReset() : Error("reset undefined for a collided disturbance") {}
};
struct NotSplittable : Error {
  NotSplittable() : Error("only straight-drive states can be split") {}
};
struct StateSpaceExhausted : Error {
  StateSpaceExhausted() : Error("state cap reached before the goal was found") {}
};
struct NoPlan : Error {
  NoPlan() : Error("no admissible plan in the cognitive map") {}
};

}  // namespace taskplan

#endif  // TASKPLAN_GEOMETRY_HPP
