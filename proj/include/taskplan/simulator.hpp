#ifndef TASKPLAN_SIMULATOR_HPP
#define TASKPLAN_SIMULATOR_HPP

#include <optional>
#include <vector>

#include "taskplan/automaton.hpp"
#include "taskplan/geometry.hpp"
#include "taskplan/sensing.hpp"

namespace taskplan {

/// Simulation parameters shared by planning and rollout.
struct SimConfig {
  RobotModel robot{};
  double step{0.1};        ///< integration step [s]
  double horizon{1.0};     ///< radius of the known world [m]
  int step_cap{200};       ///< hard per-task step limit
  double cluster_eps{0.1}; ///< single-linkage distance for scan clusters [m]
};

/// World a task runs in: rectangular obstacles, the start pose of the
/// robot (centre of mass), and an optional goal. Obstacles with kind
/// Target never collide; the goal is kept separate and never collides.
struct World {
  std::vector<Disturbance> obstacles;
  Pose2 robot_pose;
  std::optional<Disturbance> goal;
};

/// Why a simulated task ended.
///  - TurnComplete / TargetReached: the mode invariant ran out.
///  - WindowReleased: the watched disturbance left the attention window.
///  - Horizon: the edge of the known world, or a full horizon of travel.
///  - StepCap: hard step limit.
///  - Collided: the footprint touched an obstacle.
///  - Looming: an obstacle outside the task's filter region entered it.
///  - Truncated: an externally imposed travel bound was reached.
enum class TaskEnd {
  TurnComplete,
  TargetReached,
  WindowReleased,
  Horizon,
  StepCap,
  Collided,
  Looming,
  Truncated,
};

inline const char* to_string(TaskEnd e) {
  switch (e) {
    case TaskEnd::TurnComplete: return "turn_complete";
    case TaskEnd::TargetReached: return "target_reached";
    case TaskEnd::WindowReleased: return "window_released";
    case TaskEnd::Horizon: return "horizon";
    case TaskEnd::StepCap: return "step_cap";
    case TaskEnd::Collided: return "collided";
    case TaskEnd::Looming: return "looming";
    case TaskEnd::Truncated: return "truncated";
  }
  return "?";
}

/// A task that ran to one of these ends completed on its own terms; the
/// other ends are interruptions.
inline bool is_natural(TaskEnd e) {
  switch (e) {
    case TaskEnd::TurnComplete:
    case TaskEnd::TargetReached:
    case TaskEnd::WindowReleased:
    case TaskEnd::Horizon:
    case TaskEnd::StepCap:
      return true;
    default:
      return false;
  }
}

/// Rectangle attached rigidly to the robot, stored in body coordinates
/// (x forward, y left, origin at the COM). at() places it in the fixed
/// frame for a given COM pose.
struct LocalRegion {
  Vec2 center{};
  double half_x{0.0};
  double half_y{0.0};

  OrientedRect at(const Pose2& pose) const {
    return {pose.position() + rotate(center, pose.theta), pose.theta, half_x,
            half_y};
  }
};

/// Filter region of a task, in body coordinates:
///  - straights watching nothing, or a target: a corridor one horizon
///    long and a little wider than the drive train;
///  - straights watching an obstacle: a corridor just long enough to
///    cover the obstacle's forward extent plus a robot width;
///  - turns: a square covering the turning circle.
inline LocalRegion region_for(ControlMode mode,
                              const std::optional<Disturbance>& d_initial,
                              const SimConfig& cfg) {
  if (is_turn(mode)) {
    return {{0.0, 0.0}, 0.195, 0.195};
  }
  if (mode == ControlMode::StraightContingent && d_initial &&
      d_initial->is_obstacle()) {
    double forward = 0.0;
    for (const Vec2& c : rect_of(*d_initial).corners())
      forward = std::max(forward, c.x);
    const double r_d = forward + cfg.robot.width;
    return {{r_d / 2.0, 0.0}, r_d / 2.0, 0.1};
  }
  return {{cfg.horizon / 2.0, 0.0}, cfg.horizon / 2.0, 0.1};
}

/// Attention window of a task: bounding box, in body coordinates at the
/// task's start, of the robot footprint and the goal. Frozen at birth
/// and carried rigidly from then on.
inline LocalRegion make_attention_window(const Pose2& start,
                                         const RobotModel& robot,
                                         const Disturbance& goal) {
  const Disturbance g = to_moving_frame(start, goal);
  double lo_x = -(robot.length / 2.0 + robot.com_offset);
  double hi_x = robot.length / 2.0 - robot.com_offset;
  double lo_y = -robot.width / 2.0;
  double hi_y = robot.width / 2.0;
  for (const Vec2& c : rect_of(g).corners()) {
    lo_x = std::min(lo_x, c.x);
    hi_x = std::max(hi_x, c.x);
    lo_y = std::min(lo_y, c.y);
    hi_y = std::max(hi_y, c.y);
  }
  return {{(lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0}, (hi_x - lo_x) / 2.0,
          (hi_y - lo_y) / 2.0};
}

/// Whether a fixed-frame disturbance overlaps the window carried by a
/// robot at `pose`. Touching counts as in view.
inline bool in_view(const LocalRegion& window, const Pose2& pose,
                    const Disturbance& d_fixed) {
  return obb_overlap(window.at(pose), rect_of(d_fixed));
}

/// Place a disturbance described in the body frame of `start` into the
/// fixed frame.
inline Disturbance reconstruct_disturbance(const Pose2& start,
                                           const Disturbance& d_moving) {
  return to_fixed_frame(start, d_moving);
}

/// Extra controls for one simulation.
struct SimOptions {
  std::optional<double> truncate_at;  ///< stop after this much travel [m]
  bool window_release{false};  ///< end obstacle-watching straights when the
                               ///< obstacle leaves the attention window
  std::optional<Pose2> origin;  ///< centre of the known world; defaults to
                                ///< the task's start pose
};

/// Outcome of one simulated task. d_new is the interrupting disturbance
/// in the fixed frame, set only for Collided and Looming ends. The
/// trajectory includes the start pose and every integrated step,
/// including the contact pose on a collision.
struct SimResult {
  Pose2 end_pose;
  int n_steps{0};
  TaskEnd end{TaskEnd::StepCap};
  std::optional<Disturbance> d_new;
  std::vector<Pose2> trajectory;
  double distance{0.0};  ///< path length [m]
  double angle{0.0};     ///< unsigned angle turned [rad]
};

/// Run one task forward from world.robot_pose until a stop condition
/// fires. task.d_initial is given in the body frame of the start pose.
/// Checks, in order, per step: contact, mode invariant, attention-window
/// release, horizon, truncation, looming entry.
inline SimResult simulate_task(const World& world, const TaskSpec& task,
                               const SimConfig& cfg,
                               const SimOptions& opts = {}) {
  const Pose2 start = world.robot_pose;
  const Pose2 origin = opts.origin.value_or(start);
  const LocalRegion region = region_for(task.mode, task.d_initial, cfg);

  std::optional<LocalRegion> window;
  if (opts.window_release && task.mode == ControlMode::StraightContingent &&
      task.d_initial && task.d_initial->is_obstacle() && world.goal) {
    window = make_attention_window(start, cfg.robot, *world.goal);
  }
  std::optional<Disturbance> d_initial_fixed;
  if (task.d_initial)
    d_initial_fixed = reconstruct_disturbance(start, *task.d_initial);

  std::vector<const Disturbance*> solid;
  for (const Disturbance& d : world.obstacles)
    if (d.is_obstacle()) solid.push_back(&d);
  std::vector<bool> in_region_at_start(solid.size());
  for (size_t i = 0; i < solid.size(); ++i)
    in_region_at_start[i] = obb_overlap(region.at(start), rect_of(*solid[i]));

  const VelocityCommand v = flow(task.mode, cfg.robot);

  SimResult res;
  res.trajectory.push_back(start);
  Pose2 pose = start;
  TaskProgress prog{0.0, 0.0, pose};

  auto finish = [&](TaskEnd end, int k) {
    res.end_pose = pose;
    res.n_steps = k;
    res.end = end;
    res.distance = prog.distance;
    res.angle = prog.angle_turned;
    return res;
  };

  for (int k = 1; k <= cfg.step_cap; ++k) {
    pose.x += v.linear * cfg.step * std::cos(pose.theta);
    pose.y += v.linear * cfg.step * std::sin(pose.theta);
    pose.theta = normalize_angle(pose.theta + v.angular * cfg.step);
    prog.distance += std::abs(v.linear) * cfg.step;
    prog.angle_turned += std::abs(v.angular) * cfg.step;
    prog.pose = pose;
    res.trajectory.push_back(pose);

    const OrientedRect foot = robot_footprint(pose, cfg.robot);
    for (size_t i = 0; i < solid.size(); ++i) {
      if (obb_overlap(foot, rect_of(*solid[i]))) {
        res.d_new = *solid[i];
        res.d_new->kind = DisturbanceKind::ObstacleCollided;
        return finish(TaskEnd::Collided, k);
      }
    }
    if (!invariant_holds(task.mode, task.d_initial, prog)) {
      return finish(is_turn(task.mode) ? TaskEnd::TurnComplete
                                       : TaskEnd::TargetReached,
                    k);
    }
    if (window && d_initial_fixed && !in_view(*window, pose, *d_initial_fixed)) {
      return finish(TaskEnd::WindowReleased, k);
    }
    if (is_straight(task.mode)) {
      const double from_origin = (pose.position() - origin.position()).norm();
      if (from_origin >= cfg.horizon - 1e-9 ||
          prog.distance >= cfg.horizon - 1e-9) {
        return finish(TaskEnd::Horizon, k);
      }
    }
    if (opts.truncate_at && prog.distance >= *opts.truncate_at - 1e-9) {
      return finish(TaskEnd::Truncated, k);
    }
    for (size_t i = 0; i < solid.size(); ++i) {
      if (!in_region_at_start[i] &&
          obb_overlap(region.at(pose), rect_of(*solid[i]))) {
        res.d_new = *solid[i];
        res.d_new->kind = DisturbanceKind::ObstacleLooming;
        return finish(TaskEnd::Looming, k);
      }
    }
  }
  return finish(TaskEnd::StepCap, cfg.step_cap);
}

}  // namespace taskplan

#endif  // TASKPLAN_SIMULATOR_HPP
