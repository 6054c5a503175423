#ifndef TASKPLAN_AUTOMATON_HPP
#define TASKPLAN_AUTOMATON_HPP

#include <optional>
#include <utility>
#include <vector>

#include "taskplan/geometry.hpp"

namespace taskplan {

/// Discrete control modes of the task automaton.
///  - StraightContingent: drive straight while watching an initial
///    disturbance; ends when a target is reached or an obstacle's extent
///    is cleared.
///  - StraightDefault: drive straight with no initial disturbance; runs
///    to the planning horizon.
///  - TurnLeft / TurnRight: quarter turns in place.
enum class ControlMode { StraightContingent, StraightDefault, TurnLeft, TurnRight };

inline const char* to_string(ControlMode m) {
  switch (m) {
    case ControlMode::StraightContingent: return "straight_contingent";
    case ControlMode::StraightDefault: return "straight_default";
    case ControlMode::TurnLeft: return "turn_left";
    case ControlMode::TurnRight: return "turn_right";
  }
  return "?";
}

inline bool is_straight(ControlMode m) {
  return m == ControlMode::StraightContingent || m == ControlMode::StraightDefault;
}
inline bool is_turn(ControlMode m) { return !is_straight(m); }

/// Continuous state of a task: the disturbance it was created to handle
/// and the disturbance that interrupts it, both expressed in the task's
/// moving frame. Either may be absent.
struct ContinuousState {
  std::optional<Disturbance> d_initial;
  std::optional<Disturbance> d_new;
};

/// Body velocities commanded by a mode.
struct VelocityCommand {
  double linear{0.0};   // [m/s]
  double angular{0.0};  // [rad/s]
};

/// Flow function: velocities applied while a mode is active.
inline VelocityCommand flow(ControlMode m, const RobotModel& r) {
  switch (m) {
    case ControlMode::StraightContingent:
    case ControlMode::StraightDefault:
      return {r.linear_speed, 0.0};
    case ControlMode::TurnLeft:
      return {0.0, r.angular_speed};
    case ControlMode::TurnRight:
      return {0.0, -r.angular_speed};
  }
  return {};
}

/// A task to be simulated or executed: a mode plus the disturbance that
/// motivated it (moving frame at the task's start pose).
struct TaskSpec {
  ControlMode mode{ControlMode::StraightContingent};
  std::optional<Disturbance> d_initial;
};

/// Progress through a task, used by the invariant.
struct TaskProgress {
  double distance{0.0};       ///< path length driven so far [m]
  double angle_turned{0.0};   ///< unsigned angle turned so far [rad]
  Pose2 pose{};               ///< current COM pose, task frame
};

/// Longitudinal tolerance for "target reached" along the moving x axis.
inline constexpr double kTargetReachTol = 0.05;

/// Invariant of a mode: true while the task may keep running. Straights
/// watching a target end when the target's forward offset is used up;
/// turns end at a quarter circle. Default straights and straights
/// watching an obstacle run until an external stop (horizon, collision).
inline bool invariant_holds(ControlMode mode,
                            const std::optional<Disturbance>& d_initial,
                            const TaskProgress& prog) {
  switch (mode) {
    case ControlMode::StraightContingent:
      if (d_initial && d_initial->kind == DisturbanceKind::Target) {
        // d_initial is fixed in the task frame; progress eats its offset.
        return d_initial->x - prog.distance > kTargetReachTol;
      }
      return true;
    case ControlMode::StraightDefault:
      return true;
    case ControlMode::TurnLeft:
    case ControlMode::TurnRight:
      return prog.angle_turned < kPi / 2.0 - 1e-12;
  }
  return false;
}

/// Directed mode-switch edge.
struct Edge {
  ControlMode from;
  ControlMode to;
  bool operator==(const Edge&) const = default;
};

/// Edges leaving `from`, in canonical order. The order is part of the
/// planner's contract: successors are generated and numbered in this
/// order, so it pins tie-breaking.
inline std::vector<Edge> edges_from(ControlMode from) {
  using M = ControlMode;
  switch (from) {
    case M::StraightContingent:
      return {{from, M::StraightContingent},
              {from, M::TurnLeft},
              {from, M::TurnRight},
              {from, M::StraightDefault}};
    case M::StraightDefault:
      return {{from, M::StraightContingent},
              {from, M::TurnLeft},
              {from, M::TurnRight}};
    case M::TurnLeft:
    case M::TurnRight:
      return {{from, M::StraightContingent},
              {from, M::StraightDefault}};
  }
  return {};
}

/// Guard of an edge, evaluated on the end condition of the source task.
///  - No switch is permitted out of a collision (d_new collided).
///  - Switching to the default straight requires a clear view (no d_new).
///  - Leaving a turn requires the turn to have completed (or to have been
///    speculative: no initial disturbance) and a clear view.
inline bool guard_holds(const Edge& e, const ContinuousState& c,
                        bool source_completed_naturally) {
  const bool blocked = c.d_new && c.d_new->collided();
  if (blocked) return false;
  if (is_turn(e.from)) {
    if (c.d_new) return false;
    if (c.d_initial && !source_completed_naturally) return false;
    return true;
  }
  if (e.to == ControlMode::StraightDefault) return !c.d_new;
  return true;
}

/// Edges out of `from` whose guards pass, in canonical order.
inline std::vector<Edge> permitted_jumps(ControlMode from, const ContinuousState& c,
                                         bool source_completed_naturally) {
  std::vector<Edge> out;
  for (const Edge& e : edges_from(from)) {
    if (guard_holds(e, c, source_completed_naturally)) out.push_back(e);
  }
  return out;
}

}  // namespace taskplan

#endif  // TASKPLAN_AUTOMATON_HPP
