#ifndef TASKPLAN_SCENARIO_HPP
#define TASKPLAN_SCENARIO_HPP

#include <string>
#include <vector>

#include "taskplan/geometry.hpp"

namespace taskplan {

/// Ground-truth description of an experiment: static rectangles, an
/// optional goal, and the start poses of the run variants. d_sub is the
/// sub-goal distance used by the reactive baseline and the splitting
/// strategies. avoid_region, when present, marks the area a successful
/// run must keep the robot's centre of mass out of.
struct ScenarioSpec {
  std::string name;
  std::vector<OrientedRect> obstacles;
  std::optional<Disturbance> goal;
  std::vector<Pose2> starts;
  double d_sub{0.5};
  std::optional<OrientedRect> avoid_region;

  const Pose2& start(int variant) const {
    if (variant < 0 || variant >= static_cast<int>(starts.size()))
      throw Error("variant out of range for scenario " + name);
    return starts[variant];
  }
};

/// Dead-end corridor: a three-sided pocket ahead of the robot, open side
/// facing it. Variants shift the start sideways. No goal is given; the
/// point of the run is to leave the pocket region, so success is judged
/// against avoid_region.
inline ScenarioSpec make_culdesac() {
  ScenarioSpec s;
  s.name = "culdesac";
  s.obstacles = {
      {{0.75, 0.0}, 0.0, 0.05, 0.50},   // back wall, inner face x=0.70
      {{0.50, 0.45}, 0.0, 0.30, 0.05},  // left wall, inner face y=0.40
      {{0.50, -0.45}, 0.0, 0.30, 0.05},  // right wall, inner face y=-0.40
  };
  s.goal = std::nullopt;
  s.starts = {{0.0, 0.0, 0.0}, {0.0, 0.1, 0.0}, {0.0, -0.1, 0.0}};
  s.d_sub = 0.5;
  s.avoid_region = OrientedRect{{0.45, 0.0}, 0.0, 0.25, 0.40};
  return s;
}

/// Overtaking: a box obstacle sits between the robot and a target, with
/// walls flanking the lane. Variants shift the start along the lane;
/// sideways shifts would move the goal off the post-turn axis and change
/// the reachable task structure, so depth is the variable here.
///
/// The box face (x=0.54) is placed so that, for every start, the turn
/// attempted at the first collided link's foothold begins with the box
/// corner outside the contingency square (> 0.195 away) but inside the
/// square's swept reach (< 0.195*sqrt(2)), so the turn aborts on looming.
/// Every synthesis is thereby forced through the turn at the run origin,
/// which is where the strategies diverge: step-bounded links walk to the
/// target in d_sub-sized hops, while collision-split runs cover it in a
/// single contingent drive.
inline ScenarioSpec make_overtaking() {
  ScenarioSpec s;
  s.name = "overtaking";
  s.obstacles = {
      {{0.61, 0.0}, 0.0, 0.07, 0.07},    // box blocking the lane, face x=0.54
      {{0.50, 0.65}, 0.0, 1.20, 0.05},   // left wall, inner face y=0.60
      {{0.50, -0.65}, 0.0, 1.20, 0.05},  // right wall, inner face y=-0.60
  };
  Disturbance goal;
  goal.x = 1.0;
  goal.y = 0.0;
  goal.theta = 0.0;
  goal.w = 0.1;
  goal.l = 0.1;
  goal.kind = DisturbanceKind::Target;
  s.goal = goal;
  s.starts = {{0.01, 0.0, 0.0}, {0.04, 0.0, 0.0}, {0.06, 0.0, 0.0}};
  s.d_sub = 0.27;
  s.avoid_region = std::nullopt;
  return s;
}

inline ScenarioSpec builtin_scenario(const std::string& name) {
  if (name == "culdesac") return make_culdesac();
  if (name == "overtaking") return make_overtaking();
  throw Error("unknown scenario: " + name);
}

}  // namespace taskplan

#endif  // TASKPLAN_SCENARIO_HPP
