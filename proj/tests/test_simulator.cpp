// Tests for the task simulator: integration step counts, the stop-
// condition order (contact, invariant, window release, horizon,
// truncation, looming entry), filter regions, and the attention window.
// Expected step counts are derived by hand from the 0.02 m step length
// and the scene geometry.

#include "taskplan/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace taskplan {
namespace {

Disturbance box(double x, double y, double w, double l,
                DisturbanceKind kind = DisturbanceKind::ObstacleLooming) {
  Disturbance d;
  d.x = x;
  d.y = y;
  d.w = w;
  d.l = l;
  d.kind = kind;
  return d;
}

World empty_world(const Pose2& pose) {
  World w;
  w.robot_pose = pose;
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// Straight driving

TEST(Simulator, DefaultStraightRunsToHorizonInFiftySteps) {
  // 0.2 m/s for 0.1 s steps is 0.02 m per step; the 1 m horizon is hit at
  // step 50 exactly.
  const SimConfig cfg;
  const SimResult res = simulate_task(empty_world({0.0, 0.0, 0.0}),
                                      {ControlMode::StraightDefault, {}}, cfg);
  EXPECT_EQ(res.end, TaskEnd::Horizon);
  EXPECT_EQ(res.n_steps, 50);
  EXPECT_NEAR(res.end_pose.x, 1.0, 1e-9);
  EXPECT_NEAR(res.end_pose.y, 0.0, 1e-12);
  EXPECT_NEAR(res.distance, 1.0, 1e-9);
  EXPECT_EQ(res.trajectory.size(), 51u);  // start pose plus every step
}

TEST(Simulator, HorizonIsMeasuredFromTheGivenOrigin) {
  // Starting halfway out with the world centre pinned at the origin, the
  // horizon arrives after only 0.5 m of travel.
  const SimConfig cfg;
  SimOptions opts;
  opts.origin = Pose2{0.0, 0.0, 0.0};
  const SimResult res = simulate_task(empty_world({0.5, 0.0, 0.0}),
                                      {ControlMode::StraightDefault, {}}, cfg, opts);
  EXPECT_EQ(res.end, TaskEnd::Horizon);
  EXPECT_EQ(res.n_steps, 25);
  EXPECT_NEAR(res.end_pose.x, 1.0, 1e-9);
}

TEST(Simulator, StraightIntoWallCollides) {
  // Wall face at x = 0.70; the footprint's nose leads the COM by 0.085 m,
  // so contact falls at COM x >= 0.615, first reached at step 31 (0.62).
  const SimConfig cfg;
  World world = empty_world({0.0, 0.0, 0.0});
  world.obstacles.push_back(box(0.75, 0.0, 0.1, 1.0));
  const SimResult res =
      simulate_task(world, {ControlMode::StraightDefault, {}}, cfg);
  EXPECT_EQ(res.end, TaskEnd::Collided);
  EXPECT_EQ(res.n_steps, 31);
  EXPECT_NEAR(res.end_pose.x, 0.62, 1e-9);
  ASSERT_TRUE(res.d_new.has_value());
  EXPECT_EQ(res.d_new->kind, DisturbanceKind::ObstacleCollided);
  EXPECT_NEAR(res.d_new->x, 0.75, 1e-12);
}

TEST(Simulator, ContactPoseOverlapsAndPreviousPoseDoesNot) {
  const SimConfig cfg;
  World world = empty_world({0.0, 0.0, 0.0});
  world.obstacles.push_back(box(0.75, 0.0, 0.1, 1.0));
  const SimResult res =
      simulate_task(world, {ControlMode::StraightDefault, {}}, cfg);
  ASSERT_GE(res.trajectory.size(), 2u);
  const OrientedRect body = rect_of(world.obstacles[0]);
  const Pose2& last = res.trajectory.back();
  const Pose2& prev = res.trajectory[res.trajectory.size() - 2];
  EXPECT_TRUE(obb_overlap(robot_footprint(last, cfg.robot), body));
  EXPECT_FALSE(obb_overlap(robot_footprint(prev, cfg.robot), body));
}

TEST(Simulator, TargetsNeverCollide) {
  const SimConfig cfg;
  World world = empty_world({0.0, 0.0, 0.0});
  world.obstacles.push_back(box(0.3, 0.0, 0.1, 0.1, DisturbanceKind::Target));
  const SimResult res =
      simulate_task(world, {ControlMode::StraightDefault, {}}, cfg);
  EXPECT_EQ(res.end, TaskEnd::Horizon);
  EXPECT_EQ(res.n_steps, 50);
}

TEST(Simulator, TargetWatchingStraightStopsShortOfTheTarget) {
  // Target 1 m down the moving x axis: driving ends when at most 0.05 m of
  // forward offset remains, i.e. at 0.96 m after 48 steps.
  const SimConfig cfg;
  TaskSpec task{ControlMode::StraightContingent,
                box(1.0, 0.0, 0.1, 0.1, DisturbanceKind::Target)};
  const SimResult res = simulate_task(empty_world({0.0, 0.0, 0.0}), task, cfg);
  EXPECT_EQ(res.end, TaskEnd::TargetReached);
  EXPECT_EQ(res.n_steps, 48);
  EXPECT_NEAR(res.end_pose.x, 0.96, 1e-9);
}

TEST(Simulator, TruncationCutsStraightsAtTheRequestedTravel) {
  const SimConfig cfg;
  SimOptions opts;
  opts.truncate_at = 0.5;
  SimResult res = simulate_task(empty_world({0.0, 0.0, 0.0}),
                                {ControlMode::StraightDefault, {}}, cfg, opts);
  EXPECT_EQ(res.end, TaskEnd::Truncated);
  EXPECT_EQ(res.n_steps, 25);
  EXPECT_NEAR(res.distance, 0.5, 1e-9);

  // A bound that is not a step multiple is overshot by part of a step.
  opts.truncate_at = 0.27;
  res = simulate_task(empty_world({0.0, 0.0, 0.0}),
                      {ControlMode::StraightDefault, {}}, cfg, opts);
  EXPECT_EQ(res.end, TaskEnd::Truncated);
  EXPECT_EQ(res.n_steps, 14);
  EXPECT_NEAR(res.distance, 0.28, 1e-9);
}

TEST(Simulator, StepCapEndsRunawayTasks) {
  SimConfig cfg;
  cfg.step_cap = 5;
  // An obstacle-watching straight has no invariant of its own and the
  // horizon is far, so the cap is what stops it.
  TaskSpec task{ControlMode::StraightContingent, box(5.0, 0.0, 0.1, 0.1)};
  cfg.horizon = 100.0;
  const SimResult res = simulate_task(empty_world({0.0, 0.0, 0.0}), task, cfg);
  EXPECT_EQ(res.end, TaskEnd::StepCap);
  EXPECT_EQ(res.n_steps, 5);
}

// ---------------------------------------------------------------------------
// Turning

TEST(Simulator, QuarterTurnsTakeTwentyStepsAndHoldPosition) {
  const SimConfig cfg;
  const SimResult left = simulate_task(empty_world({0.3, -0.2, 0.0}),
                                       {ControlMode::TurnLeft, {}}, cfg);
  EXPECT_EQ(left.end, TaskEnd::TurnComplete);
  EXPECT_EQ(left.n_steps, 20);
  EXPECT_NEAR(left.end_pose.theta, kPi / 2, 1e-9);
  EXPECT_NEAR(left.end_pose.x, 0.3, 1e-12);
  EXPECT_NEAR(left.end_pose.y, -0.2, 1e-12);
  EXPECT_NEAR(left.angle, kPi / 2, 1e-9);
  EXPECT_NEAR(left.distance, 0.0, 1e-12);

  const SimResult right = simulate_task(empty_world({0.0, 0.0, kPi / 2}),
                                        {ControlMode::TurnRight, {}}, cfg);
  EXPECT_EQ(right.end, TaskEnd::TurnComplete);
  EXPECT_NEAR(right.end_pose.theta, 0.0, 1e-9);
}

TEST(Simulator, TurnSweepHitsAWallAhead) {
  // The front corners sweep a circle of radius hypot(0.085, 0.09) = 0.1238
  // about the COM. A wall face at x = 0.10 lies inside it: the left turn
  // makes contact part-way round. A face at x = 0.13 lies outside it and
  // the turn completes.
  const SimConfig cfg;
  World hit = empty_world({0.0, 0.0, 0.0});
  hit.obstacles.push_back(box(0.15, 0.0, 0.1, 1.0));  // face at x = 0.10
  const SimResult collided = simulate_task(hit, {ControlMode::TurnLeft, {}}, cfg);
  EXPECT_EQ(collided.end, TaskEnd::Collided);
  EXPECT_LT(collided.n_steps, 20);

  World clear = empty_world({0.0, 0.0, 0.0});
  clear.obstacles.push_back(box(0.18, 0.0, 0.1, 1.0));  // face at x = 0.13
  const SimResult clean = simulate_task(clear, {ControlMode::TurnLeft, {}}, cfg);
  EXPECT_EQ(clean.end, TaskEnd::TurnComplete);
  EXPECT_EQ(clean.n_steps, 20);
}

TEST(Simulator, TurnSweepHitsAWallBeside) {
  // The rear corners sweep hypot(0.185, 0.09) = 0.20573 about the COM and
  // swing toward the outside of the turn. Turning left, the rear-right
  // corner dips to y = -0.20573, so a wall face at y = -0.15 is struck
  // even though the resting footprint only reaches y = -0.09.
  const SimConfig cfg;
  World world = empty_world({0.0, 0.0, 0.0});
  world.obstacles.push_back(box(0.0, -0.2, 1.0, 0.1));  // face at y = -0.15
  const SimResult res = simulate_task(world, {ControlMode::TurnLeft, {}}, cfg);
  EXPECT_EQ(res.end, TaskEnd::Collided);

  // Beyond the body sweep but inside the reach of the rotating watch
  // region: its y-support grows as 0.195 (|cos| + |sin|), passing 0.21
  // at the second step (9 degrees, 0.2231), so the wall face at y = -0.21
  // enters the region and the turn ends as Looming without a touch.
  World near = empty_world({0.0, 0.0, 0.0});
  near.obstacles.push_back(box(0.0, -0.26, 1.0, 0.1));
  const SimResult loom = simulate_task(near, {ControlMode::TurnLeft, {}}, cfg);
  EXPECT_EQ(loom.end, TaskEnd::Looming);
  EXPECT_EQ(loom.n_steps, 2);

  // Clear of both the sweep and the region's diagonal reach
  // 0.195 * sqrt(2) = 0.2758 at y = -0.30.
  World clear = empty_world({0.0, 0.0, 0.0});
  clear.obstacles.push_back(box(0.0, -0.35, 1.0, 0.1));
  const SimResult clean = simulate_task(clear, {ControlMode::TurnLeft, {}}, cfg);
  EXPECT_EQ(clean.end, TaskEnd::TurnComplete);
  EXPECT_EQ(clean.n_steps, 20);
}

// ---------------------------------------------------------------------------
// Filter regions and looming entry

TEST(Simulator, RegionShapes) {
  const SimConfig cfg;
  // Turn: a square covering the turning circle.
  const LocalRegion turn = region_for(ControlMode::TurnLeft, std::nullopt, cfg);
  EXPECT_NEAR(turn.half_x, 0.195, 1e-12);
  EXPECT_NEAR(turn.half_y, 0.195, 1e-12);
  EXPECT_NEAR(turn.center.x, 0.0, 1e-12);

  // Default straight: a corridor one horizon long.
  const LocalRegion lane =
      region_for(ControlMode::StraightDefault, std::nullopt, cfg);
  EXPECT_NEAR(lane.center.x, 0.5, 1e-12);
  EXPECT_NEAR(lane.half_x, 0.5, 1e-12);
  EXPECT_NEAR(lane.half_y, 0.1, 1e-12);

  // Obstacle-watching straight: long enough to cover the obstacle's
  // forward extent plus one robot width. Extent 0.5 -> length 0.68.
  const LocalRegion watch = region_for(
      ControlMode::StraightContingent,
      std::optional<Disturbance>(box(0.4, 0.0, 0.2, 0.1)), cfg);
  EXPECT_NEAR(watch.center.x, 0.34, 1e-12);
  EXPECT_NEAR(watch.half_x, 0.34, 1e-12);
  EXPECT_NEAR(watch.half_y, 0.1, 1e-12);

  // Target-watching straight uses the full corridor.
  const LocalRegion target_watch = region_for(
      ControlMode::StraightContingent,
      std::optional<Disturbance>(box(0.4, 0.0, 0.2, 0.1, DisturbanceKind::Target)),
      cfg);
  EXPECT_NEAR(target_watch.half_x, 0.5, 1e-12);
}

TEST(Simulator, BodyEnteringTheRidingRegionEndsTheTaskAsLooming) {
  // A watching straight with nothing watched uses the horizon-long
  // corridor [0, 1] x [-0.1, 0.1]. A body whose near face sits at x = 1.15
  // is outside it at the start; the corridor rides with the robot and
  // first touches the body (closed overlap) at COM x = 0.16, step 8.
  const SimConfig cfg;
  World world = empty_world({0.0, 0.0, 0.0});
  world.obstacles.push_back(box(1.2, 0.0, 0.1, 0.1));
  TaskSpec task{ControlMode::StraightContingent, std::nullopt};
  const SimResult res = simulate_task(world, task, cfg);
  EXPECT_EQ(res.end, TaskEnd::Looming);
  EXPECT_EQ(res.n_steps, 8);
  ASSERT_TRUE(res.d_new.has_value());
  EXPECT_EQ(res.d_new->kind, DisturbanceKind::ObstacleLooming);
}

TEST(Simulator, BodiesInsideTheRegionAtStartDoNotTriggerLooming) {
  // The same kind of body already inside the corridor at the start: the
  // task runs to contact instead (front face 0.85, nose lead 0.085, so
  // contact at COM x = 0.77 after 39 steps).
  const SimConfig cfg;
  World world = empty_world({0.0, 0.0, 0.0});
  world.obstacles.push_back(box(0.9, 0.0, 0.1, 0.1));
  TaskSpec task{ControlMode::StraightContingent, std::nullopt};
  const SimResult res = simulate_task(world, task, cfg);
  EXPECT_EQ(res.end, TaskEnd::Collided);
  EXPECT_EQ(res.n_steps, 39);
}

// ---------------------------------------------------------------------------
// Attention window

TEST(Simulator, WindowIsTheHullOfFootprintAndGoal) {
  // Goal 1 m ahead of a robot at the origin: the window spans x in
  // [-0.185, 1.05] and y in [-0.09, 0.09] in body coordinates.
  const RobotModel robot;
  const LocalRegion w =
      make_attention_window({0.0, 0.0, 0.0}, robot,
                            box(1.0, 0.0, 0.1, 0.1, DisturbanceKind::Target));
  EXPECT_NEAR(w.center.x - w.half_x, -0.185, 1e-12);
  EXPECT_NEAR(w.center.x + w.half_x, 1.05, 1e-12);
  EXPECT_NEAR(w.center.y - w.half_y, -0.09, 1e-12);
  EXPECT_NEAR(w.center.y + w.half_y, 0.09, 1e-12);
}

TEST(Simulator, InViewChecksTheCarriedWindow) {
  const RobotModel robot;
  const Disturbance goal = box(1.0, 0.0, 0.1, 0.1, DisturbanceKind::Target);
  const LocalRegion w = make_attention_window({0.0, 0.0, 0.0}, robot, goal);
  EXPECT_TRUE(in_view(w, {0.0, 0.0, 0.0}, box(0.5, 0.0, 0.1, 0.1)));
  EXPECT_FALSE(in_view(w, {0.0, 0.0, 0.0}, box(0.5, 0.5, 0.1, 0.1)));
  // The window rides with the robot: once it has moved on, the same body
  // falls outside.
  EXPECT_FALSE(in_view(w, {0.0, 1.0, kPi / 2}, box(0.5, 0.0, 0.1, 0.1)));
}

TEST(Simulator, SidestepReleasesTheWatchedObstacleFromTheWindow) {
  // Robot at the origin facing +y, goal 1 m down fixed x, watched box at
  // (0.5, 0). Driving up, the box leaves the trailing window edge once the
  // COM passes y = 0.235, first on the step grid at y = 0.24 (step 12).
  const SimConfig cfg;
  World world = empty_world({0.0, 0.0, kPi / 2});
  world.obstacles.push_back(box(0.5, 0.0, 0.1, 0.1));
  world.goal = box(1.0, 0.0, 0.1, 0.1, DisturbanceKind::Target);

  const Disturbance watched =
      to_moving_frame(world.robot_pose, world.obstacles[0]);
  TaskSpec task{ControlMode::StraightContingent, watched};
  SimOptions opts;
  opts.window_release = true;
  const SimResult res = simulate_task(world, task, cfg, opts);
  EXPECT_EQ(res.end, TaskEnd::WindowReleased);
  EXPECT_EQ(res.n_steps, 12);
  EXPECT_NEAR(res.end_pose.y, 0.24, 1e-9);
  EXPECT_NEAR(res.end_pose.x, 0.0, 1e-12);
}

TEST(Simulator, WindowReleaseNeedsTheOptionAndAGoal) {
  const SimConfig cfg;
  World world = empty_world({0.0, 0.0, kPi / 2});
  world.obstacles.push_back(box(0.5, 0.0, 0.1, 0.1));
  world.goal = box(1.0, 0.0, 0.1, 0.1, DisturbanceKind::Target);
  const Disturbance watched =
      to_moving_frame(world.robot_pose, world.obstacles[0]);
  TaskSpec task{ControlMode::StraightContingent, watched};

  // Without the option the drive runs to the horizon.
  SimResult res = simulate_task(world, task, cfg);
  EXPECT_EQ(res.end, TaskEnd::Horizon);

  // Without a goal there is no window to release from.
  World no_goal = world;
  no_goal.goal.reset();
  SimOptions opts;
  opts.window_release = true;
  res = simulate_task(no_goal, task, cfg, opts);
  EXPECT_EQ(res.end, TaskEnd::Horizon);
}

TEST(Simulator, NaturalEndClassification) {
  EXPECT_TRUE(is_natural(TaskEnd::TurnComplete));
  EXPECT_TRUE(is_natural(TaskEnd::TargetReached));
  EXPECT_TRUE(is_natural(TaskEnd::WindowReleased));
  EXPECT_TRUE(is_natural(TaskEnd::Horizon));
  EXPECT_TRUE(is_natural(TaskEnd::StepCap));
  EXPECT_FALSE(is_natural(TaskEnd::Collided));
  EXPECT_FALSE(is_natural(TaskEnd::Looming));
  EXPECT_FALSE(is_natural(TaskEnd::Truncated));
}

}  // namespace taskplan
