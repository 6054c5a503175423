#ifndef TASKPLAN_HARNESS_HPP
#define TASKPLAN_HARNESS_HPP

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "taskplan/planner.hpp"
#include "taskplan/scenario.hpp"

namespace taskplan {

/// Knobs of the experiment harness on top of the planner's own.
struct ExperimentConfig {
  PlannerConfig planner{};
  int n_beams{360};
  double scan_noise_std{0.0};
  int repetitions{3};
  double travel_cap_factor{4.0};  ///< reactive runs stop after this many horizons
  int iteration_cap{60};          ///< reactive sense-act iterations
};

/// Everything recorded about one run. planning_time_s is wall-clock and
/// is deliberately kept out of the deterministic serialised output.
struct RunRecord {
  std::string scenario;
  Strategy strategy{Strategy::Direct};
  int variant{0};
  int repetition{0};
  unsigned seed{0};
  int n_states{0};
  int n_objects{0};
  int n_iterations{0};  ///< reactive sense-act cycles; 0 for planned runs
  bool plan_found{false};
  bool success{false};
  bool collided{false};
  bool entered_avoid_region{false};
  double travel{0.0};
  Pose2 final_pose{};
  double planning_time_s{0.0};
  std::optional<CognitiveMap> map;
  std::optional<Plan> plan;
  std::vector<Pose2> trajectory;
};

/// Outcome of driving one task open-loop against ground truth.
struct ExecResult {
  std::vector<Pose2> trajectory;  ///< poses after each step (start excluded)
  Pose2 end;
  bool collided{false};
  int n_steps{0};
  double distance{0.0};
};

/// Drive `mode` for n_steps from `start`, stopping early only on
/// contact with one of `bodies`.
inline ExecResult execute_task(const Pose2& start, ControlMode mode, int n_steps,
                               const std::vector<OrientedRect>& bodies,
                               const SimConfig& cfg) {
  const VelocityCommand v = flow(mode, cfg.robot);
  ExecResult res;
  res.end = start;
  Pose2 pose = start;
  for (int k = 1; k <= n_steps; ++k) {
    pose.x += v.linear * cfg.step * std::cos(pose.theta);
    pose.y += v.linear * cfg.step * std::sin(pose.theta);
    pose.theta = normalize_angle(pose.theta + v.angular * cfg.step);
    res.trajectory.push_back(pose);
    res.end = pose;
    res.n_steps = k;
    res.distance += std::abs(v.linear) * cfg.step;
    const OrientedRect foot = robot_footprint(pose, cfg.robot);
    for (const OrientedRect& b : bodies) {
      if (obb_overlap(foot, b)) {
        res.collided = true;
        return res;
      }
    }
  }
  return res;
}

namespace detail {

inline int steps_for_distance(double dist, const SimConfig& cfg) {
  return static_cast<int>(
      std::ceil((dist - 1e-9) / (cfg.robot.linear_speed * cfg.step)));
}

inline int steps_for_quarter_turn(const SimConfig& cfg) {
  return static_cast<int>(
      std::ceil((kPi / 2.0 - 1e-9) / (cfg.robot.angular_speed * cfg.step)));
}

/// Scan-and-cluster view of the world from one pose, restricted to the
/// straight-ahead corridor. Returns the perceived world and counts its
/// bodies the same way planned tasks do.
inline World perceive_ahead(const ScenarioSpec& scenario, const Pose2& pose,
                            const ExperimentConfig& cfg, unsigned seed,
                            int& n_bodies) {
  std::vector<OrientedRect> rects;
  for (const OrientedRect& r : scenario.obstacles) rects.push_back(r);
  const ScanConfig scan{cfg.n_beams, cfg.planner.sim.horizon,
                        cfg.scan_noise_std, seed};
  const PointCloud cloud = synthesize_scan(pose, rects, scan);
  const FilterRegion region{
      region_for(ControlMode::StraightContingent, std::nullopt, cfg.planner.sim)
          .at(pose)};
  const PointCloud kept = filter_points(cloud, region);

  World world;
  world.robot_pose = pose;
  world.goal = scenario.goal;
  for (const std::vector<int>& group :
       cluster_points(kept, cfg.planner.sim.cluster_eps)) {
    PointCloud members;
    for (int i : group) members.push_back(kept[i]);
    world.obstacles.push_back(
        bbox_disturbance(members, pose, DisturbanceKind::ObstacleLooming));
  }
  n_bodies =
      static_cast<int>(world.obstacles.size()) + (scenario.goal ? 1 : 0);
  return world;
}

}  // namespace detail

/// Sense-act baseline: no map. Each iteration scans, probes one straight
/// sub-task ahead on the perceived world, and either drives it or turns
/// away from the predicted contact; with the goal dead ahead or behind
/// it turns toward the goal instead of driving past it.
inline RunRecord run_reactive(const ScenarioSpec& scenario, int variant,
                              unsigned seed, const ExperimentConfig& cfg) {
  RunRecord rec;
  rec.scenario = scenario.name;
  rec.strategy = Strategy::Reactive;
  rec.variant = variant;
  rec.seed = seed;

  const SimConfig& sim = cfg.planner.sim;
  std::vector<OrientedRect> truth;
  for (const OrientedRect& r : scenario.obstacles) truth.push_back(r);

  Pose2 pose = scenario.start(variant);
  rec.trajectory.push_back(pose);
  const double travel_cap = cfg.travel_cap_factor * sim.horizon;

  for (int iter = 0; iter < cfg.iteration_cap; ++iter) {
    if (scenario.goal && (pose.position() - scenario.goal->position()).norm() <=
                             cfg.planner.goal_tol) {
      rec.success = true;
      break;
    }
    if (rec.travel >= travel_cap) break;
    rec.n_iterations = iter + 1;

    int n_bodies = 0;
    const World seen = detail::perceive_ahead(scenario, pose, cfg, seed, n_bodies);
    rec.n_objects += n_bodies;
    SimOptions probe_opts;
    probe_opts.truncate_at = scenario.d_sub;
    const SimResult probe = simulate_task(
        seen, {ControlMode::StraightContingent, std::nullopt}, sim, probe_opts);

    std::optional<ControlMode> turn;
    if (probe.end == TaskEnd::Collided) {
      const double y = to_moving_frame(pose, *probe.d_new).y;
      turn = y > 1e-12 ? ControlMode::TurnRight : ControlMode::TurnLeft;
    } else if (scenario.goal) {
      const Disturbance g = to_moving_frame(pose, *scenario.goal);
      if (g.x <= kTargetReachTol) {
        turn = g.y > 1e-12 ? ControlMode::TurnLeft : ControlMode::TurnRight;
      }
    }

    ExecResult exec =
        turn ? execute_task(pose, *turn, detail::steps_for_quarter_turn(sim),
                            truth, sim)
             : execute_task(pose, ControlMode::StraightContingent,
                            detail::steps_for_distance(scenario.d_sub, sim),
                            truth, sim);
    rec.trajectory.insert(rec.trajectory.end(), exec.trajectory.begin(),
                          exec.trajectory.end());
    rec.travel += exec.distance;
    pose = exec.end;
    if (exec.collided) {
      rec.collided = true;
      break;
    }
  }

  rec.final_pose = pose;
  if (scenario.goal) {
    rec.success = !rec.collided &&
                  (pose.position() - scenario.goal->position()).norm() <=
                      cfg.planner.goal_tol;
  }
  if (scenario.avoid_region) {
    for (const Pose2& p : rec.trajectory) {
      if (rect_contains(*scenario.avoid_region, p.position()))
        rec.entered_avoid_region = true;
    }
    rec.success = !rec.collided && !rec.entered_avoid_region;
  }
  return rec;
}

/// Plan once from the start pose, then drive the plan open-loop against
/// ground truth and judge the outcome.
inline RunRecord run_planned(const ScenarioSpec& scenario, Strategy strategy,
                             int variant, unsigned seed,
                             const ExperimentConfig& cfg_in) {
  RunRecord rec;
  rec.scenario = scenario.name;
  rec.strategy = strategy;
  rec.variant = variant;
  rec.seed = seed;

  ExperimentConfig cfg = cfg_in;
  cfg.planner.d_sub = scenario.d_sub;
  const SimConfig& sim = cfg.planner.sim;

  std::vector<OrientedRect> truth;
  for (const OrientedRect& r : scenario.obstacles) truth.push_back(r);
  const Pose2 start = scenario.start(variant);
  const ScanConfig scan{cfg.n_beams, sim.horizon, cfg.scan_noise_std, seed};
  const PointCloud cloud = synthesize_scan(start, truth, scan);

  const auto t0 = std::chrono::steady_clock::now();
  rec.map = synthesize(cloud, start, scenario.goal, strategy, cfg.planner);
  try {
    rec.plan = extract_plan(*rec.map, scenario.goal, cfg.planner);
    rec.plan_found = true;
  } catch (const NoPlan&) {
    rec.plan_found = false;
  }
  rec.planning_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  rec.n_states = static_cast<int>(rec.map->states.size());
  rec.n_objects = rec.map->total_objects;

  Pose2 pose = start;
  rec.trajectory.push_back(pose);
  if (rec.plan_found) {
    for (const PlanTask& task : rec.plan->tasks) {
      ExecResult exec = execute_task(pose, task.mode, task.n_steps, truth, sim);
      rec.trajectory.insert(rec.trajectory.end(), exec.trajectory.begin(),
                            exec.trajectory.end());
      rec.travel += exec.distance;
      pose = exec.end;
      if (exec.collided) {
        rec.collided = true;
        break;
      }
    }
  }
  rec.final_pose = pose;

  if (scenario.goal) {
    rec.success = rec.plan_found && !rec.collided &&
                  (pose.position() - scenario.goal->position()).norm() <=
                      cfg.planner.goal_tol;
  }
  if (scenario.avoid_region) {
    for (const Pose2& p : rec.trajectory) {
      if (rect_contains(*scenario.avoid_region, p.position()))
        rec.entered_avoid_region = true;
    }
    rec.success = rec.plan_found && !rec.collided && !rec.entered_avoid_region;
  }
  return rec;
}

/// One run of any strategy.
inline RunRecord run_experiment(const ScenarioSpec& scenario, Strategy strategy,
                                int variant, unsigned seed,
                                const ExperimentConfig& cfg) {
  if (strategy == Strategy::Reactive)
    return run_reactive(scenario, variant, seed, cfg);
  return run_planned(scenario, strategy, variant, seed, cfg);
}

/// Per (scenario, strategy) aggregate over runs. Deviations are
/// population standard deviations.
struct GroupSummary {
  std::string scenario;
  Strategy strategy{Strategy::Direct};
  int n_runs{0};
  double mean_objects{0.0}, sd_objects{0.0};
  double mean_states{0.0}, sd_states{0.0};
  double mean_time_s{0.0}, sd_time_s{0.0};
  bool any_plan{false};  ///< true for reactive groups as well
};

namespace detail {
inline void mean_sd(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= xs.size();
  for (double x : xs) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / xs.size());
}
}  // namespace detail

inline std::vector<GroupSummary> summarize(const std::vector<RunRecord>& runs) {
  std::vector<GroupSummary> groups;
  for (const RunRecord& r : runs) {
    GroupSummary* g = nullptr;
    for (GroupSummary& cand : groups) {
      if (cand.scenario == r.scenario && cand.strategy == r.strategy) g = &cand;
    }
    if (!g) {
      groups.push_back({r.scenario, r.strategy});
      g = &groups.back();
    }
    ++g->n_runs;
    if (r.strategy == Strategy::Reactive || r.plan_found) g->any_plan = true;
  }
  for (GroupSummary& g : groups) {
    std::vector<double> objects, states, times;
    for (const RunRecord& r : runs) {
      if (r.scenario != g.scenario || r.strategy != g.strategy) continue;
      objects.push_back(r.n_objects);
      states.push_back(r.n_states);
      times.push_back(r.planning_time_s);
    }
    detail::mean_sd(objects, g.mean_objects, g.sd_objects);
    detail::mean_sd(states, g.mean_states, g.sd_states);
    detail::mean_sd(times, g.mean_time_s, g.sd_time_s);
  }
  return groups;
}

/// Sample Pearson correlation coefficient of two equally long series.
inline double pearson(const std::vector<double>& xs,
                      const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw Error("pearson needs two equally long series of at least 2");
  const size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("pearson undefined for a constant series");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace taskplan

#endif  // TASKPLAN_HARNESS_HPP
