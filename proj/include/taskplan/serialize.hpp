#ifndef TASKPLAN_SERIALIZE_HPP
#define TASKPLAN_SERIALIZE_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "taskplan/harness.hpp"
#include "taskplan/planner.hpp"
#include "taskplan/scenario.hpp"

namespace taskplan {

/// Key order is preserved so serialised output is stable byte for byte.
using Json = nlohmann::ordered_json;

inline Json to_json(const Pose2& p) {
  return Json{{"x", p.x}, {"y", p.y}, {"theta", p.theta}};
}

inline Json to_json(const Vec2& v) { return Json{{"x", v.x}, {"y", v.y}}; }

inline Json to_json(const Disturbance& d) {
  return Json{{"x", d.x}, {"y", d.y}, {"theta", d.theta},
              {"w", d.w}, {"l", d.l}, {"kind", to_string(d.kind)}};
}

inline Json to_json(const OrientedRect& r) {
  return Json{{"cx", r.center.x},
              {"cy", r.center.y},
              {"theta", r.theta},
              {"half_x", r.half_x},
              {"half_y", r.half_y}};
}

inline Json to_json(const PlanState& s) {
  Json j{{"id", s.id},
         {"mode", to_string(s.mode)},
         {"parent", s.parent ? Json(*s.parent) : Json(nullptr)},
         {"children", s.children},
         {"start", to_json(s.start)},
         {"end", to_json(s.end)},
         {"n_steps", s.n_steps},
         {"distance", s.distance},
         {"task_end", s.task_end ? Json(to_string(*s.task_end)) : Json(nullptr)},
         {"d_initial", s.d_initial ? to_json(*s.d_initial) : Json(nullptr)},
         {"d_new", s.d_new ? to_json(*s.d_new) : Json(nullptr)},
         {"gamma", s.gamma},
         {"chi", s.chi},
         {"phi", s.phi},
         {"psi", s.psi},
         {"objects", s.objects},
         {"simulated", s.simulated}};
  return j;
}

inline Json to_json(const CognitiveMap& m) {
  Json states = Json::array();
  for (const PlanState& s : m.states) states.push_back(to_json(s));
  return Json{{"root", m.root},
              {"states", states},
              {"pop_trace", m.pop_trace},
              {"goal_state", m.goal_state ? Json(*m.goal_state) : Json(nullptr)},
              {"total_objects", m.total_objects}};
}

inline Json to_json(const Plan& p) {
  Json tasks = Json::array();
  for (const PlanTask& t : p.tasks) {
    tasks.push_back(Json{{"state_id", t.state_id},
                         {"mode", to_string(t.mode)},
                         {"n_steps", t.n_steps},
                         {"n_motor", t.n_motor}});
  }
  return Json{{"state_ids", p.state_ids}, {"tasks", tasks},
              {"terminal", p.terminal}};
}

/// Wall-clock timing is left out on purpose: runs.json must be
/// bit-identical across repeated invocations.
inline Json to_json(const RunRecord& r) {
  Json traj = Json::array();
  for (const Pose2& p : r.trajectory) traj.push_back(to_json(p));
  return Json{{"scenario", r.scenario},
              {"strategy", static_cast<int>(r.strategy)},
              {"strategy_name", to_string(r.strategy)},
              {"variant", r.variant},
              {"repetition", r.repetition},
              {"seed", r.seed},
              {"n_states", r.n_states},
              {"n_objects", r.n_objects},
              {"n_iterations", r.n_iterations},
              {"plan_found", r.plan_found},
              {"success", r.success},
              {"collided", r.collided},
              {"entered_avoid_region", r.entered_avoid_region},
              {"travel", r.travel},
              {"final_pose", to_json(r.final_pose)},
              {"plan", r.plan ? to_json(*r.plan) : Json(nullptr)},
              {"map", r.map ? to_json(*r.map) : Json(nullptr)},
              {"trajectory", traj}};
}

inline Json to_json(const ScenarioSpec& s) {
  Json obstacles = Json::array();
  for (const OrientedRect& r : s.obstacles) obstacles.push_back(to_json(r));
  Json starts = Json::array();
  for (const Pose2& p : s.starts) starts.push_back(to_json(p));
  return Json{{"name", s.name},
              {"obstacles", obstacles},
              {"goal", s.goal ? to_json(*s.goal) : Json(nullptr)},
              {"starts", starts},
              {"d_sub", s.d_sub},
              {"avoid_region",
               s.avoid_region ? to_json(*s.avoid_region) : Json(nullptr)}};
}

inline Pose2 pose_from_json(const Json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(),
          j.at("theta").get<double>()};
}

inline OrientedRect rect_from_json(const Json& j) {
  return {{j.at("cx").get<double>(), j.at("cy").get<double>()},
          j.at("theta").get<double>(),
          j.at("half_x").get<double>(),
          j.at("half_y").get<double>()};
}

inline Disturbance disturbance_from_json(const Json& j) {
  Disturbance d;
  d.x = j.at("x").get<double>();
  d.y = j.at("y").get<double>();
  d.theta = j.at("theta").get<double>();
  d.w = j.at("w").get<double>();
  d.l = j.at("l").get<double>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "target") d.kind = DisturbanceKind::Target;
  else if (kind == "obstacle_collided") d.kind = DisturbanceKind::ObstacleCollided;
  else if (kind == "obstacle_looming") d.kind = DisturbanceKind::ObstacleLooming;
  else throw Error("unknown disturbance kind: " + kind);
  return d;
}

inline ScenarioSpec scenario_from_json(const Json& j) {
  ScenarioSpec s;
  s.name = j.at("name").get<std::string>();
  for (const Json& r : j.at("obstacles")) s.obstacles.push_back(rect_from_json(r));
  if (j.contains("goal") && !j.at("goal").is_null())
    s.goal = disturbance_from_json(j.at("goal"));
  for (const Json& p : j.at("starts")) s.starts.push_back(pose_from_json(p));
  s.d_sub = j.at("d_sub").get<double>();
  if (j.contains("avoid_region") && !j.at("avoid_region").is_null())
    s.avoid_region = rect_from_json(j.at("avoid_region"));
  return s;
}

/// Load a scenario by builtin name or from a JSON file.
inline ScenarioSpec load_scenario(const std::string& name_or_path) {
  if (name_or_path == "culdesac" || name_or_path == "overtaking")
    return builtin_scenario(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw Error("cannot open scenario file: " + name_or_path);
  Json j;
  in >> j;
  return scenario_from_json(j);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write: " + path);
  out << text;
}

inline void write_runs_json(const std::string& path,
                            const std::vector<RunRecord>& runs) {
  Json arr = Json::array();
  for (const RunRecord& r : runs) arr.push_back(to_json(r));
  write_text_file(path, arr.dump(2) + "\n");
}

/// CSV of group aggregates. Synthesis statistics are reported whether or
/// not a plan came out of the map; the any_plan column records which.
inline std::string format_summary_csv(const std::vector<GroupSummary>& groups) {
  std::string out =
      "scenario,strategy,mean_objects,sd_objects,mean_states,sd_states,"
      "mean_time_s,sd_time_s,any_plan\n";
  char line[256];
  for (const GroupSummary& g : groups) {
    std::snprintf(line, sizeof line, "%s,%d,%.2f,%.2f,%.2f,%.2f,%.4f,%.4f,%d\n",
                  g.scenario.c_str(), static_cast<int>(g.strategy),
                  g.mean_objects, g.sd_objects, g.mean_states, g.sd_states,
                  g.mean_time_s, g.sd_time_s, g.any_plan ? 1 : 0);
    out += line;
  }
  return out;
}

inline void write_summary_csv(const std::string& path,
                              const std::vector<GroupSummary>& groups) {
  write_text_file(path, format_summary_csv(groups));
}

}  // namespace taskplan

#endif  // TASKPLAN_SERIALIZE_HPP
