#ifndef TASKPLAN_SVG_HPP
#define TASKPLAN_SVG_HPP

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "taskplan/harness.hpp"
#include "taskplan/scenario.hpp"

namespace taskplan {
namespace svg_detail {

/// World-to-page mapping: metres to pixels with the y axis flipped.
struct Mapper {
  double min_x, min_y, max_x, max_y;
  double scale{200.0};
  double pad{30.0};

  double px(double x) const { return pad + (x - min_x) * scale; }
  double py(double y) const { return pad + (max_y - y) * scale; }
  double width() const { return 2 * pad + (max_x - min_x) * scale; }
  double height() const { return 2 * pad + (max_y - min_y) * scale; }
};

inline std::string fmt(const char* pattern, double a, double b, double c = 0,
                       double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

inline std::string polygon(const OrientedRect& r, const Mapper& m,
                           const std::string& style) {
  std::string pts;
  for (const Vec2& c : r.corners()) {
    pts += fmt("%.1f,%.1f ", m.px(c.x), m.py(c.y));
  }
  return "<polygon points=\"" + pts + "\" " + style + "/>\n";
}

inline Mapper fit(const ScenarioSpec& scenario,
                  const std::vector<Pose2>& extra) {
  Mapper m{1e9, 1e9, -1e9, -1e9};
  auto grow = [&m](const Vec2& p) {
    m.min_x = std::min(m.min_x, p.x);
    m.min_y = std::min(m.min_y, p.y);
    m.max_x = std::max(m.max_x, p.x);
    m.max_y = std::max(m.max_y, p.y);
  };
  for (const OrientedRect& r : scenario.obstacles)
    for (const Vec2& c : r.corners()) grow(c);
  for (const Pose2& s : scenario.starts) grow(s.position());
  if (scenario.goal) grow(scenario.goal->position());
  for (const Pose2& p : extra) grow(p.position());
  m.min_x -= 0.3;
  m.min_y -= 0.3;
  m.max_x += 0.3;
  m.max_y += 0.3;
  return m;
}

inline const char* mode_color(ControlMode mode) {
  switch (mode) {
    case ControlMode::StraightContingent: return "#1f77b4";
    case ControlMode::StraightDefault: return "#9467bd";
    case ControlMode::TurnLeft: return "#2ca02c";
    case ControlMode::TurnRight: return "#d62728";
  }
  return "#000";
}

}  // namespace svg_detail

/// Scenario geometry plus the driven trajectory of one run.
inline std::string svg_trajectory(const ScenarioSpec& scenario,
                                  const RunRecord& run,
                                  const RobotModel& robot = {}) {
  using namespace svg_detail;
  const Mapper m = fit(scenario, run.trajectory);
  std::string out = fmt(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
      "height=\"%.0f\">\n",
      m.width(), m.height());
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (scenario.avoid_region)
    out += polygon(*scenario.avoid_region, m,
                   "fill=\"#fff3cd\" stroke=\"#d0a200\" stroke-dasharray=\"6,4\"");
  for (const OrientedRect& r : scenario.obstacles)
    out += polygon(r, m, "fill=\"#555\" stroke=\"#222\"");
  if (scenario.goal)
    out += polygon(rect_of(*scenario.goal), m,
                   "fill=\"#c8e6c9\" stroke=\"#2e7d32\"");
  if (!run.trajectory.empty()) {
    std::string pts;
    for (const Pose2& p : run.trajectory)
      pts += fmt("%.1f,%.1f ", m.px(p.x), m.py(p.y));
    out += "<polyline points=\"" + pts +
           "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
    out += polygon(robot_footprint(run.trajectory.front(), robot), m,
                   "fill=\"none\" stroke=\"#888\"");
    out += polygon(robot_footprint(run.trajectory.back(), robot), m,
                   run.collided ? "fill=\"none\" stroke=\"#d62728\""
                                : "fill=\"none\" stroke=\"#2ca02c\"");
  }
  out += "</svg>\n";
  return out;
}

/// The cognitive map of one run: every state as a stroke from its start
/// to its end pose (turns as dots), the extracted plan emphasised.
inline std::string svg_map(const ScenarioSpec& scenario, const CognitiveMap& map) {
  using namespace svg_detail;
  std::vector<Pose2> ends;
  for (const PlanState& s : map.states) {
    ends.push_back(s.start);
    ends.push_back(s.end);
  }
  const Mapper m = fit(scenario, ends);
  std::string out = fmt(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
      "height=\"%.0f\">\n",
      m.width(), m.height());
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const OrientedRect& r : scenario.obstacles)
    out += polygon(r, m, "fill=\"#ddd\" stroke=\"#999\"");
  if (scenario.goal)
    out += polygon(rect_of(*scenario.goal), m,
                   "fill=\"#c8e6c9\" stroke=\"#2e7d32\"");
  for (const PlanState& s : map.states) {
    const bool on_plan = s.psi == 1;
    const std::string color = mode_color(s.mode);
    const double w = on_plan ? 4.0 : 1.5;
    if (is_turn(s.mode) || s.id == map.root) {
      out += fmt("<circle cx=\"%.1f\" cy=\"%.1f\" r=\"%.1f\" ", m.px(s.end.x),
                 m.py(s.end.y), on_plan ? 6.0 : 3.5);
      out += "fill=\"" + color + "\"/>\n";
    } else {
      out += fmt("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" ",
                 m.px(s.start.x), m.py(s.start.y), m.px(s.end.x), m.py(s.end.y));
      out += "stroke=\"" + color + "\" stroke-width=\"" + fmt("%.1f", w, 0) +
             "\"";
      if (s.collided()) out += " stroke-dasharray=\"4,3\"";
      out += "/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace taskplan

#endif  // TASKPLAN_SVG_HPP
