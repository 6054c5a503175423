#ifndef TASKPLAN_PLANNER_HPP
#define TASKPLAN_PLANNER_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <vector>

#include "taskplan/automaton.hpp"
#include "taskplan/geometry.hpp"
#include "taskplan/sensing.hpp"
#include "taskplan/simulator.hpp"

namespace taskplan {

/// Planning strategies, in the order they are selected on the command
/// line.
///  0 Reactive:        no map; sense, probe one step ahead, act.
///  1 Direct:          build a map with full-length straight tasks.
///  2 Subdivided:      straight tasks are cut to d_sub before simulation.
///  3 CollisionSplit:  full-length straights; a collided straight is
///                     split into d_sub links after the fact.
///  4 AttentionWindow: CollisionSplit plus attention-window switching:
///                     a watched disturbance is kept across a switch
///                     while it stays inside the window, and obstacle-
///                     watching straights end when it leaves.
enum class Strategy { Reactive = 0, Direct, Subdivided, CollisionSplit, AttentionWindow };

inline Strategy strategy_from_int(int s) {
  if (s < 0 || s > 4) throw Error("strategy must be 0..4");
  return static_cast<Strategy>(s);
}

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Reactive: return "reactive";
    case Strategy::Direct: return "direct";
    case Strategy::Subdivided: return "subdivided";
    case Strategy::CollisionSplit: return "collision_split";
    case Strategy::AttentionWindow: return "attention_window";
  }
  return "?";
}

/// Parameters of synthesis and plan execution.
struct PlannerConfig {
  SimConfig sim{};
  double d_sub{0.5};            ///< sub-task distance [m]
  double d_max{2.0};            ///< distance normalisation cap [m]
  double collision_penalty{2.0};///< additive cost of a contact disturbance
  double goal_tol{0.15};        ///< goal satisfaction radius [m]
  int state_cap{500};           ///< hard bound on map size
  double motor_rate{10.0};      ///< motor command rate [Hz]
};

/// One node of the cognitive map: a simulated (or, for the root, the
/// resting) task together with its outcome and costs. Disturbances are
/// stored in the fixed frame; body-frame views are derived from the
/// start or end pose as needed.
struct PlanState {
  int id{0};
  ControlMode mode{ControlMode::StraightContingent};
  std::optional<int> parent;
  std::vector<int> children;
  Pose2 start;
  Pose2 end;
  int n_steps{0};
  double distance{0.0};
  std::optional<TaskEnd> task_end;  ///< empty for the root
  std::optional<Disturbance> d_initial;
  std::optional<Disturbance> d_new;
  double gamma{0.0};
  double chi{0.0};
  double phi{0.0};
  int psi{0};          ///< 1 when the state lies on the extracted plan
  int objects{0};      ///< bodies in this task's simulation world
  bool simulated{false};
  std::vector<Pose2> trajectory;

  bool collided() const { return d_new && d_new->collided(); }
  bool natural_end() const { return !task_end || is_natural(*task_end); }
  std::optional<Disturbance> d_initial_moving() const {
    if (!d_initial) return std::nullopt;
    return to_moving_frame(start, *d_initial);
  }
  std::optional<Disturbance> d_new_moving() const {
    if (!d_new) return std::nullopt;
    return to_moving_frame(end, *d_new);
  }
};

/// The map grown by synthesis: a tree of states rooted at the resting
/// state, plus the order states were taken up for expansion.
struct CognitiveMap {
  std::vector<PlanState> states;
  int root{0};
  std::vector<int> pop_trace;
  std::optional<int> goal_state;
  int total_objects{0};

  const PlanState& state(int id) const { return states.at(id); }
  PlanState& state(int id) { return states.at(id); }
};

/// Cost of an interrupting disturbance, judged in the body frame of the
/// state's end pose: worst when the disturbance sits on the robot at a
/// right angle, plus a flat penalty if it was an actual contact.
/// Always in [0, 1/2].
inline double disturbance_cost(const std::optional<Disturbance>& d_new_moving,
                               const PlannerConfig& cfg) {
  if (!d_new_moving) return 0.0;
  const double p = std::min(d_new_moving->position().norm(), cfg.d_max);
  const double th = std::abs(d_new_moving->theta);
  const double contact = d_new_moving->collided() ? cfg.collision_penalty : 0.0;
  return (std::abs(1.0 - p) / 2.0 + std::abs(kPi / 2.0 - th) / kPi + contact) / 6.0;
}

/// Cost of the remaining way to the goal, judged in the body frame of
/// the state's end pose. Always in [0, 1/2].
inline double goal_cost(const std::optional<Disturbance>& goal_moving,
                        const PlannerConfig& cfg) {
  if (!goal_moving) return 0.0;
  const double p = std::min(goal_moving->position().norm(), cfg.d_max);
  const double th = std::abs(goal_moving->theta);
  return (p / 2.0 + th / kPi) / 4.0;
}

/// Plain reset: a successor watches what interrupted its predecessor,
/// or falls back to the goal disturbance when nothing did. Undefined
/// out of a contact.
inline std::optional<Disturbance> reset_basic(
    const std::optional<Disturbance>& pred_d_new,
    const std::optional<Disturbance>& goal_fixed) {
  if (!pred_d_new) return goal_fixed;
  if (pred_d_new->collided()) throw UndefinedReset();
  return pred_d_new;
}

/// Attention-window reset: like the plain reset, except that when
/// nothing interrupted the predecessor, its watched disturbance is kept
/// if it still falls inside a fresh attention window built at the
/// successor's start. Without a goal there is no window and the plain
/// reset applies.
inline std::optional<Disturbance> reset_window(
    const std::optional<Disturbance>& pred_d_new,
    const std::optional<Disturbance>& pred_d_initial,
    const Pose2& successor_start, const std::optional<Disturbance>& goal_fixed,
    const RobotModel& robot) {
  if (pred_d_new) {
    if (pred_d_new->collided()) throw UndefinedReset();
    return pred_d_new;
  }
  if (goal_fixed && pred_d_initial) {
    const LocalRegion window =
        make_attention_window(successor_start, robot, *goal_fixed);
    if (in_view(window, successor_start, *pred_d_initial)) return pred_d_initial;
  }
  return goal_fixed;
}

/// Cut a collided straight state into d_sub-length links: every link
/// but the last carries the contact ahead as a looming disturbance;
/// the last link keeps the contact and the original id. Returns the
/// state unchanged (single link) if it is not collided or shorter than
/// d_sub. Turns cannot be split.
inline std::vector<PlanState> split_state(const PlanState& q, double d_sub) {
  if (is_turn(q.mode)) throw NotSplittable();
  if (!q.collided() || d_sub <= 0.0) return {q};

  const double length = q.distance;
  const int whole = static_cast<int>(std::floor(length / d_sub + 1e-9));
  std::vector<double> bounds;
  for (int j = 1; j <= whole; ++j) bounds.push_back(j * d_sub);
  if (length - whole * d_sub > 1e-9) bounds.push_back(length);
  if (bounds.size() <= 1) return {q};
  bounds.back() = length;

  const Vec2 dir = q.start.heading();
  std::vector<PlanState> links;
  double prev_bound = 0.0;
  int prev_steps = 0;
  for (size_t j = 0; j < bounds.size(); ++j) {
    const bool last = j + 1 == bounds.size();
    const double bound = bounds[j];
    const int cum_steps =
        last ? q.n_steps
             : static_cast<int>(std::lround(q.n_steps * bound / length));

    PlanState link = q;
    link.id = last ? q.id : -1;
    link.children.clear();
    link.start = j == 0 ? q.start
                        : Pose2{q.start.x + dir.x * prev_bound,
                                q.start.y + dir.y * prev_bound, q.start.theta};
    link.end = last ? q.end
                    : Pose2{q.start.x + dir.x * bound, q.start.y + dir.y * bound,
                            q.start.theta};
    link.n_steps = cum_steps - prev_steps;
    link.distance = bound - prev_bound;
    link.task_end = last ? TaskEnd::Collided : TaskEnd::Truncated;
    if (!last && link.d_new) link.d_new->kind = DisturbanceKind::ObstacleLooming;
    link.objects = last ? q.objects : 0;
    link.simulated = last;
    if (!q.trajectory.empty()) {
      const int lo = std::min<int>(prev_steps, q.trajectory.size() - 1);
      const int hi = std::min<int>(cum_steps, q.trajectory.size() - 1);
      link.trajectory.assign(q.trajectory.begin() + lo,
                             q.trajectory.begin() + hi + 1);
    }
    links.push_back(std::move(link));
    prev_bound = bound;
    prev_steps = cum_steps;
  }
  return links;
}

/// An executable plan: the chain of map states from the root to the
/// chosen terminal, with per-task motor budgets.
struct PlanTask {
  int state_id{0};
  ControlMode mode{ControlMode::StraightContingent};
  int n_steps{0};
  int n_motor{0};
};

struct Plan {
  std::vector<int> state_ids;  ///< path from root to terminal, inclusive
  std::vector<PlanTask> tasks; ///< one per non-root state on the path
  int terminal{-1};
};

namespace detail {

/// Best-first growth of the cognitive map over the task automaton.
class Synthesis {
 public:
  Synthesis(const PointCloud& cloud, const Pose2& start,
            const std::optional<Disturbance>& goal, Strategy strategy,
            const PlannerConfig& cfg)
      : cloud_(cloud), origin_(start), goal_(goal), strategy_(strategy),
        cfg_(cfg) {}

  CognitiveMap run() {
    make_root();
    push(map_.root);
    while (!queue_.empty() && !stop_) {
      const auto [phi, id] = queue_.top();
      queue_.pop();
      if (phi != map_.state(id).phi) {  // stale priority: reinsert
        queue_.push({map_.state(id).phi, id});
        continue;
      }
      map_.pop_trace.push_back(id);
      expand(id);
    }
    return std::move(map_);
  }

 private:
  using Entry = std::pair<double, int>;

  void make_root() {
    PlanState root;
    root.id = 0;
    root.mode = ControlMode::StraightContingent;
    root.start = origin_;
    root.end = origin_;
    root.d_initial = goal_;
    root.simulated = false;
    root.trajectory = {origin_};
    compute_costs(root);
    map_.states.push_back(std::move(root));
    map_.root = 0;
  }

  void push(int id) { queue_.push({map_.state(id).phi, id}); }

  void compute_costs(PlanState& q) const {
    q.gamma = disturbance_cost(q.d_new_moving(), cfg_);
    std::optional<Disturbance> goal_moving;
    if (goal_) goal_moving = to_moving_frame(q.end, *goal_);
    q.chi = goal_cost(goal_moving, cfg_);
    q.phi = q.gamma + q.chi;
  }

  void expand(int id) {
    // Guards see the state of the world as it is when the state is
    // taken up; disturbances propagated back during this expansion do
    // not retract jumps that were already permitted.
    const bool had_d_new = map_.state(id).d_new.has_value();
    const bool was_contact = map_.state(id).collided();
    const bool natural = map_.state(id).natural_end();
    ContinuousState snapshot;
    snapshot.d_initial = map_.state(id).d_initial;
    snapshot.d_new = had_d_new ? map_.state(id).d_new : std::nullopt;
    if (was_contact) return;  // nothing jumps out of a contact

    clean_straight_seen_ = false;
    for (const Edge& e : edges_from(map_.state(id).mode)) {
      if (stop_) break;
      if (!guard_holds(e, snapshot, natural)) continue;
      create_successor(id, e.to);
    }
    if (!goal_ && clean_straight_seen_) stop_ = true;
  }

  /// Create, simulate, and file the successor of `parent` in `mode`.
  /// Returns the new state id, or -1 when the successor is stillborn
  /// (a target-watching straight already at its target).
  int create_successor(int parent, ControlMode mode) {
    if (static_cast<int>(map_.states.size()) >= cfg_.state_cap) {
      if (goal_) throw StateSpaceExhausted();
      stop_ = true;
      return -1;
    }
    const Pose2 start = map_.state(parent).end;
    std::optional<Disturbance> d_initial;
    if (mode != ControlMode::StraightDefault) {
      d_initial = reset_for(map_.state(parent), start);
    }
    if (mode == ControlMode::StraightContingent && d_initial &&
        d_initial->kind == DisturbanceKind::Target) {
      const Disturbance local = to_moving_frame(start, *d_initial);
      if (local.x <= kTargetReachTol) return -1;  // stillborn
    }

    int n_bodies = 0;
    const World world = build_world(mode, d_initial, start, n_bodies);
    TaskSpec task{mode, d_initial ? std::optional(to_moving_frame(start, *d_initial))
                                  : std::nullopt};
    SimOptions opts;
    opts.origin = origin_;
    opts.window_release = strategy_ == Strategy::AttentionWindow;
    if (strategy_ == Strategy::Subdivided && is_straight(mode))
      opts.truncate_at = cfg_.d_sub;
    const SimResult res = simulate_task(world, task, cfg_.sim, opts);

    PlanState q;
    q.id = static_cast<int>(map_.states.size());
    q.mode = mode;
    q.parent = parent;
    q.start = start;
    q.end = res.end_pose;
    q.n_steps = res.n_steps;
    q.distance = res.distance;
    q.task_end = res.end;
    q.d_initial = d_initial;
    q.d_new = res.d_new;
    q.objects = n_bodies;
    q.simulated = true;
    q.trajectory = res.trajectory;
    compute_costs(q);
    const int qid = q.id;
    map_.states.push_back(std::move(q));
    map_.state(parent).children.push_back(qid);
    map_.total_objects += n_bodies;

    if (map_.state(qid).collided()) {
      propagate_to_parent(parent, *map_.state(qid).d_new);
      // Only a straight run has length to divide; a clipped turn is left
      // as the atomic contact it is.
      if ((strategy_ == Strategy::CollisionSplit ||
           strategy_ == Strategy::AttentionWindow) &&
          is_straight(mode)) {
        apply_split(qid);
      }
      // A turn that collides ends the branch; nothing is enqueued for
      // the contact state itself.
      return qid;
    }

    note_created(qid);
    if (is_straight(mode)) {
      if (map_.state(qid).task_end != TaskEnd::Horizon) push(qid);
      return qid;
    }

    // Clean quarter turn: try exactly one follow-on straight, so that a
    // turn discovered en route immediately shows where it leads.
    if (map_.state(qid).task_end == TaskEnd::TurnComplete && !stop_) {
      const int chained = create_successor(qid, ControlMode::StraightContingent);
      const bool chain_live =
          chained >= 0 && (!map_.state(chained).collided() ||
                           map_.state(chained).parent != qid);
      if (!chain_live) push(qid);  // the turn itself stays on the frontier
    } else if (map_.state(qid).task_end == TaskEnd::TurnComplete) {
      push(qid);
    }
    return qid;
  }

  std::optional<Disturbance> reset_for(const PlanState& pred,
                                       const Pose2& successor_start) const {
    if (strategy_ == Strategy::AttentionWindow) {
      return reset_window(pred.d_new, pred.d_initial, successor_start, goal_,
                          cfg_.sim.robot);
    }
    return reset_basic(pred.d_new, goal_);
  }

  /// Assemble the world a successor task is simulated against: scan
  /// points inside the task's filter region, clustered into rectangles,
  /// plus the watched disturbance itself if the clusters miss it.
  World build_world(ControlMode mode, const std::optional<Disturbance>& d_initial,
                    const Pose2& start, int& n_bodies) const {
    std::optional<Disturbance> d_local;
    if (d_initial) d_local = to_moving_frame(start, *d_initial);
    const FilterRegion region{region_for(mode, d_local, cfg_.sim).at(start)};
    const PointCloud kept = filter_points(cloud_, region);

    World world;
    world.robot_pose = start;
    world.goal = goal_;
    for (const std::vector<int>& group :
         cluster_points(kept, cfg_.sim.cluster_eps)) {
      PointCloud members;
      for (int i : group) members.push_back(kept[i]);
      world.obstacles.push_back(
          bbox_disturbance(members, start, DisturbanceKind::ObstacleLooming));
    }
    if (d_initial && d_initial->is_obstacle()) {
      bool covered = false;
      for (const Disturbance& b : world.obstacles)
        if (obb_overlap(rect_of(b), rect_of(*d_initial))) covered = true;
      if (!covered) world.obstacles.push_back(*d_initial);
    }
    n_bodies = static_cast<int>(world.obstacles.size()) + (goal_ ? 1 : 0);
    return world;
  }

  /// A contact found one task ahead is worth knowing about one task
  /// back: hand the disturbance to the parent as a looming one.
  void propagate_to_parent(int parent, const Disturbance& contact) {
    PlanState& p = map_.state(parent);
    if (p.d_new) return;
    p.d_new = contact;
    p.d_new->kind = DisturbanceKind::ObstacleLooming;
    compute_costs(p);
  }

  /// Replace a collided straight with its d_sub links in the map.
  void apply_split(int qid) {
    const std::vector<PlanState> links = split_state(map_.state(qid), cfg_.d_sub);
    if (links.size() <= 1) return;

    const int parent = *map_.state(qid).parent;
    int prev = parent;
    for (size_t j = 0; j + 1 < links.size(); ++j) {
      PlanState link = links[j];
      link.id = static_cast<int>(map_.states.size());
      link.parent = prev;
      compute_costs(link);
      const int lid = link.id;
      if (prev == parent) {
        std::replace(map_.state(parent).children.begin(),
                     map_.state(parent).children.end(), qid, lid);
      } else {
        map_.state(prev).children.push_back(lid);
      }
      map_.states.push_back(std::move(link));
      note_created(lid);
      push(lid);
      prev = lid;
    }
    PlanState& terminal = map_.state(qid);
    const PlanState& tail = links.back();
    terminal.start = tail.start;
    terminal.n_steps = tail.n_steps;
    terminal.distance = tail.distance;
    terminal.trajectory = tail.trajectory;
    terminal.parent = prev;
    map_.state(prev).children.push_back(qid);
  }

  /// Stop-rule bookkeeping for a newly created, non-contact state.
  void note_created(int id) {
    const PlanState& q = map_.state(id);
    if (goal_) {
      if ((q.end.position() - goal_->position()).norm() <= cfg_.goal_tol) {
        map_.goal_state = id;
        stop_ = true;
      }
    } else if (is_straight(q.mode) && q.task_end && is_natural(*q.task_end) &&
               !q.d_new) {
      clean_straight_seen_ = true;
    }
  }

  const PointCloud& cloud_;
  Pose2 origin_;
  std::optional<Disturbance> goal_;
  Strategy strategy_;
  PlannerConfig cfg_;
  CognitiveMap map_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue_;
  bool stop_{false};
  bool clean_straight_seen_{false};
};

}  // namespace detail

/// Grow a cognitive map from a single scan taken at `start`.
inline CognitiveMap synthesize(const PointCloud& cloud, const Pose2& start,
                               const std::optional<Disturbance>& goal,
                               Strategy strategy, const PlannerConfig& cfg) {
  if (strategy == Strategy::Reactive)
    throw Error("the reactive strategy does not build a map");
  return detail::Synthesis(cloud, start, goal, strategy, cfg).run();
}

/// Choose the best admissible terminal on the map frontier and mark the
/// path to it. With a goal, only terminals inside the goal radius are
/// admissible. Throws NoPlan when the frontier offers nothing.
inline Plan extract_plan(CognitiveMap& map,
                         const std::optional<Disturbance>& goal,
                         const PlannerConfig& cfg) {
  int best = -1;
  for (const PlanState& s : map.states) {
    if (s.id == map.root || !s.children.empty() || s.collided()) continue;
    if (goal &&
        (s.end.position() - goal->position()).norm() > cfg.goal_tol)
      continue;
    if (best < 0 || s.phi < map.state(best).phi) best = s.id;
  }
  if (best < 0) throw NoPlan();

  Plan plan;
  plan.terminal = best;
  for (int id = best;;) {
    plan.state_ids.push_back(id);
    if (id == map.root) break;
    id = *map.state(id).parent;
  }
  std::reverse(plan.state_ids.begin(), plan.state_ids.end());
  for (int id : plan.state_ids) {
    map.state(id).psi = 1;
    if (id == map.root) continue;
    const PlanState& s = map.state(id);
    const int n_motor = static_cast<int>(
        std::lround(s.n_steps * cfg.motor_rate * cfg.sim.step));
    plan.tasks.push_back({id, s.mode, s.n_steps, n_motor});
  }
  return plan;
}

}  // namespace taskplan

#endif  // TASKPLAN_PLANNER_HPP
