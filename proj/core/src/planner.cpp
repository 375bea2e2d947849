#include "xmrs/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xmrs/errors.hpp"

namespace xmrs {

std::vector<std::size_t> AllocationMatrix::coalition(std::size_t task) const {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < robots_; ++n) {
    if (at(task, n)) out.push_back(n);
  }
  return out;
}

std::vector<std::size_t> AllocationMatrix::tasks_of(std::size_t robot) const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < tasks_; ++m) {
    if (at(m, robot)) out.push_back(m);
  }
  return out;
}

double makespan(const Schedule& s) {
  double best = 0.0;
  for (const auto& t : s.tasks) best = std::max(best, t.end);
  return best;
}

std::string_view cause_kind(const InfeasibilityCause& cause) {
  struct Visitor {
    std::string_view operator()(const TraitViolation&) const { return "trait-violation"; }
    std::string_view operator()(const PrecedenceViolation&) const { return "precedence-violation"; }
    std::string_view operator()(const MotionViolation&) const { return "no-motion-plan"; }
  };
  return std::visit(Visitor{}, cause);
}

UnsolvableError::UnsolvableError(std::size_t task, const std::string& task_id)
    : std::runtime_error("no feasible coalition for task '" + task_id + "'"), task_(task) {}

namespace {

constexpr double kTimeEps = 1e-9;

// Lazily computed shortest paths. Origin n < N is robot n's start cell; origin
// N + m is the location of task m.
class PathTable {
 public:
  explicit PathTable(const ProblemDomain& d)
      : d_(d), n_(d.num_robots()), cache_((n_ + d.num_tasks()) * d.num_tasks()) {}

  std::size_t robot_origin(std::size_t robot) const { return robot; }
  std::size_t task_origin(std::size_t task) const { return n_ + task; }

  const std::optional<Path>& get(std::size_t origin, std::size_t task) const {
    auto& slot = cache_[origin * d_.num_tasks() + task];
    if (!slot.computed) {
      slot.computed = true;
      const Cell from = origin < n_ ? d_.map.robot_starts[origin] : d_.network.tasks[origin - n_].location;
      try {
        slot.path = plan_path(d_.map, from, d_.network.tasks[task].location);
      } catch (const NoPathError&) {
        slot.path.reset();
      }
    }
    return slot.path;
  }

 private:
  struct Slot {
    bool computed = false;
    std::optional<Path> path;
  };
  const ProblemDomain& d_;
  std::size_t n_;
  mutable std::vector<Slot> cache_;
};

struct RobotState {
  std::size_t origin = 0;
  double free_at = 0.0;
  std::optional<double> finish;
};

struct Predecessors {
  std::vector<std::vector<std::size_t>> of;

  explicit Predecessors(const TaskNetwork& net) : of(net.size()) {
    for (const auto& e : net.edges) of[e.after].push_back(e.before);
  }
};

// Schedules one task against the running robot state. Returns the robot that
// cannot reach the task, if any.
std::optional<std::size_t> place_task(const ProblemDomain& d, const PathTable& paths,
                                      const Predecessors& preds, std::size_t task,
                                      std::span<const std::size_t> coalition,
                                      std::vector<RobotState>& robots,
                                      std::vector<TaskInterval>& intervals, MotionPlans* motions) {
  double ready = 0.0;
  for (std::size_t p : preds.of[task]) ready = std::max(ready, intervals[p].end);

  double released = ready;
  double arrived = ready;
  for (std::size_t n : coalition) {
    const auto& path = paths.get(robots[n].origin, task);
    if (!path) return n;
    released = std::max(released, robots[n].free_at);
    arrived = std::max(arrived, robots[n].free_at + travel_time(*path, d.phi[n]));
    if (motions) (*motions)[task][n] = *path;
  }

  const TaskInterval iv{released, arrived + d.network.tasks[task].work_duration};
  intervals[task] = iv;
  for (std::size_t n : coalition) {
    robots[n].origin = paths.task_origin(task);
    robots[n].free_at = iv.end;
    robots[n].finish = iv.end;
  }
  return std::nullopt;
}

std::vector<RobotState> initial_robots(const PathTable& paths, std::size_t n) {
  std::vector<RobotState> robots(n);
  for (std::size_t i = 0; i < n; ++i) robots[i].origin = paths.robot_origin(i);
  return robots;
}

void check_shape(const ProblemDomain& d, const AllocationMatrix& a) {
  if (a.tasks() != d.num_tasks() || a.robots() != d.num_robots()) {
    throw InvalidArgument("allocation is " + std::to_string(a.tasks()) + "x" + std::to_string(a.robots()) +
                          ", domain needs " + std::to_string(d.num_tasks()) + "x" +
                          std::to_string(d.num_robots()));
  }
}

}  // namespace

ScheduleResult schedule_allocation(const ProblemDomain& d, const AllocationMatrix& a) {
  check_shape(d, a);
  const std::size_t m = d.num_tasks();

  std::vector<std::vector<std::size_t>> coalitions(m);
  for (std::size_t t = 0; t < m; ++t) coalitions[t] = a.coalition(t);

  for (std::size_t t = 0; t < m; ++t) {
    if (coalitions[t].empty()) continue;
    TraitVector agg = aggregate_traits(std::span<const std::size_t>(coalitions[t]), d.q, d.traits);
    if (!coalition_satisfies(d.ystar[t], agg)) return InfeasibilityCause{TraitViolation{t, d.ystar[t], agg}};
  }
  for (const auto& e : d.network.edges) {
    if (coalitions[e.before].empty() && !coalitions[e.after].empty()) {
      return InfeasibilityCause{PrecedenceViolation{e}};
    }
  }
  for (std::size_t t = 0; t < m; ++t) {
    if (coalitions[t].empty()) {
      return InfeasibilityCause{TraitViolation{t, d.ystar[t], TraitVector(d.num_traits(), 0.0)}};
    }
  }

  const auto order = topological_order(d.network);
  if (!order) throw InvalidArgument("task network is not acyclic");

  PathTable paths(d);
  Predecessors preds(d.network);
  auto robots = initial_robots(paths, d.num_robots());
  ScheduledAllocation out;
  out.schedule.tasks.assign(m, {});
  for (std::size_t t : *order) {
    if (auto stuck = place_task(d, paths, preds, t, coalitions[t], robots, out.schedule.tasks, &out.motions)) {
      return InfeasibilityCause{MotionViolation{t, *stuck}};
    }
  }
  out.schedule.robot_finish.reserve(robots.size());
  for (const auto& r : robots) out.schedule.robot_finish.push_back(r.finish);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<std::size_t>> minimal_coalitions(const ProblemDomain& d, const PathTable& paths,
                                                         std::size_t task) {
  const std::size_t n = d.num_robots();
  if (n >= 8 * sizeof(std::uint64_t) - 1) throw InvalidArgument("too many robots for exhaustive search");

  std::vector<bool> reachable(n);
  for (std::size_t r = 0; r < n; ++r) reachable[r] = paths.get(paths.robot_origin(r), task).has_value();

  std::vector<std::uint64_t> satisfying;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    std::vector<std::size_t> members;
    bool ok = true;
    for (std::size_t r = 0; r < n && ok; ++r) {
      if (mask & (std::uint64_t{1} << r)) {
        ok = reachable[r];
        members.push_back(r);
      }
    }
    if (!ok) continue;
    if (coalition_satisfies(d.ystar[task], aggregate_traits(std::span<const std::size_t>(members), d.q, d.traits))) {
      satisfying.push_back(mask);
    }
  }

  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t mask : satisfying) {
    const bool minimal = std::none_of(satisfying.begin(), satisfying.end(), [mask](std::uint64_t other) {
      return other != mask && (other & mask) == other;
    });
    if (!minimal) continue;
    std::vector<std::size_t> members;
    for (std::size_t r = 0; r < n; ++r) {
      if (mask & (std::uint64_t{1} << r)) members.push_back(r);
    }
    out.push_back(std::move(members));
  }

  // Order by the allocation row each coalition produces: robot 0 is the most
  // significant column, so {3} < {2} < {2, 3} < {1} ...
  auto row_of = [n](const std::vector<std::size_t>& c) {
    std::vector<std::uint8_t> row(n, 0);
    for (std::size_t r : c) row[r] = 1;
    return row;
  };
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return row_of(a) < row_of(b); });
  return out;
}

class BranchAndBound {
 public:
  BranchAndBound(const ProblemDomain& d, const PathTable& paths, std::vector<std::size_t> order,
                 std::vector<std::vector<std::vector<std::size_t>>> candidates, SolveStats& stats)
      : d_(d),
        paths_(paths),
        preds_(d.network),
        order_(std::move(order)),
        candidates_(std::move(candidates)),
        stats_(stats),
        choice_(d.num_tasks()) {}

  std::optional<AllocationMatrix> run() {
    std::vector<TaskInterval> intervals(d_.num_tasks());
    auto robots = initial_robots(paths_, d_.num_robots());
    descend(0, robots, intervals, 0.0);
    return best_;
  }

 private:
  // Earliest possible makespan ignoring robots for the tasks from `depth` on.
  double lower_bound(std::size_t depth, const std::vector<TaskInterval>& intervals, double scheduled_max) const {
    double bound = scheduled_max;
    std::vector<double> est_end(intervals.size());
    for (std::size_t i = 0; i < depth; ++i) est_end[order_[i]] = intervals[order_[i]].end;
    for (std::size_t i = depth; i < order_.size(); ++i) {
      const std::size_t t = order_[i];
      double ready = 0.0;
      for (std::size_t p : preds_.of[t]) ready = std::max(ready, est_end[p]);
      est_end[t] = ready + d_.network.tasks[t].work_duration;
      bound = std::max(bound, est_end[t]);
    }
    return bound;
  }

  AllocationMatrix current_matrix() const {
    AllocationMatrix a(d_.num_tasks(), d_.num_robots());
    for (std::size_t t = 0; t < choice_.size(); ++t) {
      for (std::size_t r : candidates_[t][choice_[t]]) a.set(t, r, true);
    }
    return a;
  }

  void descend(std::size_t depth, const std::vector<RobotState>& robots,
               const std::vector<TaskInterval>& intervals, double scheduled_max) {
    ++stats_.nodes;
    if (depth == order_.size()) {
      ++stats_.leaves;
      offer(scheduled_max);
      return;
    }
    if (best_ && lower_bound(depth, intervals, scheduled_max) > best_makespan_ + kTimeEps) {
      ++stats_.pruned;
      return;
    }

    const std::size_t task = order_[depth];
    for (std::size_t c = 0; c < candidates_[task].size(); ++c) {
      auto next_robots = robots;
      auto next_intervals = intervals;
      if (place_task(d_, paths_, preds_, task, candidates_[task][c], next_robots, next_intervals, nullptr)) {
        continue;
      }
      choice_[task] = c;
      descend(depth + 1, next_robots, next_intervals, std::max(scheduled_max, next_intervals[task].end));
    }
  }

  void offer(double value) {
    if (!best_ || value < best_makespan_ - kTimeEps) {
      best_ = current_matrix();
      best_makespan_ = value;
    } else if (value <= best_makespan_ + kTimeEps) {
      AllocationMatrix candidate = current_matrix();
      if (candidate < *best_) {
        best_ = std::move(candidate);
        best_makespan_ = std::min(best_makespan_, value);
      }
    }
  }

  const ProblemDomain& d_;
  const PathTable& paths_;
  Predecessors preds_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::vector<std::size_t>>> candidates_;
  SolveStats& stats_;
  std::vector<std::size_t> choice_;
  std::optional<AllocationMatrix> best_;
  double best_makespan_ = std::numeric_limits<double>::infinity();
};

}  // namespace

std::vector<std::vector<std::size_t>> minimal_coalitions(const ProblemDomain& d, std::size_t task) {
  if (task >= d.num_tasks()) throw InvalidArgument("task index out of range");
  PathTable paths(d);
  return minimal_coalitions(d, paths, task);
}

Solution solve(const ProblemDomain& d, SolveStats* stats) {
  if (auto report = validate_domain(d); !report.empty()) {
    std::string msg = "domain is not well-formed:";
    for (const auto& v : report) msg += " [" + std::string(to_string(v.kind)) + ": " + v.detail + "]";
    throw InvalidArgument(msg);
  }

  PathTable paths(d);
  std::vector<std::vector<std::vector<std::size_t>>> candidates(d.num_tasks());
  for (std::size_t t = 0; t < d.num_tasks(); ++t) {
    candidates[t] = minimal_coalitions(d, paths, t);
    if (candidates[t].empty()) throw UnsolvableError(t, d.network.tasks[t].id);
  }

  SolveStats local;
  BranchAndBound search(d, paths, *topological_order(d.network), std::move(candidates), stats ? *stats : local);
  auto best = search.run();
  // Every robot a candidate contains can reach the task from anywhere in its
  // component, so the first leaf is always feasible.
  if (!best) throw UnsolvableError(0, d.network.tasks.front().id);

  auto scheduled = schedule_allocation(d, *best);
  auto& ok = std::get<ScheduledAllocation>(scheduled);
  return Solution{std::move(*best), std::move(ok.schedule), std::move(ok.motions)};
}

}  // namespace xmrs
