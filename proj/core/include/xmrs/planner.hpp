#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "xmrs/domain.hpp"
#include "xmrs/motion.hpp"

namespace xmrs {

// M x N binary matrix; at(m, n) means robot n works task m.
class AllocationMatrix {
 public:
  AllocationMatrix() = default;
  AllocationMatrix(std::size_t tasks, std::size_t robots)
      : tasks_(tasks), robots_(robots), bits_(tasks * robots, 0) {}

  std::size_t tasks() const { return tasks_; }
  std::size_t robots() const { return robots_; }

  bool at(std::size_t task, std::size_t robot) const { return bits_.at(task * robots_ + robot) != 0; }
  void set(std::size_t task, std::size_t robot, bool value) {
    bits_.at(task * robots_ + robot) = value ? 1 : 0;
  }

  // Robot indices allocated to `task`, ascending.
  std::vector<std::size_t> coalition(std::size_t task) const;
  // Task indices `robot` works, ascending.
  std::vector<std::size_t> tasks_of(std::size_t robot) const;

  // Row-major lexicographic order over (task, robot) entries.
  auto operator<=>(const AllocationMatrix&) const = default;

 private:
  std::size_t tasks_ = 0;
  std::size_t robots_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct TaskInterval {
  double start = 0.0;  // s, latest of predecessor completion and coalition release
  double end = 0.0;    // s, last member arrived + work duration

  double duration() const { return end - start; }
  bool operator==(const TaskInterval&) const = default;
};

struct Schedule {
  std::vector<TaskInterval> tasks;
  // Finish time of each robot's last task; nullopt for idle robots.
  std::vector<std::optional<double>> robot_finish;

  double task_time(std::size_t task) const { return tasks.at(task).duration(); }
  double robot_makespan(std::size_t robot) const { return robot_finish.at(robot).value_or(0.0); }
  bool operator==(const Schedule&) const = default;
};

// Overall makespan: latest task end, 0 for an empty schedule.
double makespan(const Schedule& s);

// task -> robot -> path travelled by that robot to reach the task.
using MotionPlans = std::map<std::size_t, std::map<std::size_t, Path>>;

struct Solution {
  AllocationMatrix allocation;
  Schedule schedule;
  MotionPlans motions;

  bool operator==(const Solution&) const = default;
};

// ---------------------------------------------------------------------------
// Infeasibility causes, in the order they are checked.

struct TraitViolation {
  std::size_t task = 0;
  TraitVector requirement;
  TraitVector aggregate;

  bool operator==(const TraitViolation&) const = default;
};

struct PrecedenceViolation {
  Precedence edge;

  bool operator==(const PrecedenceViolation&) const = default;
};

struct MotionViolation {
  std::size_t task = 0;
  std::size_t robot = 0;

  bool operator==(const MotionViolation&) const = default;
};

using InfeasibilityCause = std::variant<TraitViolation, PrecedenceViolation, MotionViolation>;

std::string_view cause_kind(const InfeasibilityCause& cause);

struct ScheduledAllocation {
  Schedule schedule;
  MotionPlans motions;
};

using ScheduleResult = std::variant<ScheduledAllocation, InfeasibilityCause>;

// List-schedules a fixed allocation over the task network in topological order.
//
// Each robot leaves for its next task as soon as its previous task ends. A task
// starts once every predecessor has ended and every coalition member has been
// released; it ends `work_duration` after the later of that instant and the last
// member's arrival, so coalition travel is folded into the task interval.
//
// Infeasible allocations come back as a cause rather than an exception:
//   1. an allocated coalition lacking the task's required traits,
//   2. an allocated task whose predecessor has no robots,
//   3. a task with no robots at all (all-zero aggregate),
//   4. a robot that cannot reach its task.
ScheduleResult schedule_allocation(const ProblemDomain& d, const AllocationMatrix& a);

class UnsolvableError : public std::runtime_error {
 public:
  UnsolvableError(std::size_t task, const std::string& task_id);
  std::size_t task() const { return task_; }

 private:
  std::size_t task_;
};

struct SolveStats {
  std::uint64_t nodes = 0;
  std::uint64_t leaves = 0;
  std::uint64_t pruned = 0;
};

// Makespan-optimal allocation by depth-first branch and bound over minimal
// satisfying coalitions per task. Among equal makespans the row-major
// lexicographically smallest allocation matrix wins.
//
// Throws InvalidArgument if validate_domain reports violations and
// UnsolvableError when some task has no reachable satisfying coalition.
Solution solve(const ProblemDomain& d, SolveStats* stats = nullptr);

// Non-empty robot subsets satisfying `task`'s requirements whose members can all
// reach it and no proper subset of which also qualifies. Lexicographic order.
std::vector<std::vector<std::size_t>> minimal_coalitions(const ProblemDomain& d, std::size_t task);

}  // namespace xmrs
