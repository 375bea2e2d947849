#include "xmrs/foil.hpp"

#include <algorithm>
#include <cmath>

#include "xmrs/errors.hpp"

namespace xmrs {

namespace {
constexpr double kTimeEps = 1e-9;

bool time_le(double a, double b) { return a <= b + kTimeEps * std::max(1.0, std::abs(b)); }
}  // namespace

AllocationMatrix apply_foil(const ProblemDomain& d, const AllocationMatrix& system, const FoilQuery& q) {
  if (q.changes.empty()) throw InvalidArgument("foil must change at least one assignment");
  if (system.tasks() != d.num_tasks() || system.robots() != d.num_robots()) {
    throw InvalidArgument("system allocation does not match the domain");
  }
  AllocationMatrix foil = system;
  for (const auto& change : q.changes) {
    const std::size_t r = d.robot_index(change.robot);
    const std::size_t t = d.task_index(change.task);
    foil.set(t, r, change.op == FoilOp::kAssign);
  }
  return foil;
}

FoilOutcome build_foil(const ProblemDomain& d, const Solution& s, const FoilQuery& q) {
  FoilOutcome out{apply_foil(d, s.allocation, q), InfeasibilityCause{}};
  auto scheduled = schedule_allocation(d, out.foil_allocation);
  if (auto* cause = std::get_if<InfeasibilityCause>(&scheduled)) {
    out.result = std::move(*cause);
  } else {
    auto& ok = std::get<ScheduledAllocation>(scheduled);
    out.result = Solution{out.foil_allocation, std::move(ok.schedule), std::move(ok.motions)};
  }
  return out;
}

Verdict check_feasibility(const ProblemDomain& d, const Solution& s) {
  const std::size_t m = d.num_tasks();
  const std::size_t n = d.num_robots();
  if (s.allocation.tasks() != m || s.allocation.robots() != n || s.schedule.tasks.size() != m) {
    throw InvalidArgument("solution shape does not match the domain");
  }

  std::vector<std::vector<std::size_t>> coalitions(m);
  for (std::size_t t = 0; t < m; ++t) coalitions[t] = s.allocation.coalition(t);

  // (i) traits
  for (std::size_t t = 0; t < m; ++t) {
    if (coalitions[t].empty()) continue;
    TraitVector agg = aggregate_traits(std::span<const std::size_t>(coalitions[t]), d.q, d.traits);
    if (!coalition_satisfies(d.ystar[t], agg)) return TraitViolation{t, d.ystar[t], agg};
  }

  // (ii) precedence
  for (const auto& e : d.network.edges) {
    if (coalitions[e.before].empty() && !coalitions[e.after].empty()) return PrecedenceViolation{e};
  }
  for (std::size_t t = 0; t < m; ++t) {
    if (coalitions[t].empty()) return TraitViolation{t, d.ystar[t], TraitVector(d.num_traits(), 0.0)};
  }
  for (const auto& e : d.network.edges) {
    if (!time_le(s.schedule.tasks[e.before].end, s.schedule.tasks[e.after].start)) return PrecedenceViolation{e};
  }

  // (iii) motion
  for (const auto& [task, by_robot] : s.motions) {
    for (const auto& [robot, path] : by_robot) {
      if (task >= m || robot >= n || !s.allocation.at(task, robot)) {
        return MotionViolation{std::min(task, m - 1), std::min(robot, n - 1)};
      }
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    auto sequence = s.allocation.tasks_of(r);
    std::sort(sequence.begin(), sequence.end(), [&](std::size_t a, std::size_t b) {
      const auto& ia = s.schedule.tasks[a];
      const auto& ib = s.schedule.tasks[b];
      return std::tie(ia.start, ia.end, a) < std::tie(ib.start, ib.end, b);
    });
    Cell at = d.map.robot_starts[r];
    double free_at = 0.0;
    for (std::size_t t : sequence) {
      const TaskInterval& iv = s.schedule.tasks[t];
      auto task_it = s.motions.find(t);
      if (task_it == s.motions.end()) return MotionViolation{t, r};
      auto path_it = task_it->second.find(r);
      if (path_it == task_it->second.end()) return MotionViolation{t, r};
      const Path& path = path_it->second;
      if (!path_valid(d.map, path) || path.cells.front() != at || path.cells.back() != d.network.tasks[t].location) {
        return MotionViolation{t, r};
      }
      if (!time_le(free_at, iv.start) || iv.end < iv.start) return MotionViolation{t, r};
      const double earliest_end = free_at + travel_time(path, d.phi[r]) + d.network.tasks[t].work_duration;
      if (!time_le(earliest_end, iv.end)) return MotionViolation{t, r};
      at = d.network.tasks[t].location;
      free_at = iv.end;
    }
  }
  return Feasible{};
}

}  // namespace xmrs
