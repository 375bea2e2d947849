#pragma once

#include <string>
#include <variant>
#include <vector>

#include "xmrs/domain.hpp"
#include "xmrs/planner.hpp"

namespace xmrs {

enum class FoilOp { kAssign, kUnassign };

struct FoilChange {
  std::string robot;
  std::string task;
  FoilOp op = FoilOp::kAssign;

  bool operator==(const FoilChange&) const = default;
};

// "Why is robot not assigned to task?" questions plus complementary removals,
// applied in order on top of the system allocation.
struct FoilQuery {
  std::vector<FoilChange> changes;

  bool operator==(const FoilQuery&) const = default;
};

// Resolves the foil allocation A'. Throws InvalidArgument on an empty change
// list, unknown ids or an allocation whose shape does not match `d`.
AllocationMatrix apply_foil(const ProblemDomain& d, const AllocationMatrix& system, const FoilQuery& q);

struct FoilOutcome {
  AllocationMatrix foil_allocation;
  std::variant<Solution, InfeasibilityCause> result;

  bool feasible() const { return std::holds_alternative<Solution>(result); }
  const Solution& solution() const { return std::get<Solution>(result); }
  const InfeasibilityCause& cause() const { return std::get<InfeasibilityCause>(result); }
};

// Derives S' = <A', sigma', M'> by handing A' to the scheduler.
FoilOutcome build_foil(const ProblemDomain& d, const Solution& s, const FoilQuery& q);

struct Feasible {
  bool operator==(const Feasible&) const = default;
};

using Verdict = std::variant<Feasible, InfeasibilityCause>;

inline bool is_feasible(const Verdict& v) { return std::holds_alternative<Feasible>(v); }

// Audits an arbitrary solution record. Checks, in order: trait requirements,
// precedence (unallocated predecessors, then edge timing), motion plans (path
// present and legal, chained from the robot's previous position, robot intervals
// disjoint and long enough for travel plus work).
Verdict check_feasibility(const ProblemDomain& d, const Solution& s);

}  // namespace xmrs
