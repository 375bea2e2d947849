#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xmrs/domain.hpp"
#include "xmrs/planner.hpp"

namespace xmrs {

// One task whose coalition differs between A and A'.
struct AllocationFactor {
  std::size_t task = 0;
  std::vector<std::size_t> system_coalition;
  std::vector<std::size_t> foil_coalition;

  bool operator==(const AllocationFactor&) const = default;
};

enum class ScheduleMetric {
  kMakespan,       // lambda
  kTaskTime,       // beta_m
  kRobotMakespan,  // alpha_n
};

std::string_view to_string(ScheduleMetric metric);

struct ScheduleFactor {
  ScheduleMetric metric = ScheduleMetric::kMakespan;
  std::optional<std::size_t> subject;  // task or robot; empty for the overall makespan
  double system_value = 0.0;           // seconds
  double foil_value = 0.0;             // seconds
  double pd = 0.0;                     // signed percent difference (ratio)
  bool critical = false;

  bool operator==(const ScheduleFactor&) const = default;
};

struct FactorSet {
  std::vector<AllocationFactor> allocation;
  std::vector<ScheduleFactor> schedule;

  bool operator==(const FactorSet&) const = default;
};

enum class PercentFormula {
  kSymmetric,  // (f - s) / ((f + s) / 2)
  kRelative,   // (f - s) / s
};

struct CompareOptions {
  PercentFormula formula = PercentFormula::kSymmetric;
  double z = 0.1;  // critical threshold on |pd|
};

// Signed percent difference between a system and a foil duration, as a ratio.
// Both zero is defined as no difference. Relative mode with system_s == 0 and a
// positive foil value saturates to +infinity.
double percent_difference(double system_s, double foil_s, PercentFormula formula = PercentFormula::kSymmetric);

// |pd| x 100 truncated toward zero.
long percent_points(double pd);

std::vector<AllocationFactor> compare_allocations(const AllocationMatrix& a, const AllocationMatrix& a_prime);

// One makespan factor, one task-time factor per task, and one robot-makespan
// factor per robot that works in at least one of the two schedules.
std::vector<ScheduleFactor> compare_schedules(const Schedule& sigma, const Schedule& sigma_prime,
                                              PercentFormula formula = PercentFormula::kSymmetric);

FactorSet compare_solutions(const Solution& s, const Solution& s_prime,
                            PercentFormula formula = PercentFormula::kSymmetric);

// Keeps every allocation factor and the schedule factors with |pd| >= z,
// flagging the survivors critical.
FactorSet filter_critical(const FactorSet& f, double z);

}  // namespace xmrs
