#include "xmrs/compare.hpp"

#include <cmath>
#include <limits>

#include "xmrs/errors.hpp"

namespace xmrs {

std::string_view to_string(ScheduleMetric metric) {
  switch (metric) {
    case ScheduleMetric::kMakespan: return "makespan";
    case ScheduleMetric::kTaskTime: return "task_time";
    case ScheduleMetric::kRobotMakespan: return "robot_makespan";
  }
  return "?";
}

double percent_difference(double system_s, double foil_s, PercentFormula formula) {
  if (system_s < 0.0 || foil_s < 0.0) throw InvalidArgument("durations must be non-negative");
  if (system_s == foil_s) return 0.0;
  switch (formula) {
    case PercentFormula::kSymmetric: return (foil_s - system_s) / ((foil_s + system_s) / 2.0);
    case PercentFormula::kRelative:
      if (system_s == 0.0) return std::numeric_limits<double>::infinity();
      return (foil_s - system_s) / system_s;
  }
  return 0.0;
}

long percent_points(double pd) {
  const double pct = std::abs(pd) * 100.0;
  if (!std::isfinite(pct)) return std::numeric_limits<long>::max();
  // absorb representation error such as 0.29 * 100 = 28.999999999999996
  return static_cast<long>(std::trunc(pct + 1e-9));
}

std::vector<AllocationFactor> compare_allocations(const AllocationMatrix& a, const AllocationMatrix& a_prime) {
  if (a.tasks() != a_prime.tasks() || a.robots() != a_prime.robots()) {
    throw InvalidArgument("allocation matrices differ in shape");
  }
  std::vector<AllocationFactor> out;
  for (std::size_t t = 0; t < a.tasks(); ++t) {
    auto sys = a.coalition(t);
    auto foil = a_prime.coalition(t);
    if (sys != foil) out.push_back({t, std::move(sys), std::move(foil)});
  }
  return out;
}

std::vector<ScheduleFactor> compare_schedules(const Schedule& sigma, const Schedule& sigma_prime,
                                              PercentFormula formula) {
  if (sigma.tasks.size() != sigma_prime.tasks.size() ||
      sigma.robot_finish.size() != sigma_prime.robot_finish.size()) {
    throw InvalidArgument("schedules cover different task or robot sets");
  }
  std::vector<ScheduleFactor> out;
  auto push = [&](ScheduleMetric metric, std::optional<std::size_t> subject, double s, double f) {
    out.push_back({metric, subject, s, f, percent_difference(s, f, formula), false});
  };

  push(ScheduleMetric::kMakespan, std::nullopt, makespan(sigma), makespan(sigma_prime));
  for (std::size_t t = 0; t < sigma.tasks.size(); ++t) {
    push(ScheduleMetric::kTaskTime, t, sigma.task_time(t), sigma_prime.task_time(t));
  }
  for (std::size_t r = 0; r < sigma.robot_finish.size(); ++r) {
    if (!sigma.robot_finish[r] && !sigma_prime.robot_finish[r]) continue;
    push(ScheduleMetric::kRobotMakespan, r, sigma.robot_makespan(r), sigma_prime.robot_makespan(r));
  }
  return out;
}

FactorSet compare_solutions(const Solution& s, const Solution& s_prime, PercentFormula formula) {
  return {compare_allocations(s.allocation, s_prime.allocation),
          compare_schedules(s.schedule, s_prime.schedule, formula)};
}

FactorSet filter_critical(const FactorSet& f, double z) {
  if (!(z >= 0.0)) throw InvalidArgument("threshold must be non-negative");
  FactorSet out;
  out.allocation = f.allocation;
  for (const auto& factor : f.schedule) {
    if (std::abs(factor.pd) >= z) {
      out.schedule.push_back(factor);
      out.schedule.back().critical = true;
    }
  }
  return out;
}

}  // namespace xmrs
