#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xmrs/domain.hpp"

namespace xmrs {

// Numbers of injected errors per category: (robot traits, task requirements, speeds).
struct ErrorTuple {
  std::size_t robot_errors = 0;
  std::size_t task_errors = 0;
  std::size_t speed_errors = 0;

  std::size_t total() const { return robot_errors + task_errors + speed_errors; }
  bool operator==(const ErrorTuple&) const = default;
};

struct Scenario {
  std::string label;
  ProblemDomain truth;      // D*
  ProblemDomain presented;  // D shown to the operator
  DomainDiff injected;
  ErrorTuple error_tuple;
  std::uint64_t seed = 0;

  bool operator==(const Scenario&) const = default;
};

// Emergency-response ground truth: 1 dumptruck, 2 firetrucks, 1 ambulance;
// 1 large debris, 2 small debris, 2 rescue humans, setup camp and defuse bomb.
// Start cells, task cells, obstacles and ranged requirements vary with `seed`.
ProblemDomain emergency_response_domain(std::uint64_t seed);

// Multiplicative factors used to corrupt cumulative traits and speeds.
const std::vector<double>& corruption_factors();

// Corrupts `truth` with the requested number of errors per category. Binary
// traits flip; cumulative traits (non-zero only) and speeds are scaled by a
// factor from corruption_factors(). No site is hit twice.
// Throws InvalidArgument if a category has fewer corruptible sites than asked.
Scenario generate_scenario(const ProblemDomain& truth, ErrorTuple tuple, std::uint64_t seed,
                           std::string label = {});

struct ShippedScenario {
  std::string label;
  ErrorTuple tuple;
  std::uint64_t seed;
};

// The six study scenarios, in presentation order.
const std::vector<ShippedScenario>& shipped_scenarios();

// Builds a shipped scenario by label; throws NotFound for unknown labels.
Scenario load_shipped_scenario(const std::string& label);

// Speed-error example: ambulance recorded at 40 m/s instead of 8 m/s.
Scenario debris_swap_speed_error();
// Same truth with robot, task and speed errors together.
Scenario debris_swap_combined_error();

struct RepairEdit {
  Site site;
  double value = 0.0;

  bool operator==(const RepairEdit&) const = default;
};

// Copy of `presented` with one value replaced. Rejects invalid sites,
// non-binary values for binary traits, negative traits and non-positive speeds.
ProblemDomain apply_repair(const ProblemDomain& presented, const RepairEdit& edit);

struct SessionMetrics {
  std::size_t repair_actions = 0;
  DomainDiff remaining;  // every site still differing from D*, injected or new
  std::size_t corrected = 0;
  std::size_t new_discrepancies = 0;
  std::size_t extraneous_corrections = 0;
  double rte_pct = 0.0;
  double tre_pct = 0.0;
  double rse_pct = 0.0;

  bool operator==(const SessionMetrics&) const = default;
};

SessionMetrics compute_metrics(const Scenario& scenario, const ProblemDomain& final_domain,
                               std::size_t repair_actions);

}  // namespace xmrs
