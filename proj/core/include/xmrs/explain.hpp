#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xmrs/compare.hpp"
#include "xmrs/domain.hpp"
#include "xmrs/foil.hpp"
#include "xmrs/planner.hpp"

namespace xmrs {

struct ExplainOptions {
  // Traits shown in capability lines, rendered in the domain's trait order.
  // Unset: carrying_capacity, robotic_arm and forklift where present, else all.
  std::optional<std::vector<std::string>> trait_subset;
};

struct Explanation {
  std::vector<std::string> capability_lines;
  std::optional<std::string> schedule_block;
  std::optional<std::string> cause_line;
  bool equivalent = false;  // feasible foil with no critical schedule difference
  std::string plain_text;

  bool operator==(const Explanation&) const = default;
};

inline constexpr const char* kCapabilityHeader = "Task and Robot Capabilities Comparison:";
inline constexpr const char* kSameTimeLine = "User's solution takes about the same time";

std::vector<std::string> default_trait_subset(const ProblemDomain& d);

// "ambulance([2500, 1, 0]) and dumptruck([5000, 0, 1]) can work D1([600, 0, 0])"
std::string render_capability_line(const AllocationFactor& factor, const ProblemDomain& d,
                                   const std::vector<std::string>& trait_subset);

// Headline plus per-robot and per-task bullets built from the critical schedule
// factors of `critical`; non-critical factors are ignored.
std::string render_schedule_block(const FactorSet& critical, const ProblemDomain& d,
                                  const AllocationMatrix& foil_allocation);

std::string render_cause(const InfeasibilityCause& cause, const ProblemDomain& d);

// `critical` must be present exactly when the foil is feasible.
Explanation explain(const ProblemDomain& d, const Solution& s, const FoilOutcome& outcome,
                    const std::optional<FactorSet>& critical, const ExplainOptions& options = {});

// Formatting helpers shared with the gateway.
std::string format_number(double v);   // 2500, 0.5, 1.25
std::string format_speed(double mps);  // 40.0, 7.5
std::string format_minutes(double seconds);  // two decimals, trailing zeros trimmed

}  // namespace xmrs
