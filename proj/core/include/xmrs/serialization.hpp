#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "xmrs/compare.hpp"
#include "xmrs/domain.hpp"
#include "xmrs/explain.hpp"
#include "xmrs/foil.hpp"
#include "xmrs/planner.hpp"
#include "xmrs/scenario.hpp"

// JSON wire formats. Anything that refers to robots, tasks or traits does so by
// name, so decoding needs the domain those names resolve against. Decoders throw
// InvalidArgument on malformed documents or unknown names.
namespace xmrs::json {

using Json = nlohmann::json;

Json to_json(const ProblemDomain& d);
ProblemDomain domain_from_json(const Json& j);

Json to_json(const Solution& s, const ProblemDomain& d);
Solution solution_from_json(const Json& j, const ProblemDomain& d);

Json to_json(const FoilQuery& q);
FoilQuery foil_query_from_json(const Json& j);

Json to_json(const InfeasibilityCause& c, const ProblemDomain& d);
InfeasibilityCause cause_from_json(const Json& j, const ProblemDomain& d);

Json to_json(const FoilOutcome& o, const ProblemDomain& d);
FoilOutcome foil_outcome_from_json(const Json& j, const ProblemDomain& d);

Json to_json(const FactorSet& f, const ProblemDomain& d);
FactorSet factor_set_from_json(const Json& j, const ProblemDomain& d);

Json to_json(const Explanation& e);
Explanation explanation_from_json(const Json& j);

Json to_json(const Site& s, const ProblemDomain& d);
Site site_from_json(const Json& j, const ProblemDomain& d);

Json to_json(const RepairEdit& e, const ProblemDomain& d);
RepairEdit repair_edit_from_json(const Json& j, const ProblemDomain& d);

Json to_json(const DomainDiff& diff, const ProblemDomain& d);
DomainDiff diff_from_json(const Json& j, const ProblemDomain& d);

// Presented domain fields at top level plus label, seed, error_tuple, injected
// and truth_overlay (the D* values at each injected site).
Json to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

Json to_json(const SessionMetrics& m, const ProblemDomain& d);
SessionMetrics metrics_from_json(const Json& j, const ProblemDomain& d);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& session_id, const std::string& scenario_label,
                            const SessionMetrics& m);

}  // namespace xmrs::json
