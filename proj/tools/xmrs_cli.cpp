// Command line front end: batch solve/foil/explain, scenario generation,
// session metrics, scripted sessions and the HTTP gateway.
//
// Exit codes: 0 ok, 2 invalid input, 3 infeasible or unsolvable.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "http_gateway.hpp"
#include "xmrs/errors.hpp"
#include "xmrs/serialization.hpp"
#include "xmrs/session.hpp"

namespace {

using Json = nlohmann::json;
using namespace xmrs;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_json(const Json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + out_path);
}

PercentFormula formula_from(const std::string& s) {
  if (s == "symmetric") return PercentFormula::kSymmetric;
  if (s == "relative") return PercentFormula::kRelative;
  throw InvalidArgument("formula must be symmetric or relative");
}

ErrorTuple tuple_from(const std::string& s) {
  std::vector<std::size_t> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      parts.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw InvalidArgument("--tuple expects three non-negative integers, got '" + s + "'");
    }
  }
  if (parts.size() != 3) throw InvalidArgument("--tuple expects a,b,c");
  return {parts[0], parts[1], parts[2]};
}

std::string default_data_dir() {
  if (const char* env = std::getenv("XMRS_DATA_DIR")) return env;
  return "xmrs-data";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contrastive explanations for multi-robot task allocation, scheduling and motion planning"};
  app.require_subcommand(1);

  std::string out_path;

  // solve -----------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "Solve a domain file and print the solution");
  std::string domain_path;
  solve_cmd->add_option("domain", domain_path, "Domain JSON")->required();
  solve_cmd->add_option("-o,--out", out_path, "Write to file instead of stdout");

  // foil ------------------------------------------------------------------
  auto* foil_cmd = app.add_subcommand("foil", "Build the foil solution for an alternative allocation");
  std::string solution_path, foil_path;
  foil_cmd->add_option("domain", domain_path)->required();
  foil_cmd->add_option("solution", solution_path)->required();
  foil_cmd->add_option("foil", foil_path)->required();
  foil_cmd->add_option("-o,--out", out_path);

  // explain ---------------------------------------------------------------
  auto* explain_cmd = app.add_subcommand("explain", "Foil + comparison + natural-language explanation");
  double z = 0.1;
  std::string formula = "symmetric";
  std::vector<std::string> traits;
  bool text_only = false;
  explain_cmd->add_option("domain", domain_path)->required();
  explain_cmd->add_option("solution", solution_path)->required();
  explain_cmd->add_option("foil", foil_path)->required();
  explain_cmd->add_option("--z", z, "Critical threshold on |percent difference|")->check(CLI::NonNegativeNumber);
  explain_cmd->add_option("--formula", formula, "symmetric or relative");
  explain_cmd->add_option("--traits", traits, "Traits shown in capability lines")->delimiter(',');
  explain_cmd->add_flag("--text", text_only, "Print only the plain-text explanation");
  explain_cmd->add_option("-o,--out", out_path);

  // scenario --------------------------------------------------------------
  auto* scenario_cmd = app.add_subcommand("scenario", "Scenario lab");
  scenario_cmd->require_subcommand(1);
  auto* gen_cmd = scenario_cmd->add_subcommand("gen", "Generate a corrupted scenario");
  std::string tuple_text;
  std::uint64_t seed = 0;
  std::string truth_path, label;
  gen_cmd->add_option("--tuple", tuple_text, "robot,task,speed error counts")->required();
  gen_cmd->add_option("--seed", seed)->required();
  gen_cmd->add_option("--truth", truth_path, "Ground-truth domain (default: emergency fixture for --seed)");
  gen_cmd->add_option("--label", label);
  gen_cmd->add_option("-o,--out", out_path);
  auto* list_cmd = scenario_cmd->add_subcommand("list", "List shipped scenarios");
  auto* show_cmd = scenario_cmd->add_subcommand("show", "Print a shipped scenario");
  show_cmd->add_option("label", label)->required();
  show_cmd->add_option("-o,--out", out_path);
  bool truth_only = false;
  show_cmd->add_flag("--truth", truth_only, "Print the ground-truth domain instead");

  // metrics ---------------------------------------------------------------
  auto* metrics_cmd = app.add_subcommand("metrics", "Repair metrics for a persisted session");
  std::string session_path;
  bool csv = false;
  metrics_cmd->add_option("session", session_path, "Session JSON file")->required();
  metrics_cmd->add_flag("--csv", csv, "Emit a CSV header and row");

  // session ---------------------------------------------------------------
  auto* session_cmd = app.add_subcommand("session", "Drive a persisted session without the HTTP layer");
  session_cmd->require_subcommand(1);
  std::string data_dir = default_data_dir();
  session_cmd->add_option("--data", data_dir, "Session directory (env XMRS_DATA_DIR)");
  std::string session_id, site_text, verdict;
  double value = 0.0;
  auto* s_create = session_cmd->add_subcommand("create", "Open a session on a shipped scenario");
  s_create->add_option("scenario", label)->required();
  auto* s_show = session_cmd->add_subcommand("show", "Print a session");
  s_show->add_option("id", session_id)->required();
  auto* s_foil = session_cmd->add_subcommand("foil", "Pose a foil");
  s_foil->add_option("id", session_id)->required();
  s_foil->add_option("foil", foil_path, "Foil JSON")->required();
  auto* s_patch = session_cmd->add_subcommand("patch", "Change one value of the live domain");
  s_patch->add_option("id", session_id)->required();
  s_patch->add_option("site", site_text, "e.g. phi[ambulance], Q[dumptruck][forklift]")->required();
  s_patch->add_option("value", value)->required();
  auto* s_judge = session_cmd->add_subcommand("judge", "Record the initial correctness judgment");
  bool looks_correct = false;
  s_judge->add_option("id", session_id)->required();
  s_judge->add_option("looks_correct", looks_correct)->required();
  auto* s_finalize = session_cmd->add_subcommand("finalize", "Close a session");
  s_finalize->add_option("id", session_id)->required();
  s_finalize->add_option("verdict", verdict, "declared-correct or gave-up")->required();

  // serve -----------------------------------------------------------------
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP gateway");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve_cmd->add_option("--port", port);
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--data", data_dir, "Session directory (env XMRS_DATA_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*solve_cmd) {
      const ProblemDomain d = json::domain_from_json(read_json(domain_path));
      write_json(json::to_json(solve(d), d), out_path);
    } else if (*foil_cmd) {
      const ProblemDomain d = json::domain_from_json(read_json(domain_path));
      const Solution s = json::solution_from_json(read_json(solution_path), d);
      const FoilOutcome o = build_foil(d, s, json::foil_query_from_json(read_json(foil_path)));
      write_json(json::to_json(o, d), out_path);
      return o.feasible() ? kExitOk : kExitInfeasible;
    } else if (*explain_cmd) {
      const ProblemDomain d = json::domain_from_json(read_json(domain_path));
      const Solution s = json::solution_from_json(read_json(solution_path), d);
      const FoilOutcome o = build_foil(d, s, json::foil_query_from_json(read_json(foil_path)));
      std::optional<FactorSet> fc;
      if (o.feasible()) fc = filter_critical(compare_solutions(s, o.solution(), formula_from(formula)), z);
      ExplainOptions opts;
      if (!traits.empty()) opts.trait_subset = traits;
      const Explanation e = explain(d, s, o, fc, opts);
      if (text_only) {
        std::cout << e.plain_text << '\n';
      } else {
        Json j = json::to_json(e);
        j["outcome"] = json::to_json(o, d);
        j["factors"] = fc ? json::to_json(*fc, d) : Json(nullptr);
        write_json(j, out_path);
      }
    } else if (*gen_cmd) {
      const ProblemDomain truth =
          truth_path.empty() ? emergency_response_domain(seed) : json::domain_from_json(read_json(truth_path));
      write_json(json::to_json(generate_scenario(truth, tuple_from(tuple_text), seed, label)), out_path);
    } else if (*list_cmd) {
      for (const auto& s : shipped_scenarios()) {
        std::cout << s.label << "  (" << s.tuple.robot_errors << "," << s.tuple.task_errors << ","
                  << s.tuple.speed_errors << ")  seed " << s.seed << '\n';
      }
      std::cout << "debris-swap-speed\ndebris-swap-combined\n";
    } else if (*show_cmd) {
      const Scenario s = load_shipped_scenario(label);
      write_json(truth_only ? json::to_json(s.truth) : json::to_json(s), out_path);
    } else if (*metrics_cmd) {
      const Session s = session_from_json(read_json(session_path));
      const SessionMetrics m = session_metrics(s);
      if (csv) {
        std::cout << json::metrics_csv_header() << '\n' << json::metrics_csv_row(s.id, s.scenario.label, m) << '\n';
      } else {
        write_json(json::to_json(m, s.live_domain), out_path);
      }
    } else if (*session_cmd) {
      SessionStore store(data_dir);
      if (*s_create) {
        write_json(session_to_json(store.create(label)), out_path);
      } else if (*s_show) {
        write_json(session_to_json(store.get(session_id)), out_path);
      } else if (*s_foil) {
        const FoilRecord rec = store.post_foil(session_id, json::foil_query_from_json(read_json(foil_path)));
        const ProblemDomain d = store.get(session_id).live_domain;
        write_json({{"outcome", json::to_json(rec.outcome, d)}, {"explanation", json::to_json(rec.explanation)}},
                   out_path);
        return rec.outcome.feasible() ? kExitOk : kExitInfeasible;
      } else if (*s_patch) {
        const Session current = store.get(session_id);
        const Session s = store.patch_domain(session_id, RepairEdit{parse_site(site_text, current.live_domain), value});
        write_json(session_to_json(s), out_path);
        return s.current_solution ? kExitOk : kExitInfeasible;
      } else if (*s_judge) {
        write_json(session_to_json(store.judge(session_id, looks_correct)), out_path);
      } else if (*s_finalize) {
        const SessionMetrics m = store.finalize(session_id, session_status_from(verdict));
        write_json(json::to_json(m, store.get(session_id).live_domain), out_path);
      }
    } else if (*serve_cmd) {
      SessionStore store(data_dir);
      HttpGateway gateway(store);
      const int bound = gateway.bind(host, port);
      if (bound < 0) {
        std::cerr << "cannot bind " << host << ":" << port << '\n';
        return kExitInvalid;
      }
      std::cerr << "listening on http://" << host << ":" << bound << " (data: " << data_dir << ")\n";
      return gateway.serve() ? kExitOk : kExitInvalid;
    }
  } catch (const UnsolvableError& e) {
    std::cerr << "unsolvable: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const UnsolvableScenario& e) {
    std::cerr << "unsolvable: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NotFound& e) {
    std::cerr << "not found: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Conflict& e) {
    std::cerr << "conflict: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
