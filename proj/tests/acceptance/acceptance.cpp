// Acceptance suite: one PASS/FAIL line per primary criterion.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "run_command.hpp"
#include "temp_dir.hpp"
#include "xmrs/errors.hpp"
#include "xmrs/explain.hpp"
#include "xmrs/foil.hpp"
#include "xmrs/motion.hpp"
#include "xmrs/scenario.hpp"
#include "xmrs/serialization.hpp"
#include "xmrs/session.hpp"

using namespace xmrs;
using Json = nlohmann::json;

namespace {

struct Failure {
  std::string why;
};

void expect(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

const FoilQuery kD1ToDumptruck{{{"ambulance", "D1", FoilOp::kUnassign}, {"dumptruck", "D1", FoilOp::kAssign}}};

Explanation explain_foil(const ProblemDomain& d, const Solution& s, const FoilQuery& q) {
  const FoilOutcome o = build_foil(d, s, q);
  std::optional<FactorSet> fc;
  if (o.feasible()) fc = filter_critical(compare_solutions(s, o.solution()), 0.1);
  return explain(d, s, o, fc);
}

// --- reference explanation ---

void reference_explanation() {
  expect(percent_points(percent_difference(45.55, 63.4)) == 32, "(45.55, 63.4) does not render 32%");
  expect(percent_points(percent_difference(45.65, 63.22)) == 32, "(45.65, 63.22) does not render 32%");
  const std::regex headline(R"(User's solution takes 32% more time: [0-9]+(\.[0-9]{1,2})? minutes→[0-9]+(\.[0-9]{1,2})? minutes)");
  const std::vector<std::pair<Scenario, std::string>> rows{
      {debris_swap_speed_error(), "ambulance([2500, 1, 0]) and dumptruck([5000, 0, 1]) can work D1([600, 0, 0])"},
      {debris_swap_combined_error(), "ambulance([2500, 1, 0]) and dumptruck([5000, 1, 1]) can work D1([600, 0, 0])"},
  };
  for (const auto& [scenario, line] : rows) {
    const auto& d = scenario.presented;
    const Solution s = solve(d);
    const Explanation e = explain_foil(d, s, kD1ToDumptruck);
    expect(e.capability_lines == std::vector<std::string>{line}, scenario.label + ": capability line mismatch");
    expect(e.schedule_block.has_value(), scenario.label + ": no schedule block");
    const std::string first = e.schedule_block->substr(0, e.schedule_block->find('\n'));
    expect(std::regex_match(first, headline), scenario.label + ": headline '" + first + "'");
    expect(e.schedule_block->find("D1 takes 154% more time: ambulance(40.0m/s)→dumptruck(4.0m/s)") != std::string::npos,
           scenario.label + ": D1 speed reveal missing");
  }
}

// --- feasibility triad ---------------------------------------------------

// Robots and tasks in different connected components.
bool separated(const ProblemDomain& d, std::size_t robot, std::size_t task) {
  return xmrs::testing::bfs_steps(d.map, d.map.robot_starts[robot], d.network.tasks[task].location) < 0;
}

void check_cause(const ProblemDomain& d, const AllocationMatrix& a, const InfeasibilityCause& c) {
  const std::string_view kind = cause_kind(c);
  expect(kind == "trait-violation" || kind == "precedence-violation" || kind == "no-motion-plan",
         "unknown cause kind");
  if (const auto* t = std::get_if<TraitViolation>(&c)) {
    const auto coalition = a.coalition(t->task);
    expect(t->aggregate == aggregate_traits(std::span<const std::size_t>(coalition), d.q, d.traits),
           "trait cause aggregate does not match the coalition");
    expect(!coalition_satisfies(d.ystar[t->task], t->aggregate), "trait cause on a satisfied task");
  } else if (const auto* p = std::get_if<PrecedenceViolation>(&c)) {
    expect(std::find(d.network.edges.begin(), d.network.edges.end(), p->edge) != d.network.edges.end(),
           "precedence cause names a non-edge");
  } else {
    const auto& m = std::get<MotionViolation>(c);
    expect(a.at(m.task, m.robot), "motion cause names an unallocated pair");
    expect(separated(d, m.robot, m.task), "motion cause on a reachable pair");
  }
}

void feasibility_triad() {
  {
    const auto d = load_shipped_scenario("scenario-1").presented;
    const Solution s = solve(d);
    FoilQuery q;
    for (std::size_t r : s.allocation.coalition(d.task_index("H1"))) q.changes.push_back({d.q.ids[r], "H1", FoilOp::kUnassign});
    q.changes.push_back({"dumptruck", "H1", FoilOp::kAssign});
    const FoilOutcome o = build_foil(d, s, q);
    expect(!o.feasible(), "stretcher foil feasible");
    const TraitViolation expected{d.task_index("H1"), d.ystar[d.task_index("H1")], d.q.rows[d.robot_index("dumptruck")]};
    expect(o.cause() == InfeasibilityCause{expected}, "stretcher foil: wrong cause");
    expect(render_cause(o.cause(), d).find("requires stretcher") != std::string::npos, "stretcher not named");
  }
  {
    const auto d = load_shipped_scenario("scenario-1").presented;
    const Solution s = solve(d);
    FoilQuery q;
    for (std::size_t r : s.allocation.coalition(d.task_index("C1"))) q.changes.push_back({d.q.ids[r], "C1", FoilOp::kUnassign});
    const FoilOutcome o = build_foil(d, s, q);
    expect(!o.feasible(), "camp foil feasible");
    const PrecedenceViolation expected{{d.task_index("C1"), d.task_index("H1")}};
    expect(o.cause() == InfeasibilityCause{expected}, "camp foil: wrong cause");
  }
  {
    const auto d = debris_swap_speed_error().presented;  // firetrucks are walled into a pocket
    const Solution s = solve(d);
    const FoilOutcome o = build_foil(
        d, s, {{{"dumptruck", "D3", FoilOp::kUnassign}, {"firetruck1", "D3", FoilOp::kAssign}}});
    expect(!o.feasible(), "walled-off foil feasible");
    const MotionViolation expected{d.task_index("D3"), d.robot_index("firetruck1")};
    expect(o.cause() == InfeasibilityCause{expected}, "walled-off foil: wrong cause");
  }

  std::vector<ProblemDomain> domains{load_shipped_scenario("scenario-1").presented,
                                     load_shipped_scenario("scenario-4").presented,
                                     debris_swap_speed_error().presented};
  std::vector<Solution> solutions;
  for (const auto& d : domains) solutions.push_back(solve(d));
  std::mt19937_64 rng(2023);
  std::set<std::string> kinds;
  int infeasible = 0;
  for (int attempt = 0; infeasible < 200 && attempt < 100000; ++attempt) {
    const std::size_t k = rng() % domains.size();
    const auto& d = domains[k];
    FoilQuery q;
    const int changes = 1 + static_cast<int>(rng() % 4);
    for (int c = 0; c < changes; ++c) {
      q.changes.push_back({d.q.ids[rng() % d.num_robots()], d.network.tasks[rng() % d.num_tasks()].id,
                           rng() % 3 == 0 ? FoilOp::kAssign : FoilOp::kUnassign});
    }
    const FoilOutcome o = build_foil(d, solutions[k], q);
    if (o.feasible()) continue;
    ++infeasible;
    check_cause(d, o.foil_allocation, o.cause());
    kinds.insert(std::string(cause_kind(o.cause())));
  }
  expect(infeasible == 200, "could not draw 200 infeasible foils");
  expect(kinds.size() == 3, "random foils did not exercise all three causes");
}

// --- planner optimality ----------------------------------------------------

void planner_optimality() {
  int checked = 0;
  std::uint64_t seed = 1;
  while (checked < 100) {
    const std::size_t tasks = 1 + seed % 4;
    const std::size_t robots = std::max<std::size_t>(1, std::min<std::size_t>(3, 9 / tasks));
    const auto d = xmrs::testing::random_instance(seed * 7919, tasks, robots);
    ++seed;
    expect(tasks * robots <= 9, "instance too large");
    const auto oracle = xmrs::testing::brute_force_optimum(d);
    if (!oracle) {
      bool threw = false;
      try {
        solve(d);
      } catch (const UnsolvableError&) {
        threw = true;
      }
      expect(threw, "solve found a solution the oracle says does not exist");
      continue;
    }
    const Solution s = solve(d);
    const double got = makespan(s.schedule);
    if (std::abs(got - oracle->makespan) > 1e-9) {
      std::ostringstream os;
      os << "seed " << seed - 1 << ": solve " << got << " vs oracle " << oracle->makespan;
      throw Failure{os.str()};
    }
    expect(is_feasible(check_feasibility(d, s)), "optimal solution fails the checker");
    ++checked;
  }
}

// --- motion oracle -----------------------------------------------------------

void motion_oracle() {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 500; ++i) {
    const GridMap m = xmrs::testing::random_map(rng, 20, 20, 0.25);
    const Cell a = xmrs::testing::random_free_cell(rng, m);
    const Cell b = xmrs::testing::random_free_cell(rng, m);
    const int steps = xmrs::testing::bfs_steps(m, a, b);
    if (steps < 0) {
      bool threw = false;
      try {
        plan_path(m, a, b);
      } catch (const NoPathError&) {
        threw = true;
      }
      expect(threw, "A* found a path BFS could not");
      continue;
    }
    const Path p = plan_path(m, a, b);
    expect(p.cells.size() == static_cast<std::size_t>(steps) + 1 && p.length_m == steps * m.cell_size,
           "map " + std::to_string(i) + ": A* length differs from BFS");
    expect(path_valid(m, p), "invalid path");
  }
}

// --- critical filtering ------------------------------------------------------

void critical_filtering() {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> pd(-2.0, 2.0);
  std::uniform_real_distribution<double> zs(0.0, 0.5);
  for (int trial = 0; trial < 2000; ++trial) {
    FactorSet f;
    const std::size_t na = rng() % 4;
    for (std::size_t i = 0; i < na; ++i) f.allocation.push_back({i, {0}, {1}});
    const std::size_t ns = 1 + rng() % 12;
    for (std::size_t i = 0; i < ns; ++i) {
      double v = pd(rng);
      if (rng() % 5 == 0) v = (rng() & 1U) ? 0.1 : -0.1;  // exact threshold
      f.schedule.push_back({ScheduleMetric::kTaskTime, i, 1.0, 1.0, v, false});
    }
    const FactorSet c = filter_critical(f, 0.1);
    expect(c.allocation == f.allocation, "allocation factors dropped");
    std::set<std::size_t> kept;
    for (const auto& s : c.schedule) {
      expect(s.critical, "kept factor not marked critical");
      kept.insert(*s.subject);
    }
    for (const auto& s : f.schedule) {
      expect((std::abs(s.pd) >= 0.1) == (kept.count(*s.subject) == 1), "kept iff |pd| >= 0.1 violated");
    }
    expect(filter_critical(c, 0.1) == c, "not idempotent");
    double z1 = zs(rng), z2 = zs(rng);
    if (z1 > z2) std::swap(z1, z2);
    const FactorSet c1 = filter_critical(f, z1);
    const FactorSet c2 = filter_critical(f, z2);
    std::set<std::size_t> s1;
    for (const auto& s : c1.schedule) s1.insert(*s.subject);
    for (const auto& s : c2.schedule) expect(s1.count(*s.subject) == 1, "not monotone in z");
  }
}

// --- scenario lab ----------------------------------------------------------

void scenario_lab() {
  const std::vector<ErrorTuple> tuples{{0, 0, 0}, {3, 1, 1}, {0, 0, 0}, {2, 2, 1}, {0, 5, 0}, {3, 2, 0}};
  const auto& shipped = shipped_scenarios();
  expect(shipped.size() == tuples.size(), "expected six shipped scenarios");
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    expect(shipped[i].tuple == tuples[i], shipped[i].label + ": tuple mismatch");
    const Scenario s = load_shipped_scenario(shipped[i].label);
    expect(s.injected.count(Matrix::kQ) == tuples[i].robot_errors &&
               s.injected.count(Matrix::kYstar) == tuples[i].task_errors &&
               s.injected.count(Matrix::kPhi) == tuples[i].speed_errors,
           s.label + ": injected cardinalities differ from the tuple");
    expect(diff_domains(s.presented, s.truth) == s.injected, s.label + ": injected set is not the diff");

    Session session = open_session("acceptance", s);
    for (const auto& e : s.injected.entries) patch_session_domain(session, {e.site, e.expected});
    const SessionMetrics m = finalize_session(session, SessionStatus::kDeclaredCorrect);
    expect(m.rte_pct == 0.0 && m.tre_pct == 0.0 && m.rse_pct == 0.0, s.label + ": nonzero error percentages");
    expect(m.extraneous_corrections == 0, s.label + ": extraneous corrections after a perfect repair");
    expect(m.remaining.empty(), s.label + ": remaining discrepancies");
  }
}

// --- gateway round trip ----------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void gateway_round_trip() {
  using xmrs::testing::quote;
  using xmrs::testing::run_command;
  xmrs::testing::TempDir tmp;
  const std::string cli = quote(XMRS_CLI_PATH);
  const std::string data = " --data " + quote(tmp.path().string());
  const auto foil_path = tmp.path() / "foil.json";
  {
    std::ofstream out(foil_path);
    out << json::to_json(kD1ToDumptruck).dump();
  }

  const auto created = run_command(cli + " session" + data + " create debris-swap-combined");
  expect(created.exit_code == 0, "create failed");
  const std::string id = Json::parse(created.out).at("id");
  const auto foil = run_command(cli + " session" + data + " foil " + id + " " + quote(foil_path.string()));
  expect(foil.exit_code == 0 && Json::parse(foil.out).at("outcome").at("feasible") == true, "foil not feasible");
  expect(run_command(cli + " session" + data + " patch " + id + " 'phi[ambulance]' 8").exit_code == 0, "patch 1 failed");
  expect(run_command(cli + " session" + data + " patch " + id + " 'Q[firetruck1][carrying_capacity]' 3000").exit_code == 0,
         "patch 2 failed");
  const auto fin = run_command(cli + " session" + data + " finalize " + id + " gave-up");
  expect(fin.exit_code == 0, "finalize failed");

  const auto file = tmp.path() / (id + ".json");
  const std::string bytes = slurp(file);
  const Session loaded = session_from_json(Json::parse(bytes));
  expect(session_to_json(loaded).dump(2) + "\n" == bytes, "reload is not byte identical");
  expect(run_command(cli + " session" + data + " show " + id).out == bytes, "show differs from the stored file");

  // Independent recount: replay the log on the presented domain, compare cell by cell.
  expect(loaded.repair_log.size() == 2, "repair log length");
  ProblemDomain replay = loaded.scenario.presented;
  for (const auto& e : loaded.repair_log) set_value(replay, e.site, e.value);
  expect(replay == loaded.live_domain, "replayed log differs from the live domain");
  const ProblemDomain& truth = loaded.scenario.truth;
  std::size_t remaining = 0, injected_left = 0, per[3] = {0, 0, 0}, per_total[3] = {0, 0, 0};
  auto visit = [&](Matrix m, std::size_t row, std::size_t col, double now, double want) {
    const Site site{m, row, col};
    const bool injected = loaded.scenario.injected.contains(site);
    if (injected) ++per_total[static_cast<int>(m)];
    if (now == want) return;
    ++remaining;
    if (injected) {
      ++injected_left;
      ++per[static_cast<int>(m)];
    }
  };
  for (std::size_t r = 0; r < truth.num_robots(); ++r) {
    for (std::size_t u = 0; u < truth.num_traits(); ++u) visit(Matrix::kQ, r, u, replay.q.rows[r][u], truth.q.rows[r][u]);
    visit(Matrix::kPhi, r, 0, replay.phi[r], truth.phi[r]);
  }
  for (std::size_t t = 0; t < truth.num_tasks(); ++t) {
    for (std::size_t u = 0; u < truth.num_traits(); ++u) visit(Matrix::kYstar, t, u, replay.ystar[t][u], truth.ystar[t][u]);
  }
  const std::size_t corrected = loaded.scenario.injected.size() - injected_left;
  const std::size_t extraneous = loaded.repair_log.size() > corrected ? loaded.repair_log.size() - corrected : 0;
  auto pct = [&](int k) { return per_total[k] ? 100.0 * per[k] / per_total[k] : 0.0; };

  const Json reported = Json::parse(fin.out);
  const Json stored = Json::parse(run_command(cli + " metrics " + quote(file.string())).out);
  for (const Json& m : {reported, stored}) {
    expect(m.at("remaining").size() == remaining, "remaining count differs from recount");
    expect(m.at("corrected") == corrected, "corrected differs from recount");
    expect(m.at("extraneous_corrections") == extraneous, "extraneous differs from recount");
    expect(std::abs(m.at("rte_pct").get<double>() - pct(0)) < 1e-9 &&
               std::abs(m.at("tre_pct").get<double>() - pct(1)) < 1e-9 &&
               std::abs(m.at("rse_pct").get<double>() - pct(2)) < 1e-9,
           "category percentages differ from recount");
  }
  expect(loaded.final_metrics.has_value() && loaded.status == SessionStatus::kGaveUp, "final state not persisted");
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"reference-explanation", 1.0, reference_explanation},
      {"feasibility-triad", 10.0, feasibility_triad},
      {"planner-optimality-oracle", 60.0, planner_optimality},
      {"motion-oracle", 30.0, motion_oracle},
      {"critical-filtering", 60.0, critical_filtering},
      {"scenario-lab", 60.0, scenario_lab},
      {"gateway-round-trip", 60.0, gateway_round_trip},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string why;
    try {
      c.run();
    } catch (const Failure& f) {
      why = f.why;
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (why.empty() && secs > c.budget_s) why = "over the " + std::to_string(c.budget_s) + " s budget";
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(3);
    line << (why.empty() ? "PASS" : "FAIL") << "  " << c.name << "  (" << secs << " s)";
    if (!why.empty()) line << "  " << why;
    std::cout << line.str() << std::endl;
    failures += !why.empty();
  }
  std::cout << "acceptance: " << criteria.size() - static_cast<std::size_t>(failures) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures ? 1 : 0;
}
