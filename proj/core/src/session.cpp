#include "xmrs/session.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "xmrs/errors.hpp"
#include "xmrs/serialization.hpp"

namespace xmrs {

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::kOpen: return "open";
    case SessionStatus::kDeclaredCorrect: return "declared-correct";
    case SessionStatus::kGaveUp: return "gave-up";
  }
  return "?";
}

SessionStatus session_status_from(std::string_view s) {
  if (s == "open") return SessionStatus::kOpen;
  if (s == "declared-correct") return SessionStatus::kDeclaredCorrect;
  if (s == "gave-up") return SessionStatus::kGaveUp;
  throw InvalidArgument("unknown session status '" + std::string(s) + "'");
}

namespace {

void require_open(const Session& s) {
  if (s.status != SessionStatus::kOpen) throw Conflict("session " + s.id + " is " + std::string(to_string(s.status)));
}

void resolve(Session& s) {
  try {
    s.current_solution = solve(s.live_domain);
    s.solve_error.reset();
  } catch (const UnsolvableError& e) {
    s.current_solution.reset();
    s.solve_error = e.what();
  } catch (const InvalidArgument& e) {
    s.current_solution.reset();
    s.solve_error = e.what();
  }
}

}  // namespace

Session open_session(std::string id, Scenario scenario, double z) {
  Session s;
  s.id = std::move(id);
  s.live_domain = scenario.presented;
  s.scenario = std::move(scenario);
  s.z = z;
  resolve(s);
  if (!s.current_solution) throw UnsolvableScenario("scenario '" + s.scenario.label + "' is unsolvable: " + *s.solve_error);
  return s;
}

FoilRecord pose_foil(Session& s, const FoilQuery& q) {
  require_open(s);
  if (!s.current_solution) throw Conflict("session " + s.id + " has no current solution: " + s.solve_error.value_or(""));
  const Solution& system = *s.current_solution;

  FoilRecord rec{q, build_foil(s.live_domain, system, q), std::nullopt, {}};
  if (rec.outcome.feasible()) {
    rec.factors = filter_critical(compare_solutions(system, rec.outcome.solution()), s.z);
  }
  rec.explanation = explain(s.live_domain, system, rec.outcome, rec.factors);
  s.foil_history.push_back(rec);
  return rec;
}

void patch_session_domain(Session& s, const RepairEdit& edit) {
  require_open(s);
  s.live_domain = apply_repair(s.live_domain, edit);
  s.repair_log.push_back(edit);
  resolve(s);
}

SessionMetrics finalize_session(Session& s, SessionStatus verdict) {
  if (verdict == SessionStatus::kOpen) throw InvalidArgument("verdict must be declared-correct or gave-up");
  require_open(s);
  s.status = verdict;
  s.final_metrics = compute_metrics(s.scenario, s.live_domain, s.repair_log.size());
  return *s.final_metrics;
}

void record_initial_judgment(Session& s, bool looks_correct) {
  require_open(s);
  if (s.initial_judgment) throw Conflict("initial judgment already recorded");
  s.initial_judgment = looks_correct;
}

SessionMetrics session_metrics(const Session& s) {
  if (s.final_metrics) return *s.final_metrics;
  return compute_metrics(s.scenario, s.live_domain, s.repair_log.size());
}

nlohmann::json session_to_json(const Session& s) {
  using json::to_json;
  const ProblemDomain& d = s.live_domain;
  nlohmann::json history = nlohmann::json::array();
  for (const auto& r : s.foil_history) {
    history.push_back({{"query", to_json(r.query)},
                       {"outcome", to_json(r.outcome, d)},
                       {"factors", r.factors ? to_json(*r.factors, d) : nlohmann::json(nullptr)},
                       {"explanation", to_json(r.explanation)}});
  }
  nlohmann::json repairs = nlohmann::json::array();
  for (const auto& e : s.repair_log) repairs.push_back(to_json(e, d));

  return {{"id", s.id},
          {"scenario", to_json(s.scenario)},
          {"live_domain", to_json(d)},
          {"current_solution", s.current_solution ? to_json(*s.current_solution, d) : nlohmann::json(nullptr)},
          {"solve_error", s.solve_error ? nlohmann::json(*s.solve_error) : nlohmann::json(nullptr)},
          {"foil_history", history},
          {"repair_log", repairs},
          {"status", to_string(s.status)},
          {"initial_judgment", s.initial_judgment ? nlohmann::json(*s.initial_judgment) : nlohmann::json(nullptr)},
          {"final_metrics", s.final_metrics ? to_json(*s.final_metrics, d) : nlohmann::json(nullptr)},
          {"z", s.z}};
}

Session session_from_json(const nlohmann::json& j) {
  try {
    Session s;
    s.id = j.at("id").get<std::string>();
    s.scenario = json::scenario_from_json(j.at("scenario"));
    s.live_domain = json::domain_from_json(j.at("live_domain"));
    const ProblemDomain& d = s.live_domain;
    if (!j.at("current_solution").is_null()) s.current_solution = json::solution_from_json(j.at("current_solution"), d);
    if (!j.at("solve_error").is_null()) s.solve_error = j.at("solve_error").get<std::string>();
    for (const auto& r : j.at("foil_history")) {
      FoilRecord rec{json::foil_query_from_json(r.at("query")), json::foil_outcome_from_json(r.at("outcome"), d),
                     std::nullopt, json::explanation_from_json(r.at("explanation"))};
      if (!r.at("factors").is_null()) rec.factors = json::factor_set_from_json(r.at("factors"), d);
      s.foil_history.push_back(std::move(rec));
    }
    for (const auto& e : j.at("repair_log")) s.repair_log.push_back(json::repair_edit_from_json(e, d));
    s.status = session_status_from(j.at("status").get<std::string>());
    if (!j.at("initial_judgment").is_null()) s.initial_judgment = j.at("initial_judgment").get<bool>();
    if (!j.at("final_metrics").is_null()) s.final_metrics = json::metrics_from_json(j.at("final_metrics"), d);
    s.z = j.value("z", 0.1);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed session: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

SessionStore::SessionStore(std::filesystem::path dir, double z) : dir_(std::move(dir)), z_(z) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path SessionStore::path_of(const std::string& id) const {
  const bool safe = !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
  if (!safe) throw NotFound("unknown session '" + id + "'");
  return dir_ / (id + ".json");
}

std::mutex& SessionStore::lock_for(const std::string& id) {
  std::lock_guard guard(table_mutex_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

Session SessionStore::load(const std::string& id) const {
  const auto path = path_of(id);
  std::ifstream in(path);
  if (!in) throw NotFound("unknown session '" + id + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("corrupt session file " + path.string() + ": " + e.what());
  }
  return session_from_json(j);
}

void SessionStore::save(const Session& s) const {
  const auto path = path_of(s.id);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << session_to_json(s).dump(2) << '\n';
    if (!out) throw std::runtime_error("failed to write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string SessionStore::next_id() {
  std::lock_guard guard(table_mutex_);
  long max_seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    const auto stem = entry.path().stem().string();
    if (entry.path().extension() != ".json" || stem.size() < 2 || stem[0] != 's') continue;
    try {
      max_seen = std::max(max_seen, std::stol(stem.substr(1)));
    } catch (const std::exception&) {
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%06ld", max_seen + 1);
  // reserve the name so concurrent creators never collide
  std::ofstream(dir_ / (std::string(buf) + ".json"), std::ios::app).close();
  return buf;
}

Session SessionStore::create(const std::string& scenario_label) {
  Scenario scenario = load_shipped_scenario(scenario_label);
  Session s = open_session("pending", std::move(scenario), z_);
  s.id = next_id();
  std::lock_guard guard(lock_for(s.id));
  save(s);
  return s;
}

Session SessionStore::get(const std::string& id) const { return load(id); }

std::vector<std::string> SessionStore::list() const {
  std::vector<std::string> ids;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() == ".json" && entry.file_size() > 0) ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

FoilRecord SessionStore::post_foil(const std::string& id, const FoilQuery& q) {
  std::lock_guard guard(lock_for(id));
  Session s = load(id);
  FoilRecord rec = pose_foil(s, q);
  save(s);
  return rec;
}

Session SessionStore::patch_domain(const std::string& id, const RepairEdit& edit) {
  std::lock_guard guard(lock_for(id));
  Session s = load(id);
  patch_session_domain(s, edit);
  save(s);
  return s;
}

Session SessionStore::patch_domain(const std::string& id, const nlohmann::json& edit) {
  std::lock_guard guard(lock_for(id));
  Session s = load(id);
  patch_session_domain(s, json::repair_edit_from_json(edit, s.live_domain));
  save(s);
  return s;
}

SessionMetrics SessionStore::finalize(const std::string& id, SessionStatus verdict) {
  std::lock_guard guard(lock_for(id));
  Session s = load(id);
  SessionMetrics m = finalize_session(s, verdict);
  save(s);
  return m;
}

Session SessionStore::judge(const std::string& id, bool looks_correct) {
  std::lock_guard guard(lock_for(id));
  Session s = load(id);
  record_initial_judgment(s, looks_correct);
  save(s);
  return s;
}

SessionMetrics SessionStore::metrics(const std::string& id) const { return session_metrics(load(id)); }

}  // namespace xmrs
