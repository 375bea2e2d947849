#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xmrs/compare.hpp"
#include "xmrs/explain.hpp"
#include "xmrs/foil.hpp"
#include "xmrs/planner.hpp"
#include "xmrs/scenario.hpp"

namespace xmrs {

enum class SessionStatus { kOpen, kDeclaredCorrect, kGaveUp };

std::string_view to_string(SessionStatus s);
SessionStatus session_status_from(std::string_view s);

// The presented scenario cannot be solved at all.
class UnsolvableScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FoilRecord {
  FoilQuery query;
  FoilOutcome outcome;
  std::optional<FactorSet> factors;  // critical factors, feasible foils only
  Explanation explanation;
};

struct Session {
  std::string id;
  Scenario scenario;
  ProblemDomain live_domain;
  std::optional<Solution> current_solution;  // empty while live_domain is unsolvable
  std::optional<std::string> solve_error;
  std::vector<FoilRecord> foil_history;
  std::vector<RepairEdit> repair_log;
  SessionStatus status = SessionStatus::kOpen;
  std::optional<bool> initial_judgment;  // operator: does S look correct?
  std::optional<SessionMetrics> final_metrics;
  double z = 0.1;
};

// Pure workflow steps on a session value.
Session open_session(std::string id, Scenario scenario, double z = 0.1);
FoilRecord pose_foil(Session& s, const FoilQuery& q);
void patch_session_domain(Session& s, const RepairEdit& edit);
SessionMetrics finalize_session(Session& s, SessionStatus verdict);
void record_initial_judgment(Session& s, bool looks_correct);
SessionMetrics session_metrics(const Session& s);

nlohmann::json session_to_json(const Session& s);
Session session_from_json(const nlohmann::json& j);

// One JSON document per session under a data directory. Mutations on the same
// session are serialized; different sessions proceed independently.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir, double z = 0.1);

  const std::filesystem::path& dir() const { return dir_; }

  Session create(const std::string& scenario_label);
  Session get(const std::string& id) const;
  std::vector<std::string> list() const;

  FoilRecord post_foil(const std::string& id, const FoilQuery& q);
  Session patch_domain(const std::string& id, const RepairEdit& edit);
  Session patch_domain(const std::string& id, const nlohmann::json& edit);
  SessionMetrics finalize(const std::string& id, SessionStatus verdict);
  Session judge(const std::string& id, bool looks_correct);
  SessionMetrics metrics(const std::string& id) const;

  std::filesystem::path path_of(const std::string& id) const;

 private:
  std::mutex& lock_for(const std::string& id);
  Session load(const std::string& id) const;
  void save(const Session& s) const;
  std::string next_id();

  std::filesystem::path dir_;
  double z_;
  mutable std::mutex table_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

}  // namespace xmrs
