#include "xmrs/serialization.hpp"

#include <algorithm>
#include <sstream>

#include "xmrs/errors.hpp"

namespace xmrs::json {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed ") + what + ": " + e.what());
  }
}

Json cell_json(Cell c) { return Json::array({c.x, c.y}); }

Cell cell_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("cell must be [x, y]");
  return {j.at(0).get<int>(), j.at(1).get<int>()};
}

Json names(const std::vector<std::size_t>& robots, const ProblemDomain& d) {
  Json out = Json::array();
  for (std::size_t r : robots) out.push_back(d.q.ids.at(r));
  return out;
}

std::vector<std::size_t> robots_from(const Json& j, const ProblemDomain& d) {
  std::vector<std::size_t> out;
  for (const auto& name : j) out.push_back(d.robot_index(name.get<std::string>()));
  return out;
}

std::string_view class_name(TraitClass c) { return c == TraitClass::kBinary ? "binary" : "cumulative"; }

TraitClass class_from(const std::string& s) {
  if (s == "binary") return TraitClass::kBinary;
  if (s == "cumulative") return TraitClass::kCumulative;
  throw InvalidArgument("unknown trait class '" + s + "'");
}

Matrix matrix_from(const std::string& s) {
  if (s == "Q") return Matrix::kQ;
  if (s == "Ystar") return Matrix::kYstar;
  if (s == "phi") return Matrix::kPhi;
  throw InvalidArgument("unknown matrix '" + s + "'");
}

ScheduleMetric metric_from(const std::string& s) {
  if (s == "makespan") return ScheduleMetric::kMakespan;
  if (s == "task_time") return ScheduleMetric::kTaskTime;
  if (s == "robot_makespan") return ScheduleMetric::kRobotMakespan;
  throw InvalidArgument("unknown schedule factor kind '" + s + "'");
}

Path path_from(const Json& j, const GridMap& map) {
  Path p;
  for (const auto& c : j) p.cells.push_back(cell_from(c));
  if (p.cells.empty()) throw InvalidArgument("empty path");
  p.length_m = static_cast<double>(p.cells.size() - 1) * map.cell_size;
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------

Json to_json(const ProblemDomain& d) {
  Json traits = Json::array();
  for (const auto& t : d.traits) traits.push_back({{"name", t.name}, {"class", class_name(t.kind)}});

  Json robots = Json::array();
  for (std::size_t r = 0; r < d.num_robots(); ++r) {
    robots.push_back({{"name", d.q.ids[r]},
                      {"traits", d.q.rows[r]},
                      {"speed", d.phi.at(r)},
                      {"start", cell_json(d.map.robot_starts.at(r))}});
  }

  Json tasks = Json::array();
  for (std::size_t t = 0; t < d.num_tasks(); ++t) {
    const Task& task = d.network.tasks[t];
    Json jt{{"name", task.id},
            {"location", cell_json(task.location)},
            {"work_duration", task.work_duration},
            {"requirements", d.ystar.at(t)}};
    if (!task.display_name.empty()) jt["display_name"] = task.display_name;
    tasks.push_back(std::move(jt));
  }

  Json precedence = Json::array();
  for (const auto& e : d.network.edges) {
    precedence.push_back({d.network.tasks.at(e.before).id, d.network.tasks.at(e.after).id});
  }

  Json blocked = Json::array();
  for (const Cell& c : d.map.blocked) blocked.push_back(cell_json(c));

  return {{"traits", traits},
          {"robots", robots},
          {"tasks", tasks},
          {"precedence", precedence},
          {"map",
           {{"width", d.map.width}, {"height", d.map.height}, {"cell_size", d.map.cell_size}, {"blocked", blocked}}}};
}

ProblemDomain domain_from_json(const Json& j) {
  return guarded("domain", [&] {
    ProblemDomain d;
    for (const auto& t : j.at("traits")) {
      d.traits.push_back({t.at("name").get<std::string>(), class_from(t.value("class", "cumulative"))});
    }
    for (const auto& r : j.at("robots")) {
      d.q.ids.push_back(r.at("name").get<std::string>());
      d.q.rows.push_back(r.at("traits").get<TraitVector>());
      d.phi.push_back(r.at("speed").get<double>());
      d.map.robot_starts.push_back(cell_from(r.at("start")));
    }
    for (const auto& t : j.at("tasks")) {
      d.network.tasks.push_back({t.at("name").get<std::string>(), t.value("display_name", std::string{}),
                                 cell_from(t.at("location")), t.at("work_duration").get<double>()});
      d.ystar.push_back(t.at("requirements").get<TraitVector>());
    }
    for (const auto& e : j.value("precedence", Json::array())) {
      if (!e.is_array() || e.size() != 2) throw InvalidArgument("precedence entries are [before, after]");
      d.network.edges.push_back({d.task_index(e.at(0).get<std::string>()), d.task_index(e.at(1).get<std::string>())});
    }
    const Json& m = j.at("map");
    d.map.width = m.at("width").get<int>();
    d.map.height = m.at("height").get<int>();
    d.map.cell_size = m.value("cell_size", 1.0);
    for (const auto& c : m.value("blocked", Json::array())) d.map.blocked.push_back(cell_from(c));
    return d;
  });
}

// ---------------------------------------------------------------------------

Json to_json(const Solution& s, const ProblemDomain& d) {
  Json allocation = Json::object();
  Json schedule = Json::object();
  for (std::size_t t = 0; t < d.num_tasks(); ++t) {
    const auto& id = d.network.tasks[t].id;
    allocation[id] = names(s.allocation.coalition(t), d);
    schedule[id] = {{"start", s.schedule.tasks.at(t).start}, {"end", s.schedule.tasks.at(t).end}};
  }
  Json robot_makespans = Json::object();
  for (std::size_t r = 0; r < s.schedule.robot_finish.size(); ++r) {
    if (s.schedule.robot_finish[r]) robot_makespans[d.q.ids.at(r)] = *s.schedule.robot_finish[r];
  }
  Json motions = Json::object();
  for (const auto& [task, by_robot] : s.motions) {
    Json jr = Json::object();
    for (const auto& [robot, path] : by_robot) {
      Json cells = Json::array();
      for (const Cell& c : path.cells) cells.push_back(cell_json(c));
      jr[d.q.ids.at(robot)] = std::move(cells);
    }
    motions[d.network.tasks.at(task).id] = std::move(jr);
  }
  return {{"allocation", allocation},
          {"schedule", schedule},
          {"makespan", makespan(s.schedule)},
          {"robot_makespans", robot_makespans},
          {"motions", motions}};
}

Solution solution_from_json(const Json& j, const ProblemDomain& d) {
  return guarded("solution", [&] {
    Solution s;
    s.allocation = AllocationMatrix(d.num_tasks(), d.num_robots());
    for (const auto& [task, robots] : j.at("allocation").items()) {
      const std::size_t t = d.task_index(task);
      for (std::size_t r : robots_from(robots, d)) s.allocation.set(t, r, true);
    }
    s.schedule.tasks.assign(d.num_tasks(), {});
    for (const auto& [task, iv] : j.at("schedule").items()) {
      s.schedule.tasks[d.task_index(task)] = {iv.at("start").get<double>(), iv.at("end").get<double>()};
    }
    s.schedule.robot_finish.assign(d.num_robots(), std::nullopt);
    const Json finish = j.value("robot_makespans", Json::object());
    for (const auto& [robot, v] : finish.items()) {
      s.schedule.robot_finish[d.robot_index(robot)] = v.get<double>();
    }
    const Json motions = j.value("motions", Json::object());
    for (const auto& [task, by_robot] : motions.items()) {
      const std::size_t t = d.task_index(task);
      for (const auto& [robot, cells] : by_robot.items()) {
        s.motions[t][d.robot_index(robot)] = path_from(cells, d.map);
      }
    }
    return s;
  });
}

// ---------------------------------------------------------------------------

Json to_json(const FoilQuery& q) {
  Json out = Json::array();
  for (const auto& c : q.changes) {
    out.push_back({{"robot", c.robot}, {"task", c.task}, {"op", c.op == FoilOp::kAssign ? "assign" : "unassign"}});
  }
  return out;
}

FoilQuery foil_query_from_json(const Json& j) {
  return guarded("foil", [&] {
    if (!j.is_array()) throw InvalidArgument("foil must be a JSON list");
    FoilQuery q;
    for (const auto& c : j) {
      const auto op = c.at("op").get<std::string>();
      if (op != "assign" && op != "unassign") throw InvalidArgument("foil op must be assign or unassign");
      q.changes.push_back({c.at("robot").get<std::string>(), c.at("task").get<std::string>(),
                           op == "assign" ? FoilOp::kAssign : FoilOp::kUnassign});
    }
    return q;
  });
}

Json to_json(const InfeasibilityCause& c, const ProblemDomain& d) {
  struct Visitor {
    const ProblemDomain& d;
    Json operator()(const TraitViolation& v) const {
      return {{"kind", "trait-violation"},
              {"task", d.network.tasks.at(v.task).id},
              {"requirement", v.requirement},
              {"aggregate", v.aggregate}};
    }
    Json operator()(const PrecedenceViolation& v) const {
      return {{"kind", "precedence-violation"},
              {"before", d.network.tasks.at(v.edge.before).id},
              {"after", d.network.tasks.at(v.edge.after).id}};
    }
    Json operator()(const MotionViolation& v) const {
      return {{"kind", "no-motion-plan"}, {"task", d.network.tasks.at(v.task).id}, {"robot", d.q.ids.at(v.robot)}};
    }
  };
  return std::visit(Visitor{d}, c);
}

InfeasibilityCause cause_from_json(const Json& j, const ProblemDomain& d) {
  return guarded("cause", [&]() -> InfeasibilityCause {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "trait-violation") {
      return TraitViolation{d.task_index(j.at("task").get<std::string>()), j.at("requirement").get<TraitVector>(),
                            j.at("aggregate").get<TraitVector>()};
    }
    if (kind == "precedence-violation") {
      return PrecedenceViolation{
          {d.task_index(j.at("before").get<std::string>()), d.task_index(j.at("after").get<std::string>())}};
    }
    if (kind == "no-motion-plan") {
      return MotionViolation{d.task_index(j.at("task").get<std::string>()),
                             d.robot_index(j.at("robot").get<std::string>())};
    }
    throw InvalidArgument("unknown cause kind '" + kind + "'");
  });
}

Json to_json(const FoilOutcome& o, const ProblemDomain& d) {
  Json allocation = Json::object();
  for (std::size_t t = 0; t < d.num_tasks(); ++t) {
    allocation[d.network.tasks[t].id] = names(o.foil_allocation.coalition(t), d);
  }
  Json out{{"foil_allocation", allocation}, {"feasible", o.feasible()}};
  if (o.feasible()) {
    out["solution"] = to_json(o.solution(), d);
  } else {
    out["cause"] = to_json(o.cause(), d);
  }
  return out;
}

FoilOutcome foil_outcome_from_json(const Json& j, const ProblemDomain& d) {
  return guarded("foil outcome", [&] {
    FoilOutcome o{AllocationMatrix(d.num_tasks(), d.num_robots()), InfeasibilityCause{}};
    for (const auto& [task, robots] : j.at("foil_allocation").items()) {
      const std::size_t t = d.task_index(task);
      for (std::size_t r : robots_from(robots, d)) o.foil_allocation.set(t, r, true);
    }
    if (j.at("feasible").get<bool>()) {
      o.result = solution_from_json(j.at("solution"), d);
    } else {
      o.result = cause_from_json(j.at("cause"), d);
    }
    return o;
  });
}

Json to_json(const FactorSet& f, const ProblemDomain& d) {
  Json allocation = Json::array();
  for (const auto& a : f.allocation) {
    allocation.push_back({{"task", d.network.tasks.at(a.task).id},
                          {"system", names(a.system_coalition, d)},
                          {"foil", names(a.foil_coalition, d)},
                          {"critical", true}});
  }
  Json schedule = Json::array();
  for (const auto& s : f.schedule) {
    Json subject = nullptr;
    if (s.subject) {
      subject = s.metric == ScheduleMetric::kRobotMakespan ? d.q.ids.at(*s.subject) : d.network.tasks.at(*s.subject).id;
    }
    schedule.push_back({{"kind", to_string(s.metric)},
                        {"subject", subject},
                        {"system", s.system_value},
                        {"foil", s.foil_value},
                        {"pd", s.pd},
                        {"critical", s.critical}});
  }
  return {{"allocation", allocation}, {"schedule", schedule}};
}

FactorSet factor_set_from_json(const Json& j, const ProblemDomain& d) {
  return guarded("factor set", [&] {
    FactorSet f;
    for (const auto& a : j.at("allocation")) {
      f.allocation.push_back({d.task_index(a.at("task").get<std::string>()), robots_from(a.at("system"), d),
                              robots_from(a.at("foil"), d)});
    }
    for (const auto& s : j.at("schedule")) {
      ScheduleFactor factor;
      factor.metric = metric_from(s.at("kind").get<std::string>());
      if (!s.at("subject").is_null()) {
        const auto name = s.at("subject").get<std::string>();
        factor.subject = factor.metric == ScheduleMetric::kRobotMakespan ? d.robot_index(name) : d.task_index(name);
      }
      factor.system_value = s.at("system").get<double>();
      factor.foil_value = s.at("foil").get<double>();
      factor.pd = s.at("pd").get<double>();
      factor.critical = s.at("critical").get<bool>();
      f.schedule.push_back(factor);
    }
    return f;
  });
}

Json to_json(const Explanation& e) {
  Json out{{"plain_text", e.plain_text}, {"capability_lines", e.capability_lines}, {"equivalent", e.equivalent}};
  out["schedule_block"] = e.schedule_block ? Json(*e.schedule_block) : Json(nullptr);
  out["cause_line"] = e.cause_line ? Json(*e.cause_line) : Json(nullptr);
  return out;
}

Explanation explanation_from_json(const Json& j) {
  return guarded("explanation", [&] {
    Explanation e;
    e.plain_text = j.at("plain_text").get<std::string>();
    e.capability_lines = j.at("capability_lines").get<std::vector<std::string>>();
    e.equivalent = j.value("equivalent", false);
    if (j.contains("schedule_block") && !j.at("schedule_block").is_null()) {
      e.schedule_block = j.at("schedule_block").get<std::string>();
    }
    if (j.contains("cause_line") && !j.at("cause_line").is_null()) e.cause_line = j.at("cause_line").get<std::string>();
    return e;
  });
}

// ---------------------------------------------------------------------------

Json to_json(const Site& s, const ProblemDomain& d) {
  if (!site_valid(s, d)) throw InvalidArgument("invalid site");
  Json out{{"matrix", to_string(s.matrix)}};
  switch (s.matrix) {
    case Matrix::kQ:
      out["row"] = d.q.ids[s.row];
      out["col"] = d.traits[s.col].name;
      break;
    case Matrix::kYstar:
      out["row"] = d.network.tasks[s.row].id;
      out["col"] = d.traits[s.col].name;
      break;
    case Matrix::kPhi: out["row"] = d.q.ids[s.row]; break;
  }
  return out;
}

Site site_from_json(const Json& j, const ProblemDomain& d) {
  if (j.is_string()) return parse_site(j.get<std::string>(), d);
  return guarded("site", [&] {
    Site s;
    s.matrix = matrix_from(j.at("matrix").get<std::string>());
    const auto row = j.at("row").get<std::string>();
    switch (s.matrix) {
      case Matrix::kQ:
        s.row = d.robot_index(row);
        s.col = d.trait_index(j.at("col").get<std::string>());
        break;
      case Matrix::kYstar:
        s.row = d.task_index(row);
        s.col = d.trait_index(j.at("col").get<std::string>());
        break;
      case Matrix::kPhi: s.row = d.robot_index(row); break;
    }
    return s;
  });
}

Json to_json(const RepairEdit& e, const ProblemDomain& d) { return {{"site", to_json(e.site, d)}, {"value", e.value}}; }

RepairEdit repair_edit_from_json(const Json& j, const ProblemDomain& d) {
  return guarded("repair edit", [&] {
    if (!j.at("value").is_number()) throw InvalidArgument("repair value must be a number");
    return RepairEdit{site_from_json(j.at("site"), d), j.at("value").get<double>()};
  });
}

Json to_json(const DomainDiff& diff, const ProblemDomain& d) {
  Json out = Json::array();
  for (const auto& e : diff.entries) {
    out.push_back({{"site", to_json(e.site, d)}, {"expected", e.expected}, {"actual", e.actual}});
  }
  return out;
}

DomainDiff diff_from_json(const Json& j, const ProblemDomain& d) {
  return guarded("diff", [&] {
    DomainDiff diff;
    for (const auto& e : j) {
      diff.entries.push_back({site_from_json(e.at("site"), d), e.at("expected").get<double>(), e.at("actual").get<double>()});
    }
    std::sort(diff.entries.begin(), diff.entries.end(),
              [](const DiffEntry& a, const DiffEntry& b) { return a.site < b.site; });
    return diff;
  });
}

// ---------------------------------------------------------------------------

Json to_json(const Scenario& s) {
  Json out = to_json(s.presented);
  out["label"] = s.label;
  out["seed"] = s.seed;
  out["error_tuple"] = {s.error_tuple.robot_errors, s.error_tuple.task_errors, s.error_tuple.speed_errors};
  out["injected"] = to_json(s.injected, s.presented);
  Json overlay = Json::array();
  for (const auto& e : s.injected.entries) overlay.push_back({{"site", to_json(e.site, s.presented)}, {"value", e.expected}});
  out["truth_overlay"] = overlay;
  return out;
}

Scenario scenario_from_json(const Json& j) {
  return guarded("scenario", [&] {
    Scenario s;
    s.presented = domain_from_json(j);
    s.truth = s.presented;
    for (const auto& o : j.at("truth_overlay")) {
      set_value(s.truth, site_from_json(o.at("site"), s.presented), o.at("value").get<double>());
    }
    s.label = j.value("label", std::string{});
    s.seed = j.value("seed", std::uint64_t{0});
    const auto& tuple = j.at("error_tuple");
    s.error_tuple = {tuple.at(0).get<std::size_t>(), tuple.at(1).get<std::size_t>(), tuple.at(2).get<std::size_t>()};
    s.injected = diff_domains(s.presented, s.truth);
    if (s.injected != diff_from_json(j.at("injected"), s.presented)) {
      throw InvalidArgument("scenario injected list disagrees with its truth overlay");
    }
    return s;
  });
}

Json to_json(const SessionMetrics& m, const ProblemDomain& d) {
  return {{"repair_actions", m.repair_actions},
          {"remaining", to_json(m.remaining, d)},
          {"remaining_errors", m.remaining.size()},
          {"corrected", m.corrected},
          {"new_discrepancies", m.new_discrepancies},
          {"extraneous_corrections", m.extraneous_corrections},
          {"rte_pct", m.rte_pct},
          {"tre_pct", m.tre_pct},
          {"rse_pct", m.rse_pct}};
}

SessionMetrics metrics_from_json(const Json& j, const ProblemDomain& d) {
  return guarded("metrics", [&] {
    SessionMetrics m;
    m.repair_actions = j.at("repair_actions").get<std::size_t>();
    m.remaining = diff_from_json(j.at("remaining"), d);
    m.corrected = j.at("corrected").get<std::size_t>();
    m.new_discrepancies = j.at("new_discrepancies").get<std::size_t>();
    m.extraneous_corrections = j.at("extraneous_corrections").get<std::size_t>();
    m.rte_pct = j.at("rte_pct").get<double>();
    m.tre_pct = j.at("tre_pct").get<double>();
    m.rse_pct = j.at("rse_pct").get<double>();
    return m;
  });
}

std::string metrics_csv_header() {
  return "session,scenario,repair_actions,remaining_errors,corrected,new_discrepancies,"
         "extraneous_corrections,rte_pct,tre_pct,rse_pct";
}

std::string metrics_csv_row(const std::string& session_id, const std::string& scenario_label,
                            const SessionMetrics& m) {
  std::ostringstream os;
  os << session_id << ',' << scenario_label << ',' << m.repair_actions << ',' << m.remaining.size() << ','
     << m.corrected << ',' << m.new_discrepancies << ',' << m.extraneous_corrections << ',' << m.rte_pct << ','
     << m.tre_pct << ',' << m.rse_pct;
  return os.str();
}

}  // namespace xmrs::json
