#include "xmrs/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "xmrs/errors.hpp"

namespace xmrs {

namespace {

std::string trim_zeros(std::string s) {
  if (s.find('.') == std::string::npos) return s;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string render_vector(const TraitVector& v, const std::vector<std::size_t>& columns) {
  std::string out = "[";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v.at(columns[i]));
  }
  return out + "]";
}

std::vector<std::size_t> all_columns(const ProblemDomain& d) {
  std::vector<std::size_t> cols(d.num_traits());
  for (std::size_t u = 0; u < cols.size(); ++u) cols[u] = u;
  return cols;
}

std::string task_ref(const Task& t) {
  if (t.display_name.empty() || t.display_name == t.id) return t.id;
  return t.id + " (" + t.display_name + ")";
}

std::string direction(double pd) {
  if (pd > 0.0) return std::to_string(percent_points(pd)) + "% more time";
  if (pd < 0.0) return std::to_string(percent_points(pd)) + "% less time";
  return "the same time";
}

double slowest(const ProblemDomain& d, const std::vector<std::size_t>& coalition) {
  double v = std::numeric_limits<double>::infinity();
  for (std::size_t r : coalition) v = std::min(v, d.phi[r]);
  return v;
}

std::string speed_list(const ProblemDomain& d, const std::vector<std::size_t>& coalition) {
  std::string out;
  for (std::size_t i = 0; i < coalition.size(); ++i) {
    if (i) out += " and ";
    out += d.q.ids[coalition[i]] + "(" + format_speed(d.phi[coalition[i]]) + "m/s)";
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 1e15) return fixed(v, 0);
  return trim_zeros(fixed(v, 6));
}

std::string format_speed(double mps) {
  std::string s = trim_zeros(fixed(mps, 6));
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

std::string format_minutes(double seconds) { return trim_zeros(fixed(seconds / 60.0, 2)); }

std::vector<std::string> default_trait_subset(const ProblemDomain& d) {
  std::vector<std::string> out;
  for (const char* name : {"carrying_capacity", "robotic_arm", "forklift"}) {
    if (d.find_trait(name)) out.emplace_back(name);
  }
  if (out.empty()) {
    for (const auto& t : d.traits) out.push_back(t.name);
  }
  return out;
}

std::string render_capability_line(const AllocationFactor& factor, const ProblemDomain& d,
                                   const std::vector<std::string>& trait_subset) {
  if (factor.task >= d.num_tasks()) throw InvalidArgument("factor task out of range");
  std::vector<std::size_t> columns;
  for (const auto& name : trait_subset) columns.push_back(d.trait_index(name));
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());

  std::vector<std::size_t> robots = factor.system_coalition;
  for (std::size_t r : factor.foil_coalition) {
    if (std::find(robots.begin(), robots.end(), r) == robots.end()) robots.push_back(r);
  }

  std::string out;
  for (std::size_t i = 0; i < robots.size(); ++i) {
    if (robots[i] >= d.num_robots()) throw InvalidArgument("factor robot out of range");
    if (i) out += " and ";
    out += d.q.ids[robots[i]] + "(" + render_vector(d.q.rows[robots[i]], columns) + ")";
  }
  out += " can work " + d.network.tasks[factor.task].id + "(" + render_vector(d.ystar[factor.task], columns) + ")";
  return out;
}

std::string render_schedule_block(const FactorSet& critical, const ProblemDomain& d,
                                  const AllocationMatrix& foil_allocation) {
  const ScheduleFactor* lambda = nullptr;
  std::vector<const ScheduleFactor*> robots;
  std::vector<const ScheduleFactor*> tasks;
  for (const auto& f : critical.schedule) {
    if (f.metric == ScheduleMetric::kMakespan) lambda = &f;
    if (!f.critical) continue;
    switch (f.metric) {
      case ScheduleMetric::kMakespan: break;
      case ScheduleMetric::kRobotMakespan: robots.push_back(&f); break;
      case ScheduleMetric::kTaskTime: tasks.push_back(&f); break;
    }
  }

  std::ostringstream os;
  if (lambda && lambda->critical) {
    os << "User's solution takes " << direction(lambda->pd);
  } else {
    os << kSameTimeLine;
  }
  if (lambda) {
    os << ": " << format_minutes(lambda->system_value) << " minutes→" << format_minutes(lambda->foil_value)
       << " minutes";
  }

  auto task_line = [&](const ScheduleFactor& f) {
    const std::size_t t = *f.subject;
    std::string line = d.network.tasks[t].id + " takes " + direction(f.pd);
    for (const auto& moved : critical.allocation) {
      if (moved.task != t || moved.system_coalition.empty() || moved.foil_coalition.empty()) continue;
      if (slowest(d, moved.system_coalition) != slowest(d, moved.foil_coalition)) {
        line += ": " + speed_list(d, moved.system_coalition) + "→" + speed_list(d, moved.foil_coalition);
      }
    }
    return line;
  };

  std::set<std::size_t> placed;
  for (const ScheduleFactor* rf : robots) {
    const std::size_t r = *rf->subject;
    os << "\n  • " << d.q.ids[r] << " takes " << direction(rf->pd);
    for (const ScheduleFactor* tf : tasks) {
      if (foil_allocation.at(*tf->subject, r)) {
        os << "\n    • " << task_line(*tf);
        placed.insert(*tf->subject);
      }
    }
  }
  for (const ScheduleFactor* tf : tasks) {
    if (!placed.count(*tf->subject)) os << "\n  • " << task_line(*tf);
  }
  return os.str();
}

std::string render_cause(const InfeasibilityCause& cause, const ProblemDomain& d) {
  struct Visitor {
    const ProblemDomain& d;

    std::string operator()(const TraitViolation& v) const {
      std::string lacking;
      for (std::size_t u = 0; u < d.num_traits() && u < v.requirement.size(); ++u) {
        if (v.aggregate.at(u) < v.requirement[u]) {
          if (!lacking.empty()) lacking += " and ";
          lacking += d.traits[u].name;
        }
      }
      const auto cols = all_columns(d);
      return "Infeasible: " + task_ref(d.network.tasks.at(v.task)) + "(" + render_vector(v.requirement, cols) +
             ") requires " + lacking + " the assigned robots (" + render_vector(v.aggregate, cols) + ") lack";
    }
    std::string operator()(const PrecedenceViolation& v) const {
      return "Infeasible: " + task_ref(d.network.tasks.at(v.edge.after)) + " cannot start before " +
             task_ref(d.network.tasks.at(v.edge.before)) + " completes";
    }
    std::string operator()(const MotionViolation& v) const {
      return "Infeasible: " + d.q.ids.at(v.robot) + " cannot reach " + task_ref(d.network.tasks.at(v.task));
    }
  };
  return std::visit(Visitor{d}, cause);
}

Explanation explain(const ProblemDomain& d, const Solution& s, const FoilOutcome& outcome,
                    const std::optional<FactorSet>& critical, const ExplainOptions& options) {
  if (outcome.feasible() != critical.has_value()) {
    throw InvalidArgument(outcome.feasible() ? "feasible foil needs a factor set"
                                             : "infeasible foil cannot carry a factor set");
  }
  const auto subset = options.trait_subset.value_or(default_trait_subset(d));

  Explanation e;
  const auto factors = critical ? critical->allocation : compare_allocations(s.allocation, outcome.foil_allocation);
  for (const auto& f : factors) e.capability_lines.push_back(render_capability_line(f, d, subset));

  if (critical) {
    e.equivalent = std::none_of(critical->schedule.begin(), critical->schedule.end(),
                                [](const ScheduleFactor& f) { return f.critical; });
    e.schedule_block = e.equivalent ? std::string(kSameTimeLine)
                                    : render_schedule_block(*critical, d, outcome.foil_allocation);
  } else {
    e.cause_line = render_cause(outcome.cause(), d);
  }

  std::ostringstream os;
  if (!e.capability_lines.empty() && e.schedule_block && !e.equivalent) {
    os << kCapabilityHeader;
    for (const auto& line : e.capability_lines) os << "\n  • " << line;
    os << '\n' << *e.schedule_block;
  } else {
    bool first = true;
    for (const auto& line : e.capability_lines) {
      os << (first ? "" : "\n") << "• " << line;
      first = false;
    }
    const auto& tail = e.schedule_block ? *e.schedule_block : *e.cause_line;
    os << (first ? "" : "\n") << tail;
  }
  e.plain_text = os.str();
  return e;
}

}  // namespace xmrs
