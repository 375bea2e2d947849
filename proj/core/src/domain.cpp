#include "xmrs/domain.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include "xmrs/errors.hpp"

namespace xmrs {

std::string to_string(Cell c) {
  return "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
}

bool GridMap::is_blocked(Cell c) const {
  return std::find(blocked.begin(), blocked.end(), c) != blocked.end();
}

namespace {

template <typename Range, typename Key>
std::optional<std::size_t> find_by(const Range& range, std::string_view name, Key key) {
  for (std::size_t i = 0; i < range.size(); ++i) {
    if (key(range[i]) == name) return i;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> ProblemDomain::find_robot(std::string_view id) const {
  return find_by(q.ids, id, [](const std::string& s) -> const std::string& { return s; });
}

std::optional<std::size_t> ProblemDomain::find_task(std::string_view id) const {
  return find_by(network.tasks, id, [](const Task& t) -> const std::string& { return t.id; });
}

std::optional<std::size_t> ProblemDomain::find_trait(std::string_view name) const {
  return find_by(traits, name, [](const TraitSpec& t) -> const std::string& { return t.name; });
}

std::size_t ProblemDomain::robot_index(std::string_view id) const {
  if (auto i = find_robot(id)) return *i;
  throw InvalidArgument("unknown robot '" + std::string(id) + "'");
}

std::size_t ProblemDomain::task_index(std::string_view id) const {
  if (auto i = find_task(id)) return *i;
  throw InvalidArgument("unknown task '" + std::string(id) + "'");
}

std::size_t ProblemDomain::trait_index(std::string_view name) const {
  if (auto i = find_trait(name)) return *i;
  throw InvalidArgument("unknown trait '" + std::string(name) + "'");
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kShapeMismatch: return "shape mismatch";
    case ViolationKind::kEmpty: return "empty";
    case ViolationKind::kNegativeTrait: return "negative trait";
    case ViolationKind::kNonBinaryTrait: return "non-binary trait";
    case ViolationKind::kNonPositiveSpeed: return "non-positive speed";
    case ViolationKind::kNegativeWork: return "negative work duration";
    case ViolationKind::kBadEdge: return "bad precedence edge";
    case ViolationKind::kPrecedenceCycle: return "precedence cycle";
    case ViolationKind::kOutOfBounds: return "out-of-bounds location";
    case ViolationKind::kBlockedCell: return "blocked location";
    case ViolationKind::kBadMap: return "bad map";
    case ViolationKind::kDuplicateId: return "duplicate id";
  }
  return "unknown";
}

std::optional<std::vector<std::size_t>> topological_order(const TaskNetwork& network) {
  const std::size_t m = network.size();
  std::vector<std::size_t> indegree(m, 0);
  std::vector<std::vector<std::size_t>> succ(m);
  for (const auto& e : network.edges) {
    if (e.before >= m || e.after >= m) return std::nullopt;
    succ[e.before].push_back(e.after);
    ++indegree[e.after];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < m; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(m);
  while (!ready.empty()) {
    const std::size_t t = ready.top();
    ready.pop();
    order.push_back(t);
    for (std::size_t s : succ[t]) {
      if (--indegree[s] == 0) ready.push(s);
    }
  }
  if (order.size() != m) return std::nullopt;
  return order;
}

namespace {

void check_traits(const std::string& owner, const TraitVector& v,
                  std::span<const TraitSpec> traits, ValidationReport& out) {
  if (v.size() != traits.size()) {
    out.push_back({ViolationKind::kShapeMismatch,
                   owner + " has " + std::to_string(v.size()) + " traits, expected " +
                       std::to_string(traits.size())});
    return;
  }
  for (std::size_t u = 0; u < v.size(); ++u) {
    if (!(v[u] >= 0.0) || !std::isfinite(v[u])) {
      out.push_back({ViolationKind::kNegativeTrait, owner + "." + traits[u].name});
    } else if (traits[u].kind == TraitClass::kBinary && v[u] != 0.0 && v[u] != 1.0) {
      out.push_back({ViolationKind::kNonBinaryTrait, owner + "." + traits[u].name});
    }
  }
}

void check_cell(const std::string& owner, Cell c, const GridMap& map, ValidationReport& out) {
  if (!map.in_bounds(c)) {
    out.push_back({ViolationKind::kOutOfBounds, owner + " at " + to_string(c)});
  } else if (map.is_blocked(c)) {
    out.push_back({ViolationKind::kBlockedCell, owner + " at " + to_string(c)});
  }
}

}  // namespace

ValidationReport validate_domain(const ProblemDomain& d) {
  ValidationReport out;
  const std::size_t n = d.num_robots();
  const std::size_t m = d.num_tasks();

  if (n == 0) out.push_back({ViolationKind::kEmpty, "no robots"});
  if (m == 0) out.push_back({ViolationKind::kEmpty, "no tasks"});
  if (d.traits.empty()) out.push_back({ViolationKind::kEmpty, "no traits"});

  {
    std::set<std::string> names;
    for (const auto& t : d.traits) {
      if (!names.insert(t.name).second) out.push_back({ViolationKind::kDuplicateId, "trait " + t.name});
    }
    names.clear();
    for (const auto& id : d.q.ids) {
      if (!names.insert(id).second) out.push_back({ViolationKind::kDuplicateId, "robot " + id});
    }
    names.clear();
    for (const auto& t : d.network.tasks) {
      if (!names.insert(t.id).second) out.push_back({ViolationKind::kDuplicateId, "task " + t.id});
    }
  }

  if (d.q.ids.size() != n || d.phi.size() != n || d.map.robot_starts.size() != n) {
    out.push_back({ViolationKind::kShapeMismatch,
                   "robot count differs across Q (" + std::to_string(n) + "), ids (" +
                       std::to_string(d.q.ids.size()) + "), phi (" + std::to_string(d.phi.size()) +
                       ") and start cells (" + std::to_string(d.map.robot_starts.size()) + ")"});
  }
  if (d.ystar.size() != m) {
    out.push_back({ViolationKind::kShapeMismatch, "Ystar has " + std::to_string(d.ystar.size()) +
                                                      " rows for " + std::to_string(m) + " tasks"});
  }

  auto robot_name = [&](std::size_t i) {
    return i < d.q.ids.size() ? d.q.ids[i] : "robot#" + std::to_string(i);
  };

  for (std::size_t i = 0; i < n; ++i) check_traits("Q[" + robot_name(i) + "]", d.q.rows[i], d.traits, out);
  for (std::size_t i = 0; i < d.ystar.size(); ++i) {
    const std::string name = i < m ? d.network.tasks[i].id : "task#" + std::to_string(i);
    check_traits("Ystar[" + name + "]", d.ystar[i], d.traits, out);
  }
  for (std::size_t i = 0; i < d.phi.size(); ++i) {
    if (!(d.phi[i] > 0.0) || !std::isfinite(d.phi[i])) {
      out.push_back({ViolationKind::kNonPositiveSpeed, "phi[" + robot_name(i) + "]"});
    }
  }
  for (const auto& t : d.network.tasks) {
    if (!(t.work_duration >= 0.0)) out.push_back({ViolationKind::kNegativeWork, t.id});
  }

  bool edges_ok = true;
  for (const auto& e : d.network.edges) {
    if (e.before >= m || e.after >= m) {
      out.push_back({ViolationKind::kBadEdge, "edge endpoint out of range"});
      edges_ok = false;
    } else if (e.before == e.after) {
      out.push_back({ViolationKind::kPrecedenceCycle, d.network.tasks[e.before].id + " precedes itself"});
      edges_ok = false;
    }
  }
  if (edges_ok && !topological_order(d.network)) {
    out.push_back({ViolationKind::kPrecedenceCycle, "task network is not acyclic"});
  }

  if (d.map.width <= 0 || d.map.height <= 0 || !(d.map.cell_size > 0.0)) {
    out.push_back({ViolationKind::kBadMap, "map dimensions and cell size must be positive"});
  } else {
    for (std::size_t i = 0; i < d.map.robot_starts.size(); ++i) {
      check_cell("robot " + robot_name(i), d.map.robot_starts[i], d.map, out);
    }
    for (const auto& t : d.network.tasks) check_cell("task " + t.id, t.location, d.map, out);
  }
  return out;
}

TraitVector aggregate_traits(std::span<const std::size_t> coalition, const RobotTraitMatrix& q,
                             std::span<const TraitSpec> traits) {
  TraitVector total(traits.size(), 0.0);
  for (std::size_t r : coalition) {
    if (r >= q.rows.size()) throw InvalidArgument("robot index " + std::to_string(r) + " out of range");
    const auto& row = q.rows[r];
    if (row.size() != traits.size()) throw InvalidArgument("trait vector length mismatch");
    for (std::size_t u = 0; u < traits.size(); ++u) {
      if (traits[u].kind == TraitClass::kCumulative) {
        total[u] += row[u];
      } else {
        total[u] = (total[u] != 0.0 || row[u] != 0.0) ? 1.0 : 0.0;
      }
    }
  }
  return total;
}

TraitVector aggregate_traits(std::span<const std::string> coalition, const RobotTraitMatrix& q,
                             std::span<const TraitSpec> traits) {
  std::vector<std::size_t> idx;
  idx.reserve(coalition.size());
  for (const auto& id : coalition) {
    auto it = std::find(q.ids.begin(), q.ids.end(), id);
    if (it == q.ids.end()) throw InvalidArgument("unknown robot '" + id + "'");
    idx.push_back(static_cast<std::size_t>(it - q.ids.begin()));
  }
  return aggregate_traits(std::span<const std::size_t>(idx), q, traits);
}

bool coalition_satisfies(std::span<const double> requirement, std::span<const double> capability) {
  if (requirement.size() != capability.size()) {
    throw InvalidArgument("requirement has " + std::to_string(requirement.size()) +
                          " traits, capability has " + std::to_string(capability.size()));
  }
  for (std::size_t u = 0; u < requirement.size(); ++u) {
    if (capability[u] < requirement[u]) return false;
  }
  return true;
}

std::string_view to_string(Matrix m) {
  switch (m) {
    case Matrix::kQ: return "Q";
    case Matrix::kYstar: return "Ystar";
    case Matrix::kPhi: return "phi";
  }
  return "?";
}

bool site_valid(const Site& site, const ProblemDomain& d) {
  switch (site.matrix) {
    case Matrix::kQ: return site.row < d.num_robots() && site.col < d.num_traits();
    case Matrix::kYstar: return site.row < d.num_tasks() && site.col < d.num_traits();
    case Matrix::kPhi: return site.row < d.num_robots() && site.col == 0;
  }
  return false;
}

std::string describe(const Site& site, const ProblemDomain& d) {
  if (!site_valid(site, d)) throw InvalidArgument("invalid site");
  std::ostringstream os;
  os << to_string(site.matrix);
  switch (site.matrix) {
    case Matrix::kQ: os << '[' << d.q.ids[site.row] << "][" << d.traits[site.col].name << ']'; break;
    case Matrix::kYstar:
      os << '[' << d.network.tasks[site.row].id << "][" << d.traits[site.col].name << ']';
      break;
    case Matrix::kPhi: os << '[' << d.q.ids[site.row] << ']'; break;
  }
  return os.str();
}

Site parse_site(std::string_view text, const ProblemDomain& d) {
  const auto open = text.find('[');
  if (open == std::string_view::npos || text.back() != ']') {
    throw InvalidArgument("site must look like phi[robot] or Q[robot][trait]: " + std::string(text));
  }
  const std::string_view head = text.substr(0, open);
  std::vector<std::string_view> keys;
  for (std::size_t pos = open; pos < text.size();) {
    if (text[pos] != '[') throw InvalidArgument("malformed site '" + std::string(text) + "'");
    const auto close = text.find(']', pos);
    if (close == std::string_view::npos) throw InvalidArgument("malformed site '" + std::string(text) + "'");
    keys.push_back(text.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
  if (head == "phi" && keys.size() == 1) return {Matrix::kPhi, d.robot_index(keys[0]), 0};
  if (head == "Q" && keys.size() == 2) return {Matrix::kQ, d.robot_index(keys[0]), d.trait_index(keys[1])};
  if (head == "Ystar" && keys.size() == 2) return {Matrix::kYstar, d.task_index(keys[0]), d.trait_index(keys[1])};
  throw InvalidArgument("malformed site '" + std::string(text) + "'");
}

double value_at(const ProblemDomain& d, const Site& site) {
  if (!site_valid(site, d)) throw InvalidArgument("invalid site");
  switch (site.matrix) {
    case Matrix::kQ: return d.q.rows[site.row][site.col];
    case Matrix::kYstar: return d.ystar[site.row][site.col];
    case Matrix::kPhi: return d.phi[site.row];
  }
  return 0.0;
}

void set_value(ProblemDomain& d, const Site& site, double value) {
  if (!site_valid(site, d)) throw InvalidArgument("invalid site");
  switch (site.matrix) {
    case Matrix::kQ: d.q.rows[site.row][site.col] = value; break;
    case Matrix::kYstar: d.ystar[site.row][site.col] = value; break;
    case Matrix::kPhi: d.phi[site.row] = value; break;
  }
}

std::size_t DomainDiff::count(Matrix m) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [m](const DiffEntry& e) { return e.site.matrix == m; }));
}

bool DomainDiff::contains(const Site& site) const {
  return std::any_of(entries.begin(), entries.end(), [&](const DiffEntry& e) { return e.site == site; });
}

DomainDiff diff_domains(const ProblemDomain& actual, const ProblemDomain& truth) {
  const std::size_t n = truth.num_robots();
  const std::size_t m = truth.num_tasks();
  const std::size_t u = truth.num_traits();
  auto rows_ok = [u](const std::vector<TraitVector>& rows) {
    return std::all_of(rows.begin(), rows.end(), [u](const TraitVector& v) { return v.size() == u; });
  };
  if (actual.num_robots() != n || actual.num_tasks() != m || actual.num_traits() != u ||
      actual.phi.size() != n || truth.phi.size() != n || actual.ystar.size() != m ||
      truth.ystar.size() != m || !rows_ok(actual.q.rows) || !rows_ok(truth.q.rows) ||
      !rows_ok(actual.ystar) || !rows_ok(truth.ystar)) {
    throw InvalidArgument("cannot diff domains of different shapes");
  }

  DomainDiff diff;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < u; ++c) {
      if (actual.q.rows[r][c] != truth.q.rows[r][c]) {
        diff.entries.push_back({{Matrix::kQ, r, c}, truth.q.rows[r][c], actual.q.rows[r][c]});
      }
    }
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < u; ++c) {
      if (actual.ystar[r][c] != truth.ystar[r][c]) {
        diff.entries.push_back({{Matrix::kYstar, r, c}, truth.ystar[r][c], actual.ystar[r][c]});
      }
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (actual.phi[r] != truth.phi[r]) {
      diff.entries.push_back({{Matrix::kPhi, r, 0}, truth.phi[r], actual.phi[r]});
    }
  }
  return diff;
}

}  // namespace xmrs
