#include "xmrs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>

#include "xmrs/errors.hpp"

namespace xmrs {

namespace {

// mt19937_64 output is fixed by the standard; distributions are not, so draws
// are reduced by hand to stay identical across standard libraries.
class SeededDraw {
 public:
  explicit SeededDraw(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<TraitSpec> emergency_traits() {
  return {{"carrying_capacity", TraitClass::kCumulative},
          {"stretcher", TraitClass::kBinary},
          {"robotic_arm", TraitClass::kBinary},
          {"forklift", TraitClass::kBinary}};
}

void add_robots(ProblemDomain& d) {
  d.q.ids = {"dumptruck", "firetruck1", "firetruck2", "ambulance"};
  d.q.rows = {{5000, 0, 0, 1}, {1500, 0, 1, 1}, {1500, 0, 1, 1}, {2500, 1, 1, 0}};
  d.phi = {4, 7, 7, 8};
}

bool connected(const GridMap& map, const std::vector<Cell>& cells) {
  if (cells.empty()) return true;
  std::vector<char> seen(static_cast<std::size_t>(map.width * map.height), 0);
  std::vector<char> blocked(seen.size(), 0);
  for (const Cell& b : map.blocked) blocked[static_cast<std::size_t>(b.y * map.width + b.x)] = 1;
  std::queue<Cell> frontier;
  frontier.push(cells.front());
  seen[static_cast<std::size_t>(cells.front().y * map.width + cells.front().x)] = 1;
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop();
    for (Cell step : {Cell{0, -1}, Cell{1, 0}, Cell{0, 1}, Cell{-1, 0}}) {
      const Cell nb{c.x + step.x, c.y + step.y};
      if (!map.in_bounds(nb)) continue;
      const auto i = static_cast<std::size_t>(nb.y * map.width + nb.x);
      if (seen[i] || blocked[i]) continue;
      seen[i] = 1;
      frontier.push(nb);
    }
  }
  return std::all_of(cells.begin(), cells.end(),
                     [&](Cell c) { return seen[static_cast<std::size_t>(c.y * map.width + c.x)] != 0; });
}

double round_micro(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

ProblemDomain emergency_response_domain(std::uint64_t seed) {
  SeededDraw draw(seed);
  ProblemDomain d;
  d.traits = emergency_traits();
  add_robots(d);

  const int small_debris_1 = draw.between(5, 12) * 100;
  const int small_debris_2 = draw.between(5, 12) * 100;
  const int rescue_1 = draw.between(10, 20) * 10;
  const int rescue_2 = draw.between(10, 20) * 10;

  d.network.tasks = {
      {"D1", "Large Debris", {}, 90.0},  {"D2", "Small Debris", {}, 60.0}, {"D3", "Small Debris", {}, 60.0},
      {"H1", "Rescue Human", {}, 45.0},  {"H2", "Rescue Human", {}, 45.0}, {"C1", "Setup Camp", {}, 120.0},
      {"B1", "Defuse Bomb", {}, 60.0},
  };
  d.ystar = {
      {4200, 0, 0, 1},
      {static_cast<double>(small_debris_1), 0, 1, 1},
      {static_cast<double>(small_debris_2), 0, 1, 1},
      {static_cast<double>(rescue_1), 1, 0, 0},
      {static_cast<double>(rescue_2), 1, 0, 0},
      {2000, 0, 1, 0},
      {0, 0, 1, 0},
  };
  d.network.edges = {{5, 3}, {5, 4}};

  d.map.width = 30;
  d.map.height = 30;
  d.map.cell_size = 20.0;

  const std::size_t entities = d.num_robots() + d.num_tasks();
  for (;;) {
    // A handful of wall segments, then entities on distinct free cells.
    std::set<Cell> blocked;
    const int walls = draw.between(6, 10);
    for (int w = 0; w < walls; ++w) {
      const bool horizontal = draw.below(2) == 0;
      const int len = draw.between(4, 12);
      const Cell origin{draw.between(0, d.map.width - 1), draw.between(0, d.map.height - 1)};
      for (int k = 0; k < len; ++k) {
        const Cell c = horizontal ? Cell{origin.x + k, origin.y} : Cell{origin.x, origin.y + k};
        if (d.map.in_bounds(c)) blocked.insert(c);
      }
    }
    d.map.blocked.assign(blocked.begin(), blocked.end());

    std::set<Cell> used;
    std::vector<Cell> placed;
    while (placed.size() < entities) {
      const Cell c{draw.between(0, d.map.width - 1), draw.between(0, d.map.height - 1)};
      if (blocked.count(c) || used.count(c)) continue;
      used.insert(c);
      placed.push_back(c);
    }
    if (!connected(d.map, placed)) continue;

    d.map.robot_starts.assign(placed.begin(), placed.begin() + static_cast<std::ptrdiff_t>(d.num_robots()));
    for (std::size_t t = 0; t < d.num_tasks(); ++t) d.network.tasks[t].location = placed[d.num_robots() + t];
    break;
  }
  return d;
}

const std::vector<double>& corruption_factors() {
  static const std::vector<double> factors{0.1, 0.2, 0.25, 0.5, 2.0, 4.0, 5.0, 10.0};
  return factors;
}

Scenario generate_scenario(const ProblemDomain& truth, ErrorTuple tuple, std::uint64_t seed, std::string label) {
  if (!validate_domain(truth).empty()) throw InvalidArgument("ground-truth domain is not well-formed");

  auto corruptible = [&](Matrix m) {
    std::vector<Site> sites;
    if (m == Matrix::kPhi) {
      for (std::size_t r = 0; r < truth.num_robots(); ++r) sites.push_back({Matrix::kPhi, r, 0});
      return sites;
    }
    const std::size_t rows = m == Matrix::kQ ? truth.num_robots() : truth.num_tasks();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t u = 0; u < truth.num_traits(); ++u) {
        const Site s{m, r, u};
        if (truth.traits[u].kind == TraitClass::kBinary || value_at(truth, s) != 0.0) sites.push_back(s);
      }
    }
    return sites;
  };

  SeededDraw draw(seed);
  Scenario out;
  out.label = std::move(label);
  out.truth = truth;
  out.presented = truth;
  out.error_tuple = tuple;
  out.seed = seed;

  const std::pair<Matrix, std::size_t> plan[] = {
      {Matrix::kQ, tuple.robot_errors}, {Matrix::kYstar, tuple.task_errors}, {Matrix::kPhi, tuple.speed_errors}};
  for (const auto& [matrix, count] : plan) {
    auto sites = corruptible(matrix);
    if (count > sites.size()) {
      throw InvalidArgument("cannot inject " + std::to_string(count) + " errors into " +
                            std::string(to_string(matrix)) + " (" + std::to_string(sites.size()) +
                            " corruptible sites)");
    }
    draw.shuffle(sites);
    for (std::size_t i = 0; i < count; ++i) {
      const Site& s = sites[i];
      const double v = value_at(truth, s);
      const bool binary = matrix != Matrix::kPhi && truth.traits[s.col].kind == TraitClass::kBinary;
      const double corrupted =
          binary ? 1.0 - v : round_micro(v * corruption_factors()[draw.below(corruption_factors().size())]);
      set_value(out.presented, s, corrupted);
    }
  }
  out.injected = diff_domains(out.presented, out.truth);
  return out;
}

const std::vector<ShippedScenario>& shipped_scenarios() {
  static const std::vector<ShippedScenario> shipped{
      {"scenario-1", {0, 0, 0}, 11}, {"scenario-2", {3, 1, 1}, 12}, {"scenario-3", {0, 0, 0}, 13},
      {"scenario-4", {2, 2, 1}, 14}, {"scenario-5", {0, 5, 0}, 15}, {"scenario-6", {3, 2, 0}, 16},
  };
  return shipped;
}

Scenario load_shipped_scenario(const std::string& label) {
  if (label == "debris-swap-speed") return debris_swap_speed_error();
  if (label == "debris-swap-combined") return debris_swap_combined_error();
  for (const auto& s : shipped_scenarios()) {
    if (s.label == label) return generate_scenario(emergency_response_domain(s.seed), s.tuple, s.seed, s.label);
  }
  throw NotFound("unknown scenario '" + label + "'");
}

namespace {

// Firetrucks sit in a walled pocket with B1, so the D1 choice is between
// the ambulance and the dumptruck only.
ProblemDomain debris_swap_truth() {
  ProblemDomain d;
  d.traits = emergency_traits();
  add_robots(d);
  d.network.tasks = {
      {"C1", "Setup Camp", {39, 4}, 72.0},     {"D1", "Small Debris", {27, 12}, 121.0},
      {"D3", "Small Debris", {8, 2}, 131.0},   {"D2", "Large Debris", {24, 8}, 1077.0},
      {"H1", "Rescue Human", {20, 20}, 48.0},  {"H2", "Rescue Human", {5, 30}, 48.0},
      {"B1", "Defuse Bomb", {58, 4}, 60.0},
  };
  d.ystar = {
      {2000, 0, 1, 0}, {600, 0, 0, 0}, {800, 0, 0, 1}, {4200, 0, 0, 1},
      {150, 1, 0, 0},  {150, 1, 0, 0}, {0, 0, 1, 0},
  };
  d.network.edges = {{0, 4}, {0, 5}};
  d.map.width = 60;
  d.map.height = 36;
  d.map.cell_size = 100.0;
  for (int y = 0; y <= 6; ++y) d.map.blocked.push_back({53, y});
  for (int x = 54; x < 60; ++x) d.map.blocked.push_back({x, 6});
  d.map.robot_starts = {{0, 33}, {56, 2}, {57, 2}, {48, 5}};
  return d;
}

}  // namespace

Scenario debris_swap_speed_error() {
  Scenario s;
  s.label = "debris-swap-speed";
  s.truth = debris_swap_truth();
  s.presented = s.truth;
  set_value(s.presented, {Matrix::kPhi, 3, 0}, 40.0);
  s.injected = diff_domains(s.presented, s.truth);
  s.error_tuple = {0, 0, 1};
  return s;
}

Scenario debris_swap_combined_error() {
  Scenario s;
  s.label = "debris-swap-combined";
  s.truth = debris_swap_truth();
  set_value(s.truth, {Matrix::kYstar, 1, 0}, 300.0);
  s.presented = s.truth;
  set_value(s.presented, {Matrix::kQ, 0, 2}, 1.0);         // dumptruck gains a robotic arm
  set_value(s.presented, {Matrix::kYstar, 1, 0}, 600.0);   // D1 capacity x2
  set_value(s.presented, {Matrix::kPhi, 3, 0}, 40.0);
  s.injected = diff_domains(s.presented, s.truth);
  s.error_tuple = {1, 1, 1};
  return s;
}

ProblemDomain apply_repair(const ProblemDomain& presented, const RepairEdit& edit) {
  if (!site_valid(edit.site, presented)) throw InvalidArgument("invalid repair site");
  const double v = edit.value;
  if (!std::isfinite(v)) throw InvalidArgument("repair value must be finite");
  if (edit.site.matrix == Matrix::kPhi) {
    if (!(v > 0.0)) throw InvalidArgument("speed must be positive");
  } else {
    if (v < 0.0) throw InvalidArgument("trait values must be non-negative");
    if (presented.traits[edit.site.col].kind == TraitClass::kBinary && v != 0.0 && v != 1.0) {
      throw InvalidArgument("trait '" + presented.traits[edit.site.col].name + "' is binary");
    }
  }
  ProblemDomain out = presented;
  set_value(out, edit.site, v);
  return out;
}

SessionMetrics compute_metrics(const Scenario& scenario, const ProblemDomain& final_domain,
                               std::size_t repair_actions) {
  SessionMetrics m;
  m.repair_actions = repair_actions;
  m.remaining = diff_domains(final_domain, scenario.truth);

  std::size_t injected_left[3] = {0, 0, 0};
  std::size_t injected_total[3] = {0, 0, 0};
  for (const auto& e : scenario.injected.entries) {
    const auto c = static_cast<std::size_t>(e.site.matrix);
    ++injected_total[c];
    if (m.remaining.contains(e.site)) ++injected_left[c];
  }
  for (const auto& e : m.remaining.entries) {
    if (!scenario.injected.contains(e.site)) ++m.new_discrepancies;
  }
  const std::size_t left = injected_left[0] + injected_left[1] + injected_left[2];
  m.corrected = scenario.injected.size() - left;
  m.extraneous_corrections = repair_actions > m.corrected ? repair_actions - m.corrected : 0;

  auto pct = [&](Matrix mat) {
    const auto c = static_cast<std::size_t>(mat);
    return injected_total[c] == 0 ? 0.0 : 100.0 * static_cast<double>(injected_left[c]) /
                                              static_cast<double>(injected_total[c]);
  };
  m.rte_pct = pct(Matrix::kQ);
  m.tre_pct = pct(Matrix::kYstar);
  m.rse_pct = pct(Matrix::kPhi);
  return m;
}

}  // namespace xmrs
