#include "xmrs/motion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <queue>
#include <tuple>

#include "xmrs/errors.hpp"

namespace xmrs {

NoPathError::NoPathError(Cell start, Cell goal)
    : std::runtime_error("no path from " + to_string(start) + " to " + to_string(goal)),
      start_(start),
      goal_(goal) {}

namespace {

// up, right, down, left with y growing downwards
constexpr std::array<Cell, 4> kSteps{{{0, -1}, {1, 0}, {0, 1}, {-1, 0}}};

int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

struct OpenEntry {
  int f;
  std::uint64_t seq;
  int index;
};

struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    return std::tie(a.f, a.seq) > std::tie(b.f, b.seq);
  }
};

}  // namespace

Path plan_path(const GridMap& map, Cell start, Cell goal) {
  if (!map.in_bounds(start) || map.is_blocked(start)) {
    throw InvalidArgument("start cell " + to_string(start) + " is out of bounds or blocked");
  }
  if (!map.in_bounds(goal) || map.is_blocked(goal)) {
    throw InvalidArgument("goal cell " + to_string(goal) + " is out of bounds or blocked");
  }

  const int w = map.width;
  const std::size_t cells = static_cast<std::size_t>(w) * static_cast<std::size_t>(map.height);
  auto index_of = [w](Cell c) { return c.y * w + c.x; };
  auto cell_of = [w](int i) { return Cell{i % w, i / w}; };

  std::vector<char> blocked(cells, 0);
  for (const Cell& b : map.blocked) {
    if (map.in_bounds(b)) blocked[static_cast<std::size_t>(index_of(b))] = 1;
  }

  constexpr int kUnseen = std::numeric_limits<int>::max();
  std::vector<int> g(cells, kUnseen);
  std::vector<int> parent(cells, -1);
  std::vector<char> closed(cells, 0);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  std::uint64_t seq = 0;

  const int s = index_of(start);
  const int t = index_of(goal);
  g[static_cast<std::size_t>(s)] = 0;
  open.push({manhattan(start, goal), seq++, s});

  while (!open.empty()) {
    const OpenEntry cur = open.top();
    open.pop();
    const auto ci = static_cast<std::size_t>(cur.index);
    if (closed[ci]) continue;
    closed[ci] = 1;
    if (cur.index == t) break;

    const Cell c = cell_of(cur.index);
    for (const Cell& step : kSteps) {
      const Cell nb{c.x + step.x, c.y + step.y};
      if (!map.in_bounds(nb)) continue;
      const auto ni = static_cast<std::size_t>(index_of(nb));
      if (blocked[ni] || closed[ni]) continue;
      const int ng = g[ci] + 1;
      if (ng < g[ni]) {
        g[ni] = ng;
        parent[ni] = cur.index;
        open.push({ng + manhattan(nb, goal), seq++, static_cast<int>(ni)});
      }
    }
  }

  if (!closed[static_cast<std::size_t>(t)]) throw NoPathError(start, goal);

  Path path;
  for (int i = t; i != -1; i = parent[static_cast<std::size_t>(i)]) path.cells.push_back(cell_of(i));
  std::reverse(path.cells.begin(), path.cells.end());
  path.length_m = static_cast<double>(path.cells.size() - 1) * map.cell_size;
  return path;
}

double travel_time(const Path& path, double speed) {
  if (!(speed > 0.0)) throw InvalidArgument("speed must be positive");
  return path.length_m / speed;
}

bool path_valid(const GridMap& map, const Path& path) {
  if (path.cells.empty()) return false;
  for (std::size_t i = 0; i < path.cells.size(); ++i) {
    const Cell c = path.cells[i];
    if (!map.in_bounds(c) || map.is_blocked(c)) return false;
    if (i > 0 && manhattan(path.cells[i - 1], c) != 1) return false;
  }
  const double expected = static_cast<double>(path.cells.size() - 1) * map.cell_size;
  return std::abs(expected - path.length_m) <= 1e-9 * std::max(1.0, expected);
}

}  // namespace xmrs
