#pragma once

#include <stdexcept>
#include <vector>

#include "xmrs/domain.hpp"

namespace xmrs {

struct Path {
  std::vector<Cell> cells;  // start ... goal, 4-adjacent
  double length_m = 0.0;

  bool operator==(const Path&) const = default;
};

// Raised when the goal is not reachable from the start.
class NoPathError : public std::runtime_error {
 public:
  NoPathError(Cell start, Cell goal);

  Cell start() const { return start_; }
  Cell goal() const { return goal_; }

 private:
  Cell start_;
  Cell goal_;
};

// Shortest 4-connected path under unit cell cost (A* with a Manhattan heuristic).
// Neighbours expand up, right, down, left; equal keys pop in insertion order,
// so the returned cell sequence is fully determined by the inputs.
Path plan_path(const GridMap& map, Cell start, Cell goal);

// Seconds needed to traverse `path` at `speed` m/s.
double travel_time(const Path& path, double speed);

// True when `path` is a legal motion on `map`: non-empty, in-bounds, unblocked,
// 4-adjacent steps and a length consistent with the cell count.
bool path_valid(const GridMap& map, const Path& path);

}  // namespace xmrs
