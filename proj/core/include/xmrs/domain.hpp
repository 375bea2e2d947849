#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xmrs {

using TraitVector = std::vector<double>;

// How a trait pools across a coalition.
enum class TraitClass {
  kCumulative,  // summed (e.g. carrying capacity)
  kBinary,      // logical OR, values restricted to {0, 1}
};

struct TraitSpec {
  std::string name;
  TraitClass kind = TraitClass::kCumulative;

  bool operator==(const TraitSpec&) const = default;
};

struct Cell {
  int x = 0;
  int y = 0;

  auto operator<=>(const Cell&) const = default;
};

std::string to_string(Cell c);

struct RobotTraitMatrix {
  std::vector<std::string> ids;
  std::vector<TraitVector> rows;  // N x U

  std::size_t size() const { return rows.size(); }
  bool operator==(const RobotTraitMatrix&) const = default;
};

struct Task {
  std::string id;
  std::string display_name;
  Cell location;
  double work_duration = 0.0;  // seconds

  const std::string& label() const { return display_name.empty() ? id : display_name; }
  bool operator==(const Task&) const = default;
};

struct Precedence {
  std::size_t before = 0;
  std::size_t after = 0;

  auto operator<=>(const Precedence&) const = default;
};

struct TaskNetwork {
  std::vector<Task> tasks;
  std::vector<Precedence> edges;  // before must end before after starts

  std::size_t size() const { return tasks.size(); }
  bool operator==(const TaskNetwork&) const = default;
};

struct GridMap {
  int width = 0;
  int height = 0;
  double cell_size = 1.0;  // meters per cell edge
  std::vector<Cell> blocked;
  std::vector<Cell> robot_starts;

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  bool is_blocked(Cell c) const;
  bool operator==(const GridMap&) const = default;
};

struct ProblemDomain {
  std::vector<TraitSpec> traits;
  RobotTraitMatrix q;
  std::vector<double> phi;  // m/s per robot
  TaskNetwork network;
  std::vector<TraitVector> ystar;  // M x U
  GridMap map;

  std::size_t num_robots() const { return q.size(); }
  std::size_t num_tasks() const { return network.size(); }
  std::size_t num_traits() const { return traits.size(); }

  std::size_t robot_index(std::string_view id) const;
  std::size_t task_index(std::string_view id) const;
  std::size_t trait_index(std::string_view name) const;
  std::optional<std::size_t> find_robot(std::string_view id) const;
  std::optional<std::size_t> find_task(std::string_view id) const;
  std::optional<std::size_t> find_trait(std::string_view name) const;

  bool operator==(const ProblemDomain&) const = default;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  kShapeMismatch,
  kEmpty,
  kNegativeTrait,
  kNonBinaryTrait,
  kNonPositiveSpeed,
  kNegativeWork,
  kBadEdge,
  kPrecedenceCycle,
  kOutOfBounds,
  kBlockedCell,
  kBadMap,
  kDuplicateId,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

using ValidationReport = std::vector<Violation>;

// Every structural problem in `d`; empty means well-formed.
ValidationReport validate_domain(const ProblemDomain& d);

// Kahn's algorithm, lowest index first among ready tasks. Empty optional when cyclic.
std::optional<std::vector<std::size_t>> topological_order(const TaskNetwork& network);

// ---------------------------------------------------------------------------
// Coalition capability

// Pools the traits of `coalition`: cumulative traits add, binary traits OR.
// An empty coalition yields the all-zero vector.
TraitVector aggregate_traits(std::span<const std::size_t> coalition, const RobotTraitMatrix& q,
                             std::span<const TraitSpec> traits);
TraitVector aggregate_traits(std::span<const std::string> coalition, const RobotTraitMatrix& q,
                             std::span<const TraitSpec> traits);

// capability >= requirement elementwise.
bool coalition_satisfies(std::span<const double> requirement, std::span<const double> capability);

// ---------------------------------------------------------------------------
// Diffing

enum class Matrix : std::uint8_t { kQ, kYstar, kPhi };

std::string_view to_string(Matrix m);

// A single editable value in D. For kPhi, `col` is unused and kept at 0.
struct Site {
  Matrix matrix = Matrix::kQ;
  std::size_t row = 0;
  std::size_t col = 0;

  auto operator<=>(const Site&) const = default;
};

// "Q[ambulance][forklift]", "Ystar[D1][carrying_capacity]", "phi[ambulance]".
std::string describe(const Site& site, const ProblemDomain& d);
// Inverse of describe(); throws InvalidArgument on malformed text or unknown names.
Site parse_site(std::string_view text, const ProblemDomain& d);

bool site_valid(const Site& site, const ProblemDomain& d);
double value_at(const ProblemDomain& d, const Site& site);
void set_value(ProblemDomain& d, const Site& site, double value);

struct DiffEntry {
  Site site;
  double expected = 0.0;  // value in the truth domain
  double actual = 0.0;

  bool operator==(const DiffEntry&) const = default;
};

struct DomainDiff {
  std::vector<DiffEntry> entries;  // sorted by site

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  std::size_t count(Matrix m) const;
  bool contains(const Site& site) const;
  bool operator==(const DomainDiff&) const = default;
};

// Sites where Q, Y* or phi differ between the two domains. Shapes must agree.
DomainDiff diff_domains(const ProblemDomain& actual, const ProblemDomain& truth);

}  // namespace xmrs
