#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "xmrs/errors.hpp"
#include "xmrs/scenario.hpp"

using namespace xmrs;

namespace {

// Sites where the presented domain still differs from the truth, recounted by hand.
std::size_t recount(const ProblemDomain& a, const ProblemDomain& b) {
  std::size_t n = 0;
  for (std::size_t r = 0; r < a.q.rows.size(); ++r) {
    for (std::size_t u = 0; u < a.q.rows[r].size(); ++u) n += a.q.rows[r][u] != b.q.rows[r][u];
    n += a.phi[r] != b.phi[r];
  }
  for (std::size_t t = 0; t < a.ystar.size(); ++t) {
    for (std::size_t u = 0; u < a.ystar[t].size(); ++u) n += a.ystar[t][u] != b.ystar[t][u];
  }
  return n;
}

}  // namespace

TEST_CASE("error-free tuple presents the truth") {
  const auto truth = emergency_response_domain(3);
  const Scenario s = generate_scenario(truth, {0, 0, 0}, 3);
  CHECK(s.presented == truth);
  CHECK(s.injected.empty());
}

TEST_CASE("injected cardinalities follow the tuple") {
  const auto truth = emergency_response_domain(12);
  for (const ErrorTuple t : {ErrorTuple{3, 1, 1}, ErrorTuple{2, 2, 1}, ErrorTuple{0, 5, 0}, ErrorTuple{3, 2, 0}}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Scenario s = generate_scenario(truth, t, seed);
      CHECK(s.injected.count(Matrix::kQ) == t.robot_errors);
      CHECK(s.injected.count(Matrix::kYstar) == t.task_errors);
      CHECK(s.injected.count(Matrix::kPhi) == t.speed_errors);
      CHECK(recount(s.presented, truth) == t.total());
      CHECK(s.injected == diff_domains(s.presented, truth));
    }
  }
}

TEST_CASE("corruptions flip binaries and scale the rest by a grid factor") {
  const auto truth = emergency_response_domain(5);
  const auto& grid = corruption_factors();
  CHECK(std::find(grid.begin(), grid.end(), 1.0) == grid.end());
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Scenario s = generate_scenario(truth, {3, 3, 2}, seed);
    for (const auto& e : s.injected.entries) {
      const bool binary = e.site.matrix != Matrix::kPhi && truth.traits[e.site.col].kind == TraitClass::kBinary;
      if (binary) {
        CHECK(e.actual == 1.0 - e.expected);
      } else {
        REQUIRE(e.expected != 0.0);
        const double ratio = e.actual / e.expected;
        CHECK(std::any_of(grid.begin(), grid.end(), [&](double f) { return std::abs(f - ratio) < 1e-6 * f + 1e-9; }));
      }
    }
  }
}

TEST_CASE("same seed, same scenario") {
  const auto truth = emergency_response_domain(8);
  CHECK(generate_scenario(truth, {2, 2, 1}, 77, "x") == generate_scenario(truth, {2, 2, 1}, 77, "x"));
  CHECK(emergency_response_domain(8) == truth);
  CHECK_FALSE(generate_scenario(truth, {2, 2, 1}, 77) == generate_scenario(truth, {2, 2, 1}, 78));
}

TEST_CASE("impossible tuples are rejected") {
  const auto truth = emergency_response_domain(1);
  CHECK_THROWS_AS(generate_scenario(truth, {0, 0, 5}, 1), InvalidArgument);
  CHECK_THROWS_AS(generate_scenario(truth, {500, 0, 0}, 1), InvalidArgument);
}

TEST_CASE("shipped scenarios") {
  REQUIRE(shipped_scenarios().size() == 6);
  const std::vector<ErrorTuple> expected{{0, 0, 0}, {3, 1, 1}, {0, 0, 0}, {2, 2, 1}, {0, 5, 0}, {3, 2, 0}};
  for (std::size_t i = 0; i < 6; ++i) {
    const Scenario s = load_shipped_scenario(shipped_scenarios()[i].label);
    CHECK(s.error_tuple == expected[i]);
    CHECK(s.injected.size() == expected[i].total());
  }
  CHECK_THROWS_AS(load_shipped_scenario("scenario-99"), NotFound);
  const Scenario t1 = debris_swap_speed_error();
  REQUIRE(t1.injected.size() == 1);
  CHECK(t1.injected.entries[0] == DiffEntry{{Matrix::kPhi, 3, 0}, 8.0, 40.0});
  CHECK(debris_swap_combined_error().injected.size() == 3);
}

TEST_CASE("apply_repair") {
  const Scenario s = debris_swap_speed_error();
  const Site phi{Matrix::kPhi, 3, 0};
  const auto fixed = apply_repair(s.presented, {phi, 8.0});
  CHECK(diff_domains(fixed, s.truth).empty());
  CHECK(apply_repair(s.presented, {phi, 40.0}) == s.presented);
  const auto worse = apply_repair(s.presented, {{Matrix::kQ, 0, 0}, 4000});
  CHECK(diff_domains(worse, s.truth).size() == 2);
  CHECK_THROWS_AS(apply_repair(s.presented, {{Matrix::kQ, 9, 0}, 1}), InvalidArgument);
  CHECK_THROWS_AS(apply_repair(s.presented, {phi, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(apply_repair(s.presented, {{Matrix::kQ, 0, 1}, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(apply_repair(s.presented, {{Matrix::kYstar, 0, 0}, -1}), InvalidArgument);
}

TEST_CASE("metrics") {
  const auto truth = emergency_response_domain(4);
  SUBCASE("3 Q errors, 2 fixed") {
    const Scenario s = generate_scenario(truth, {3, 0, 0}, 9);
    auto d = s.presented;
    for (std::size_t i = 0; i < 2; ++i) d = apply_repair(d, {s.injected.entries[i].site, s.injected.entries[i].expected});
    const SessionMetrics m = compute_metrics(s, d, 2);
    CHECK(m.rte_pct == doctest::Approx(100.0 / 3.0));
    CHECK(m.tre_pct == 0.0);
    CHECK(m.rse_pct == 0.0);
    CHECK(m.corrected == 2);
    CHECK(m.extraneous_corrections == 0);
  }
  SUBCASE("perfect repair") {
    const Scenario s = generate_scenario(truth, {3, 1, 1}, 9);
    auto d = s.presented;
    for (const auto& e : s.injected.entries) d = apply_repair(d, {e.site, e.expected});
    const SessionMetrics m = compute_metrics(s, d, 5);
    CHECK(m.remaining.empty());
    CHECK(m.rte_pct + m.tre_pct + m.rse_pct == 0.0);
    CHECK(m.extraneous_corrections == 0);
  }
  SUBCASE("8 edits, 5 injected, 4 fixed") {
    const Scenario s = generate_scenario(truth, {3, 1, 1}, 9);
    auto d = s.presented;
    std::size_t edits = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      d = apply_repair(d, {s.injected.entries[i].site, s.injected.entries[i].expected});
      ++edits;
    }
    Site off{Matrix::kPhi, 0, 0};
    while (s.injected.contains(off)) ++off.row;
    const double original = value_at(truth, off);
    for (double v : {original * 2, original * 3, original}) {  // wander away and back
      d = apply_repair(d, {off, v});
      ++edits;
    }
    d = apply_repair(d, {s.injected.entries[0].site, s.injected.entries[0].expected});  // no-op edit
    ++edits;
    const SessionMetrics m = compute_metrics(s, d, edits);
    CHECK(edits == 8);
    CHECK(m.corrected == 4);
    CHECK(m.corrected == s.injected.size() - recount(d, truth));
    CHECK(m.extraneous_corrections == 4);
    CHECK(m.new_discrepancies == 0);
  }
  SUBCASE("new discrepancy") {
    const Scenario s = generate_scenario(truth, {0, 0, 1}, 2);
    const auto d = apply_repair(s.presented, {{Matrix::kQ, 0, 0}, 1.0});
    const SessionMetrics m = compute_metrics(s, d, 1);
    CHECK(m.remaining.size() == 2);
    CHECK(m.new_discrepancies == 1);
    CHECK(m.rse_pct == 100.0);
  }
}
