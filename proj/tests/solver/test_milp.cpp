#include <doctest.h>

#include <random>

#include "storeplan/solver/branch_and_bound.hpp"
#include "../support/lp_oracle.hpp"

using namespace storeplan::solver;
using storeplan::testing::binary_enumeration;
using storeplan::testing::random_milp;

TEST_CASE("infeasible binary system") {
  Problem p;
  p.add_column(1.0, 0.0, 1.0, VarType::Binary);
  p.add_column(1.0, 0.0, 1.0, VarType::Binary);
  const int cols[] = {0, 1};
  const double a[] = {1.0, 1.0};
  p.add_row(cols, a, Sense::Equal, 1.5);
  CHECK(solve_milp(p).status == SolveStatus::Infeasible);
}

TEST_CASE("fixed binaries reduce to the LP") {
  std::mt19937_64 rng(3);
  Problem p = random_milp(rng, 5, 4);
  for (int j = 0; j < 4; ++j) p.col_lower[j] = p.col_upper[j] = j % 2;
  const auto lp = solve_lp(p);
  const auto mip = solve_milp(p);
  REQUIRE(lp.status == mip.status);
  if (lp.status == SolveStatus::Optimal) CHECK(mip.objective == doctest::Approx(lp.objective).epsilon(1e-9));
}

TEST_CASE("knapsack") {
  // max 10a + 13b + 7c  s.t. 4a + 6b + 3c <= 9
  Problem p;
  for (double v : {10.0, 13.0, 7.0}) p.add_column(-v, 0.0, 1.0, VarType::Binary);
  const int cols[] = {0, 1, 2};
  const double w[] = {4.0, 6.0, 3.0};
  p.add_row(cols, w, Sense::LessEqual, 9.0);
  const auto s = solve_milp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-20.0));
  CHECK(s.gap <= 1e-5);
}

TEST_CASE("random MILPs agree with binary enumeration") {
  std::mt19937_64 rng(424242);
  int feasible = 0;
  for (int t = 0; t < 50; ++t) {
    const int bins = 1 + static_cast<int>(rng() % 10);
    const int cont = 1 + static_cast<int>(rng() % 6);
    const Problem p = random_milp(rng, cont, bins);
    const auto oracle = binary_enumeration(p);
    const auto s = solve_milp(p);
    CAPTURE(t);
    if (!oracle) {
      CHECK(s.status == SolveStatus::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.gap <= 1e-5);
    CHECK(std::abs(s.objective - *oracle) <= 1e-7 * std::max(1.0, std::abs(*oracle)));
    CHECK(p.max_violation(s.values) <= 1e-7);
    for (int j = 0; j < bins; ++j) CHECK((s.values[j] == 0.0 || s.values[j] == 1.0));
    for (std::size_t h = 1; h < s.incumbent_history.size(); ++h) {
      CHECK(s.incumbent_history[h] <= s.incumbent_history[h - 1]);
    }
  }
  CHECK(feasible >= 30);
}

TEST_CASE("MILP solves are deterministic") {
  std::mt19937_64 rng(99);
  const Problem p = random_milp(rng, 6, 8);
  const auto a = solve_milp(p);
  const auto b = solve_milp(p);
  CHECK(a.status == b.status);
  CHECK(a.values == b.values);
  CHECK(a.nodes == b.nodes);
  CHECK(a.incumbent_history == b.incumbent_history);
}

TEST_CASE("node limit yields a gap-feasible or time-limit status") {
  std::mt19937_64 rng(5);
  const Problem p = random_milp(rng, 6, 10);
  SolverOptions opt;
  opt.node_limit = 1;
  const auto s = solve_milp(p, opt);
  CHECK((s.status == SolveStatus::GapFeasible || s.status == SolveStatus::TimeLimit ||
         s.status == SolveStatus::Optimal || s.status == SolveStatus::Infeasible));
  if (s.status == SolveStatus::GapFeasible) CHECK(s.gap > opt.mip_gap);
}
