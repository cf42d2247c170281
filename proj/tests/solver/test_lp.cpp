#include <doctest.h>

#include <random>

#include "storeplan/solver/simplex.hpp"
#include "../support/lp_oracle.hpp"

using namespace storeplan::solver;
using storeplan::testing::random_bounded_lp;
using storeplan::testing::vertex_enumeration;

namespace {
Problem single_var(double lo, double up, double cost) {
  Problem p;
  p.add_column(cost, lo, up);
  return p;
}
}  // namespace

TEST_CASE("min x subject to x >= 3") {
  Problem p;
  const int x = p.add_column(1.0, -kInf, kInf);
  const int cols[] = {x};
  const double a[] = {1.0};
  p.add_row(cols, a, Sense::GreaterEqual, 3.0);
  const auto s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(s.values[0] == doctest::Approx(3.0));
}

TEST_CASE("maximisation by negation") {
  Problem p;
  const int x = p.add_column(-1.0, -kInf, kInf);
  const int cols[] = {x};
  const double a[] = {1.0};
  p.add_row(cols, a, Sense::LessEqual, 2.0);
  const auto s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-2.0));
}

TEST_CASE("unbounded and infeasible are reported") {
  CHECK(solve_lp(single_var(0.0, kInf, -1.0)).status == SolveStatus::Unbounded);
  Problem p;
  p.add_column(1.0, 0.0, 1.0);
  p.add_column(1.0, 0.0, 1.0);
  const int cols[] = {0, 1};
  const double a[] = {1.0, 1.0};
  p.add_row(cols, a, Sense::GreaterEqual, 3.0);
  CHECK(solve_lp(p).status == SolveStatus::Infeasible);
}

TEST_CASE("empty problem keeps the offset") {
  Problem p;
  p.objective_offset = 4.5;
  const auto s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == 4.5);
}

TEST_CASE("free variables and ranged rows") {
  // min x - y  s.t. 1 <= x + y <= 4, -2 <= x - y <= 2, x,y free
  Problem p;
  p.add_column(1.0, -kInf, kInf);
  p.add_column(-1.0, -kInf, kInf);
  const int cols[] = {0, 1};
  const double s1[] = {1.0, 1.0};
  const double s2[] = {1.0, -1.0};
  p.add_row(cols, s1, 1.0, 4.0);
  p.add_row(cols, s2, -2.0, 2.0);
  const auto s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-2.0));
  CHECK(p.max_violation(s.values) < 1e-9);
}

TEST_CASE("random LPs agree with vertex enumeration") {
  std::mt19937_64 rng(20240715);
  int feasible = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 20);
    const int pack = n > 10 ? 1 + static_cast<int>(rng() % 2) : 1 + static_cast<int>(rng() % 3);
    const int extra = static_cast<int>(rng() % (n > 10 ? 2 : 3));
    const Problem p = random_bounded_lp(rng, n, pack, extra);
    const auto oracle = vertex_enumeration(p);
    const auto s = solve_lp(p);
    CAPTURE(t);
    CAPTURE(n);
    if (!oracle) {
      CHECK(s.status == SolveStatus::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(std::abs(s.objective - *oracle) <= 1e-7);
    CHECK(p.max_violation(s.values) <= 1e-7);
    CHECK(s.best_bound <= s.objective + 1e-7);
  }
  CHECK(feasible >= 60);
}

TEST_CASE("LP solves are deterministic") {
  std::mt19937_64 rng(7);
  const Problem p = random_bounded_lp(rng, 12, 2, 1);
  const auto a = solve_lp(p);
  const auto b = solve_lp(p);
  CHECK(a.status == b.status);
  CHECK(a.values == b.values);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("bound changes re-solve from the previous basis") {
  std::mt19937_64 rng(11);
  Problem p = random_bounded_lp(rng, 8, 2, 1);
  SimplexSolver lp(p);
  auto first = lp.solve();
  if (first.status != SolveStatus::Optimal) return;
  for (int j = 0; j < p.num_cols(); ++j) {
    const double cap = std::floor(first.values[j]);
    lp.set_col_bounds(j, 0.0, cap);
    p.col_upper[j] = cap;
    const auto warm = lp.solve();
    const auto cold = solve_lp(p);
    REQUIRE(warm.status == cold.status);
    if (cold.status == SolveStatus::Optimal) CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-9));
  }
}
