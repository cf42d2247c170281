#pragma once

// Toy problems whose MPS export is frozen under tests/golden.

#include <string>
#include <utility>
#include <vector>

#include "storeplan/solver/problem.hpp"

namespace storeplan::testing {

inline solver::Problem toy_single_constraint() {
  using namespace solver;
  Problem p;
  p.name = "SINGLE";
  p.add_column(1.0, 0.0, kInf, VarType::Continuous, "x");
  p.add_column(2.5, 0.0, 4.0, VarType::Continuous, "y");
  const int cols[] = {0, 1};
  const double a[] = {1.0, 1.0};
  p.add_row(cols, a, Sense::GreaterEqual, 3.0, "demand");
  return p;
}

inline solver::Problem toy_mixed() {
  using namespace solver;
  Problem p;
  p.name = "MIXED";
  p.objective_offset = 12.75;
  p.add_column(-3.0, -kInf, kInf, VarType::Continuous, "free");
  p.add_column(0.05, -kInf, 8.0, VarType::Continuous, "minus");
  p.add_column(1e-7, 2.0, 2.0, VarType::Continuous, "fixed");
  p.add_column(9337.0, 0.0, 1.0, VarType::Binary, "build");
  p.add_column(0.0, -1.5, 1e6, VarType::Continuous, "boxed");
  const int c1[] = {0, 1, 3};
  const double a1[] = {1.0, -0.913, -178.0};
  p.add_row(c1, a1, -178.0, kInf, "bigm");
  const int c2[] = {0, 4};
  const double a2[] = {1.0, 1.0 / 3.0};
  p.add_row(c2, a2, -2.0, 5.0, "ranged");
  const int c3[] = {1, 2};
  const double a3[] = {2.0, 1.0};
  p.add_row(c3, a3, Sense::Equal, 6.0, "balance");
  const int c4[] = {2, 4};
  const double a4[] = {1.0, -1.0};
  p.add_row(c4, a4, Sense::LessEqual, 0.0, "cap");
  return p;
}

inline solver::Problem toy_long_names() {
  using namespace solver;
  Problem p;
  p.name = "a problem name that is far too long";
  for (int k = 0; k < 4; ++k) {
    p.add_column(1.0 + k, 0.0, 10.0, VarType::Continuous, "supply_backup[" + std::to_string(k) + "]");
  }
  p.add_column(0.0, 0.0, 1.0, VarType::Binary, "supply_b");
  for (int k = 0; k < 3; ++k) {
    const int cols[] = {k, k + 1};
    const double a[] = {1.0, 1.0};
    p.add_row(cols, a, Sense::GreaterEqual, 1.0 + k, "balance_n0_j0_k" + std::to_string(k));
  }
  const int cols[] = {0, 4};
  const double a[] = {1.0, -10.0};
  p.add_row(cols, a, Sense::LessEqual, 0.0, "COST");
  return p;
}

inline std::vector<std::pair<std::string, solver::Problem>> golden_toys() {
  return {{"single", toy_single_constraint()},
          {"mixed", toy_mixed()},
          {"long_names", toy_long_names()}};
}

}  // namespace storeplan::testing
