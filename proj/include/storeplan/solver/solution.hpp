#pragma once

#include <cmath>
#include <string_view>
#include <vector>

namespace storeplan::solver {

enum class SolveStatus {
  Optimal,
  GapFeasible,     ///< limit reached with an incumbent; achieved gap reported
  Infeasible,
  Unbounded,
  TimeLimit,       ///< limit reached before any feasible point was found
  NumericalError,
};

std::string_view to_string(SolveStatus status);
SolveStatus status_from_string(std::string_view text);

struct SolverOptions {
  double mip_gap = 1e-5;           ///< relative gap |incumbent - bound| / |incumbent|
  double time_limit = 14400.0;     ///< seconds
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  double integrality_tol = 1e-6;
  long node_limit = 10'000'000;
  long iteration_limit = 50'000'000;
  bool verbose = false;

  void validate() const;
};

struct Solution {
  SolveStatus status = SolveStatus::NumericalError;
  std::vector<double> values;
  double objective = NAN;
  double best_bound = NAN;   ///< proven lower bound on the optimum
  double gap = NAN;          ///< relative gap, 0 for LPs solved to optimality
  long nodes = 0;
  long iterations = 0;
  double wall_time = 0.0;
  /// Objective of every new incumbent in the order found (branch-and-bound only).
  std::vector<double> incumbent_history;

  [[nodiscard]] bool has_values() const {
    return status == SolveStatus::Optimal || status == SolveStatus::GapFeasible;
  }
};

}  // namespace storeplan::solver
