#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "storeplan/solver/problem.hpp"
#include "storeplan/solver/solution.hpp"

namespace storeplan::solver {

enum class BasisStatus : std::int8_t { Basic, AtLower, AtUpper, Free };

/// Simplex basis: one status per column, followed by one per row logical.
struct Basis {
  std::vector<BasisStatus> status;
};

struct LpResult {
  SolveStatus status = SolveStatus::NumericalError;
  std::vector<double> values;
  double objective = 0.0;
  double dual_bound = 0.0;
  long iterations = 0;
};

/// Bounded revised simplex on a fixed constraint matrix. Column bounds can be changed between
/// solves and the previous basis is reused, which is what branch-and-bound relies on: after a
/// bound change the old optimal basis stays dual feasible and the dual simplex repairs it.
///
/// Rows are turned into equalities A x - r = 0 with a bounded logical r per row. The matrix is
/// equilibrated with power-of-two row/column scales before any pivoting.
class SimplexSolver {
 public:
  explicit SimplexSolver(const Problem& problem, SolverOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  void set_col_bounds(int col, double lower, double upper);
  [[nodiscard]] double col_lower(int col) const;
  [[nodiscard]] double col_upper(int col) const;

  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline);

  /// Solves from the current basis (slack basis on the first call).
  LpResult solve();
  /// Solves starting from `basis`; falls back to the slack basis if it cannot be factorized.
  LpResult solve_from(const Basis& basis);

  [[nodiscard]] Basis basis() const;
  void reset_basis();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot LP solve. Binary columns are treated as continuous in [0,1].
Solution solve_lp(const Problem& problem, const SolverOptions& options = {});

}  // namespace storeplan::solver
