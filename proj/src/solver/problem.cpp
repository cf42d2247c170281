#include "storeplan/solver/problem.hpp"
#include "storeplan/solver/solution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace storeplan::solver {

int Problem::num_binaries() const {
  return static_cast<int>(std::count(col_type.begin(), col_type.end(), VarType::Binary));
}

int Problem::add_column(double cost, double lower, double upper, VarType type, std::string name) {
  const int id = num_cols();
  objective.push_back(cost);
  if (type == VarType::Binary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  col_lower.push_back(lower);
  col_upper.push_back(upper);
  col_type.push_back(type);
  if (!branch_priority.empty()) branch_priority.push_back(0);
  col_names.push_back(name.empty() ? fmt::format("C{}", id) : std::move(name));
  return id;
}

int Problem::add_row(std::span<const int> cols, std::span<const double> coefs, double lower,
                     double upper, std::string name) {
  if (cols.size() != coefs.size()) throw std::invalid_argument("add_row: size mismatch");
  const int id = num_rows();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (coefs[i] == 0.0) continue;
    row_index.push_back(cols[i]);
    row_value.push_back(coefs[i]);
  }
  row_start.push_back(static_cast<int>(row_index.size()));
  row_lower.push_back(lower);
  row_upper.push_back(upper);
  row_names.push_back(name.empty() ? fmt::format("R{}", id) : std::move(name));
  return id;
}

int Problem::add_row(std::span<const int> cols, std::span<const double> coefs, Sense sense,
                     double rhs, std::string name) {
  switch (sense) {
    case Sense::LessEqual: return add_row(cols, coefs, -kInf, rhs, std::move(name));
    case Sense::Equal: return add_row(cols, coefs, rhs, rhs, std::move(name));
    case Sense::GreaterEqual: return add_row(cols, coefs, rhs, kInf, std::move(name));
  }
  throw std::invalid_argument("add_row: bad sense");
}

double Problem::evaluate_objective(std::span<const double> x) const {
  double value = objective_offset;
  for (int j = 0; j < num_cols(); ++j) value += objective[j] * x[j];
  return value;
}

double Problem::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_cols(); ++j) {
    worst = std::max({worst, col_lower[j] - x[j], x[j] - col_upper[j]});
  }
  for (int i = 0; i < num_rows(); ++i) {
    double activity = 0.0;
    for (int p = row_start[i]; p < row_start[i + 1]; ++p) activity += row_value[p] * x[row_index[p]];
    worst = std::max({worst, row_lower[i] - activity, activity - row_upper[i]});
  }
  return worst;
}

void Problem::validate() const {
  const auto n = static_cast<std::size_t>(num_cols());
  const auto m = static_cast<std::size_t>(num_rows());
  if (col_lower.size() != n || col_upper.size() != n || col_type.size() != n ||
      col_names.size() != n) {
    throw std::invalid_argument("problem: column arrays have inconsistent sizes");
  }
  if (!branch_priority.empty() && branch_priority.size() != n) {
    throw std::invalid_argument("problem: branch_priority size mismatch");
  }
  if (row_upper.size() != m || row_names.size() != m || row_start.size() != m + 1) {
    throw std::invalid_argument("problem: row arrays have inconsistent sizes");
  }
  if (row_index.size() != row_value.size() ||
      static_cast<std::size_t>(row_start.back()) != row_index.size()) {
    throw std::invalid_argument("problem: CSR arrays are inconsistent");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(objective[j]) || std::isnan(col_lower[j]) || std::isnan(col_upper[j])) {
      throw std::invalid_argument(fmt::format("problem: NaN in column {}", col_names[j]));
    }
    if (col_lower[j] > col_upper[j]) {
      throw std::invalid_argument(fmt::format("problem: crossed bounds on column {}", col_names[j]));
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (std::isnan(row_lower[i]) || std::isnan(row_upper[i]) || row_lower[i] > row_upper[i]) {
      throw std::invalid_argument(fmt::format("problem: bad bounds on row {}", row_names[i]));
    }
  }
  for (std::size_t p = 0; p < row_index.size(); ++p) {
    if (row_index[p] < 0 || static_cast<std::size_t>(row_index[p]) >= n) {
      throw std::invalid_argument("problem: row references an unknown column");
    }
    if (!std::isfinite(row_value[p])) throw std::invalid_argument("problem: non-finite coefficient");
  }
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::GapFeasible: return "gap_feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::NumericalError: return "numerical_error";
  }
  return "unknown";
}

SolveStatus status_from_string(std::string_view text) {
  for (auto s : {SolveStatus::Optimal, SolveStatus::GapFeasible, SolveStatus::Infeasible,
                 SolveStatus::Unbounded, SolveStatus::TimeLimit, SolveStatus::NumericalError}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument(fmt::format("unknown solve status '{}'", text));
}

void SolverOptions::validate() const {
  if (mip_gap < 0 || time_limit < 0 || feasibility_tol < 0 || optimality_tol < 0 ||
      integrality_tol < 0 || node_limit < 0 || iteration_limit < 0) {
    throw std::invalid_argument("solver options must be nonnegative");
  }
}

}  // namespace storeplan::solver
