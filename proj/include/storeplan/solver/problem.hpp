#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace storeplan::solver {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType : std::uint8_t { Continuous, Binary };

enum class Sense : std::uint8_t { LessEqual, Equal, GreaterEqual };

/// Sparse minimization problem
///
///   minimize    c'x + offset
///   subject to  row_lower <= A x <= row_upper
///               col_lower <= x <= col_upper,  x_j in {0,1} for binary columns
///
/// The constraint matrix is stored row-wise (CSR). Infinite bounds use kInf.
struct Problem {
  std::string name = "PROBLEM";

  std::vector<double> objective;
  double objective_offset = 0.0;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<VarType> col_type;
  /// Branching priority per column (higher is branched first). Empty means all zero.
  std::vector<int> branch_priority;
  std::vector<std::string> col_names;

  std::vector<int> row_start{0};
  std::vector<int> row_index;
  std::vector<double> row_value;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  std::vector<std::string> row_names;

  [[nodiscard]] int num_cols() const { return static_cast<int>(objective.size()); }
  [[nodiscard]] int num_rows() const { return static_cast<int>(row_lower.size()); }
  [[nodiscard]] int num_nonzeros() const { return static_cast<int>(row_index.size()); }
  [[nodiscard]] int num_binaries() const;

  int add_column(double cost, double lower, double upper, VarType type = VarType::Continuous,
                 std::string name = {});
  int add_row(std::span<const int> cols, std::span<const double> coefs, double lower,
              double upper, std::string name = {});
  int add_row(std::span<const int> cols, std::span<const double> coefs, Sense sense, double rhs,
              std::string name = {});

  [[nodiscard]] int priority(int col) const {
    return branch_priority.empty() ? 0 : branch_priority[static_cast<std::size_t>(col)];
  }

  /// Evaluates c'x + offset.
  [[nodiscard]] double evaluate_objective(std::span<const double> x) const;
  /// Largest bound or row violation of x (integrality is not checked).
  [[nodiscard]] double max_violation(std::span<const double> x) const;

  /// Throws std::invalid_argument on inconsistent dimensions, bad indices, NaNs or crossed bounds.
  void validate() const;
};

}  // namespace storeplan::solver
