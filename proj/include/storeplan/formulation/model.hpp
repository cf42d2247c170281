#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "storeplan/core/types.hpp"
#include "storeplan/core/validation.hpp"
#include "storeplan/formulation/config.hpp"
#include "storeplan/solver/problem.hpp"
#include "storeplan/solver/solution.hpp"

namespace storeplan {

enum class VarRole : int {
  Invest,        ///< x_rn: (r, n)
  Build,         ///< z_rn: (r, n)
  Capacity,      ///< x^tot_rn, non-grid: (r, n)
  GridCapacity,  ///< x^tot_gnc: (n, c)
  LargestUnit,   ///< x^max_n: (n)
  Supply,        ///< y^s: (r, n, j, k, c)
  Demand,        ///< y^d: (d, n, j, k, c)
  Charge,        ///< SoC at the end of subperiod k: (n, j, k, c)
  ChargeTarget,  ///< y^0_n: (n)
  Market,        ///< z^M: (n, j, k, c)
  UnitSelect,    ///< picks the largest live grid unit: (n, candidate)
};

const char* role_name(VarRole role);

struct VarKey {
  VarRole role;
  std::array<int, 5> index{};
  auto operator<=>(const VarKey&) const = default;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver-agnostic MILP plus the registry mapping (role, index) to columns.
struct MilpModel {
  solver::Problem problem;
  Instance instance;              ///< effective instance the model was built from
  ValidationOptions semantics;    ///< which operational rules the model encodes
  bool market_binaries = false;   ///< big-M market participation added
  bool market_fixed_grid = false; ///< linear market participation added

  int add_var(VarKey key, double cost, double lo, double hi, solver::VarType type, int priority = 0);
  [[nodiscard]] int id(VarKey key) const;  ///< throws ModelError if unregistered
  [[nodiscard]] std::optional<int> find(VarKey key) const;
  [[nodiscard]] const std::map<VarKey, int>& registry() const { return registry_; }
  void fix(int col, double value);

 private:
  std::map<VarKey, int> registry_;
};

struct BigMConstants {
  double lower1 = 0.0;            ///< M_1 (lower), negative
  double lower2 = 0.0;            ///< M_2 (lower), negative
  Tensor4 upper1;                 ///< M_1 (upper) per (n, j, k, c)
  Tensor3 upper2;                 ///< M_2 (upper) per (n, j, k)
  double storage_buildout = 0.0;  ///< flattening power bound plus the storage investment limit, MW
};

/// Builds problem P with load shedding as an inequality and no market constraint.
MilpModel build_full_model(const Instance& instance, const ExperimentConfig& config);

/// Replaces the load inequality by load = ybar. Idempotent.
void add_no_load_shedding(MilpModel& model);

BigMConstants compute_bigM(const Instance& instance);

/// Adds one binary per (n, j, k, c) and the three disjunctive constraint families.
void add_market_participation(MilpModel& model, const BigMConstants& bigM);

/// Linear market constraint for fixed grid capacity: non-grid supply <= [ybar - x^tot_gnc]^+.
/// Throws ModelError if grid capacity columns are not fixed or load shedding is allowed.
void add_market_participation_fixed_grid(MilpModel& model);

/// Full model for a configuration: P, no-shedding unless allowed, market constraint in
/// peak-only mode.
MilpModel build_model(const Instance& instance, const ExperimentConfig& config);

/// Fixes every investment-side column to the values implied by plan.x. Throws ModelError for a
/// plan that violates the investment bounds.
void fix_investments(MilpModel& model, const InvestmentPlan& plan);

struct ExtractedSolution {
  InvestmentPlan plan;
  OperationPlan operation;
  CostBreakdown costs;
  double solver_objective = 0.0;
  std::vector<Violation> violations;
};

/// Unpacks a solver vector. Binaries are rounded (error if farther than 1e-6 from 0/1),
/// investments cleaned to their admissible range, capacities recomputed from the investments.
/// Throws ModelError if the result fails validation and throw_on_violation is set.
ExtractedSolution extract_solution(const MilpModel& model, const std::vector<double>& values,
                                   bool throw_on_violation = true);

}  // namespace storeplan
