#pragma once

#include <optional>
#include <string>
#include <vector>

#include "storeplan/core/types.hpp"

namespace storeplan {

inline constexpr double kFeasibilityTol = 1e-6;

enum class CycleScope { Yearly, Daily };

struct ValidationOptions {
  bool load_shedding = false;
  bool market_participation = false;  ///< restricted: non-grid supply only covers the grid shortfall
  CycleScope cycle_scope = CycleScope::Yearly;
  double tol = kFeasibilityTol;
};

struct Violation {
  std::string constraint;
  std::vector<int> index;  ///< (n, j, k, c) or a prefix of it, depending on the constraint
  double residual = 0.0;   ///< amount by which the constraint is violated
};

std::string describe(const Violation& v);

/// Checks an operation plan against every operational constraint for the capacities implied by
/// plan.x (plan.x_tot is not trusted). Also checks the investment bounds.
std::vector<Violation> validate_operation(const OperationPlan& op, const InvestmentPlan& plan,
                                          const ResourceSpecs& specs, const StorageSpec& storage,
                                          const Horizon& h, const ExogenousSeries& series,
                                          const ValidationOptions& options = {});

/// Indices (n, j, k, c) where storage charges and discharges at the same time.
std::vector<std::array<int, 4>> check_complementarity(const OperationPlan& op, double tol = kFeasibilityTol);

/// Equivalent full discharge cycles in period n under contingency c. Returns 0 for zero capacity
/// and zero discharge; throws std::invalid_argument for discharge without capacity.
double discharge_cycles(const OperationPlan& op, const StorageSpec& storage, double capacity_mw,
                        const Horizon& h, int n, int c);

/// Minimum over scarcity event hours of supply / installed capacity for one resource and
/// contingency. Event hours in periods without capacity are skipped; nullopt if none remain.
std::optional<double> scarcity_supply_ratio(const OperationPlan& op, const std::vector<EventHour>& events,
                                            const InvestmentPlan& plan, ResourceKind r, int c);

}  // namespace storeplan
