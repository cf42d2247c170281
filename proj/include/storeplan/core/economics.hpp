#pragma once

#include <optional>
#include <span>

#include "storeplan/core/types.hpp"

namespace storeplan {

/// MW to kW; unit costs and capacity prices are quoted per kW.
inline constexpr double kKwPerMw = 1000.0;

/// First period (0-based) whose investment is still live in period n: max(0, n - lifetime + 1).
int lifetime_window_start(int n, int lifetime);

/// Preinstalled plus live investments of a non-grid resource in period n. Throws
/// std::invalid_argument for the grid (use grid_capacity).
double installed_capacity(std::span<const double> x, const ResourceSpec& spec, int n);
double installed_capacity(const InvestmentPlan& plan, const ResourceSpec& spec, int n);

/// Grid capacity in period n under contingency c: total live capacity minus, for c = 1, the
/// largest live unit (preinstalled or invested).
double grid_capacity(std::span<const double> x, const ResourceSpec& spec, int n, int c);
double grid_capacity(const InvestmentPlan& plan, const ResourceSpec& spec, int n, int c);

/// Largest live grid unit in period n.
double largest_grid_unit(std::span<const double> x, const ResourceSpec& spec, int n);

/// c_rn(x): 0 for x = 0, p x + p0 inside [min, max], nullopt (infeasible) otherwise.
std::optional<double> investment_cost(double x_mw, const ResourceSpec& spec, int n);

/// Fills z, x_tot, x_tot_grid and x_max from plan.x.
void derive_capacities(InvestmentPlan& plan, const ResourceSpecs& specs, const Horizon& h);

/// Plan with the given investments and all derived fields filled in.
InvestmentPlan make_plan(const std::array<std::vector<double>, kNumResources>& x,
                         const ResourceSpecs& specs, const Horizon& h);

/// f(x) = sum of investment costs minus capacity credits of non-grid resources. nullopt if any
/// investment is infeasible.
std::optional<double> net_investment_cost(const InvestmentPlan& plan, const ResourceSpecs& specs,
                                          const Horizon& h);

/// g_nc(y) = T_c sum_j w_j sum_k (supply cost - demand revenue).
double operating_cost(const OperationPlan& op, const ExogenousSeries& series, const Horizon& h,
                      int n, int c);

/// Capital, capacity revenue and operating cost of a plan. Throws std::invalid_argument if an
/// investment is outside its admissible range.
CostBreakdown cost_breakdown(const InvestmentPlan& plan, const OperationPlan& op,
                             const ResourceSpecs& specs, const ExogenousSeries& series,
                             const Horizon& h);

}  // namespace storeplan
