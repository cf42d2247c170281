#pragma once

#include <array>
#include <optional>
#include <string>

#include "storeplan/core/types.hpp"
#include "storeplan/core/validation.hpp"
#include "storeplan/solver/solution.hpp"

namespace storeplan {

enum class MarketMode {
  PeakOnly,  ///< non-grid supply limited to the grid shortfall, no capacity credits
  Full,      ///< arbitrage allowed, capacity credits when the price is nonzero
};

std::string_view to_string(MarketMode m);
MarketMode market_mode_from_string(std::string_view text);
std::string_view to_string(CycleScope s);
CycleScope cycle_scope_from_string(std::string_view text);

struct ExperimentConfig {
  std::string name = "experiment";
  MarketMode market_mode = MarketMode::Full;
  std::array<bool, kNumResources> investable{false, true, true};  ///< by ResourceKind
  std::optional<double> storage_cost_per_kwh;                     ///< replaces the storage unit cost
  CycleScope cycle_scope = CycleScope::Yearly;
  std::optional<double> capacity_price_per_kw_month;              ///< replaces the b/s credit series
  bool load_shedding = false;
  double load_shed_value = 9337.0;  ///< $/MWh, used only when shedding is allowed
  solver::SolverOptions solver;

  void validate() const;
};

/// Copy of the instance with the configuration folded in: non-investable resources get a zero
/// investment range, cost and credit overrides are applied, peak-only mode drops capacity
/// credits, the load price is the shed value when shedding is allowed and 0 otherwise. The grid
/// credit price is always 0.
Instance apply_config(const Instance& instance, const ExperimentConfig& config);

}  // namespace storeplan
