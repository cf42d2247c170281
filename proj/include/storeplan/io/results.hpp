#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "storeplan/core/types.hpp"
#include "storeplan/formulation/config.hpp"

namespace storeplan::io {

/// Yearly energies for one contingency, GWh/yr averaged over planning periods.
struct EnergyTotals {
  double demand_grid = 0, demand_load = 0, demand_storage = 0;
  double supply_backup = 0, supply_grid = 0, supply_storage = 0;
  bool operator==(const EnergyTotals&) const = default;
};

struct ExperimentMetrics {
  std::array<double, kNumResources> terminal_capacity{};  ///< MW installed in the last period
  std::array<double, kNumResources> total_investment{};   ///< MW built over the horizon
  std::vector<EnergyTotals> energy;                        ///< per contingency
  std::vector<std::optional<double>> cycles_average;       ///< per contingency, over periods with storage
  std::vector<std::optional<double>> cycles_maximum;
  std::vector<std::optional<double>> scarcity_backup;      ///< per contingency
  std::vector<std::optional<double>> scarcity_storage;
  double storage_build = 0;                                ///< MW, largest installed storage capacity
  std::optional<double> flattening_power_bound;            ///< MW
  bool operator==(const ExperimentMetrics&) const = default;
};

/// Everything reported for one experiment.
struct ExperimentResult {
  std::string name;
  MarketMode market_mode = MarketMode::Full;
  std::array<bool, kNumResources> investable{};
  std::optional<double> storage_cost_per_kwh;
  CycleScope cycle_scope = CycleScope::Yearly;
  std::optional<double> capacity_price_per_kw_month;

  std::string status;  ///< solver status name, or "error"
  std::optional<std::string> error;
  double solve_time = 0;  ///< s
  double mip_gap = 0;     ///< relative
  double mip_gap_limit = 0;  ///< configured relative gap
  double objective = 0;   ///< $
  std::vector<double> duration_weights;  ///< T_c
  CostBreakdown costs;
  InvestmentPlan plan;
  OperationPlan operation;  ///< hourly decisions, kept so a saved result can be re-checked
  ExperimentMetrics metrics;
  std::vector<std::string> violations;
  int complementarity_violations = 0;  ///< -1 when not checked (some price is negative)

  [[nodiscard]] bool ok() const { return !error && violations.empty() && complementarity_violations <= 0; }
};

/// Metrics from a solved plan. The flattening bound is left unset.
ExperimentMetrics compute_metrics(const Instance& instance, const InvestmentPlan& plan, const OperationPlan& op);

/// Row labels of the results table, group headers included, in order.
const std::vector<std::string>& table_row_labels();

/// Results table: one column per experiment. Costs in M$, 3 decimals; "na" where a row does not
/// apply. With timing off the solve time row reads "na" so reports are reproducible.
std::string results_table_csv(const std::vector<ExperimentResult>& results, bool timing = true);

std::string results_json(const std::vector<ExperimentResult>& results, bool timing = true);
std::vector<ExperimentResult> parse_results_json(const std::string& text);

/// Writes results.json and results.csv into dir (created if needed).
void write_results(const std::vector<ExperimentResult>& results, const std::filesystem::path& dir, bool timing = true);
std::vector<ExperimentResult> read_results(const std::filesystem::path& json_path);

}  // namespace storeplan::io
