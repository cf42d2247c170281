#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "storeplan/io/results.hpp"

namespace storeplan::app {

/// Savings relative to exp1 split into successive differences:
/// deferred investment = exp1 - exp2, arbitrage = exp2 - exp3, capacity market = exp3 - exp4.
struct SavingsDecomposition {
  double baseline = 0;  ///< exp1 total cost, $
  double deferred_investment = 0;
  double arbitrage = 0;
  double capacity_market = 0;
  [[nodiscard]] double total() const { return deferred_investment + arbitrage + capacity_market; }
};

/// Needs solved experiments named exp1..exp4.
SavingsDecomposition savings_decomposition(const std::vector<io::ExperimentResult>& results);
std::string savings_csv(const SavingsDecomposition& s);

/// Savings of every experiment against the first one, percent of the first one's total cost.
std::string savings_table_csv(const std::vector<io::ExperimentResult>& results);

/// Hourly supply of each resource divided by its installed capacity, long format
/// `resource,contingency,day,hour,value`, for period n. Zero capacity gives 0.
std::string supply_heatmap_csv(const io::ExperimentResult& result, int n);

/// Writes savings.csv (when exp1..exp4 are present), savings_vs_first.csv and
/// heatmap_<name>.csv per solved experiment. Throws std::out_of_range for a period outside the
/// horizon.
void emit_plot_data(const std::vector<io::ExperimentResult>& results, int n, const std::filesystem::path& dir);

}  // namespace storeplan::app
