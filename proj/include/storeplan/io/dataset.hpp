#pragma once

#include <array>
#include <optional>
#include <vector>

#include "storeplan/core/types.hpp"
#include "storeplan/io/config.hpp"
#include "storeplan/io/timeseries.hpp"

namespace storeplan::io {

/// Raw inputs named by a PlanningConfig.
struct Dataset {
  RawSeries load;
  RawSeries grid_price;
  PeakProjection peaks;
  std::optional<YearlySeries> capacity_price;  ///< $/kW-month
  std::vector<ScarcityWindow> scarcity;
  std::array<std::optional<YearlySeries>, kNumResources> unit_cost;  ///< $/kW
};

/// Reads every file the configuration names. Without a projection file the peaks are
/// interpolated linearly between load.peak_first_mw and load.peak_last_mw.
Dataset load_dataset(const PlanningConfig& config);

struct BuiltInstance {
  Instance instance;
  DaySelection days;
  Tensor3 full_load;  ///< scaled load for every day of the base year, (N, days, 24)
};

/// Assembles the planning instance: scaled load on the representative days, the grid price on
/// the same days for every period, per-period costs and credits, preinstalled units, and
/// scarcity hours matched to representative days by month and day.
BuiltInstance build_instance(const PlanningConfig& config, const Dataset& data);

}  // namespace storeplan::io
