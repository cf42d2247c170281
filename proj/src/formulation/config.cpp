#include "storeplan/formulation/config.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace storeplan {

std::string_view to_string(MarketMode m) { return m == MarketMode::PeakOnly ? "peak" : "full"; }

MarketMode market_mode_from_string(std::string_view text) {
  if (text == "peak" || text == "peak_only") return MarketMode::PeakOnly;
  if (text == "full") return MarketMode::Full;
  throw std::invalid_argument(fmt::format("unknown market mode '{}'", text));
}

std::string_view to_string(CycleScope s) { return s == CycleScope::Daily ? "daily" : "yearly"; }

CycleScope cycle_scope_from_string(std::string_view text) {
  if (text == "yearly") return CycleScope::Yearly;
  if (text == "daily") return CycleScope::Daily;
  throw std::invalid_argument(fmt::format("unknown cycle scope '{}'", text));
}

void ExperimentConfig::validate() const {
  if (storage_cost_per_kwh && !(*storage_cost_per_kwh >= 0)) {
    throw std::invalid_argument("config: storage cost must be nonnegative");
  }
  if (capacity_price_per_kw_month && !(*capacity_price_per_kw_month >= 0)) {
    throw std::invalid_argument("config: capacity price must be nonnegative");
  }
  if (!(load_shed_value >= 0)) throw std::invalid_argument("config: load shed value must be nonnegative");
  solver.validate();
}

Instance apply_config(const Instance& instance, const ExperimentConfig& config) {
  config.validate();
  Instance out = instance;
  const int N = out.horizon.n_periods;
  for (int r = 0; r < kNumResources; ++r) {
    auto& spec = out.specs[r];
    if (!spec) {
      if (config.investable[r]) {
        throw std::invalid_argument(
            fmt::format("config '{}' allows investment in {} but the instance has no such resource", config.name,
                        short_name(static_cast<ResourceKind>(r))));
      }
      continue;
    }
    if (!config.investable[r]) {
      spec->min_invest = 0.0;
      spec->max_invest = 0.0;
    }
  }
  auto& storage = out.specs[idx(ResourceKind::Storage)];
  if (config.storage_cost_per_kwh && storage) {
    storage->unit_cost.assign(N, *config.storage_cost_per_kwh * out.storage.duration);
  }
  for (int r = 0; r < kNumResources; ++r) {
    auto& spec = out.specs[r];
    if (!spec) continue;
    if (r == idx(ResourceKind::Grid) || config.market_mode == MarketMode::PeakOnly) {
      spec->capacity_price.assign(N, 0.0);
    } else if (config.capacity_price_per_kw_month) {
      spec->capacity_price.assign(N, *config.capacity_price_per_kw_month * 12.0);
    }
  }
  const double shed = config.load_shedding ? config.load_shed_value : 0.0;
  auto& load_price = out.series.demand_price[idx(DemandKind::Load)];
  std::fill(load_price.data().begin(), load_price.data().end(), shed);
  out.series.load_shed_value = shed;
  out.validate();
  return out;
}

}  // namespace storeplan
