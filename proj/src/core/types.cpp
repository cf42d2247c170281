#include "storeplan/core/types.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace storeplan {

const char* short_name(ResourceKind r) {
  switch (r) {
    case ResourceKind::Backup: return "b";
    case ResourceKind::Grid: return "g";
    case ResourceKind::Storage: return "s";
  }
  return "?";
}

const char* short_name(DemandKind d) {
  switch (d) {
    case DemandKind::Grid: return "g";
    case DemandKind::Load: return "l";
    case DemandKind::Storage: return "s";
  }
  return "?";
}

double Horizon::total_day_weight() const {
  return std::accumulate(day_weights.begin(), day_weights.end(), 0.0);
}

void Horizon::validate() const {
  if (n_periods < 1 || n_operating < 1 || n_subperiods < 1) {
    throw std::invalid_argument("horizon: N, J and K must be at least 1");
  }
  if (!(dt > 0)) throw std::invalid_argument("horizon: dt must be positive");
  if (duration_weights.empty() || duration_weights.size() > 2) {
    throw std::invalid_argument("horizon: one or two contingencies expected");
  }
  for (double t : duration_weights) {
    if (!(t >= 0)) throw std::invalid_argument("horizon: duration weights must be nonnegative");
  }
  if (static_cast<int>(day_weights.size()) != n_operating) {
    throw std::invalid_argument(
        fmt::format("horizon: {} day weights for {} operating periods", day_weights.size(), n_operating));
  }
  for (double w : day_weights) {
    if (!(w > 0)) throw std::invalid_argument("horizon: day weights must be positive");
  }
}

void ResourceSpec::validate(int n_periods) const {
  const auto name = short_name(kind);
  if (static_cast<int>(unit_cost.size()) != n_periods ||
      static_cast<int>(fixed_cost.size()) != n_periods ||
      static_cast<int>(capacity_price.size()) != n_periods) {
    throw std::invalid_argument(fmt::format("resource {}: cost series must have one value per period", name));
  }
  if (!(min_invest >= 0) || !(max_invest >= min_invest)) {
    throw std::invalid_argument(fmt::format("resource {}: need 0 <= min_invest <= max_invest", name));
  }
  if (lifetime < 1) throw std::invalid_argument(fmt::format("resource {}: lifetime must be >= 1", name));
  for (int n = 0; n < n_periods; ++n) {
    if (!(unit_cost[n] >= 0) || !(fixed_cost[n] >= 0) || !(capacity_price[n] >= 0)) {
      throw std::invalid_argument(fmt::format("resource {}: costs and prices must be nonnegative", name));
    }
  }
  for (const auto& u : preinstalled) {
    if (!(u.capacity >= 0)) throw std::invalid_argument(fmt::format("resource {}: negative preinstalled unit", name));
  }
}

void StorageSpec::validate() const {
  if (!(eta_c > 0 && eta_c <= 1) || !(eta_d > 0 && eta_d <= 1)) {
    throw std::invalid_argument("storage: efficiencies must lie in (0, 1]");
  }
  if (!(duration > 0)) throw std::invalid_argument("storage: duration must be positive");
  if (!(cycle_limit > 0)) throw std::invalid_argument("storage: cycle limit must be positive");
}

void ExogenousSeries::validate(const Horizon& h) const {
  const int n = h.n_periods, j = h.n_operating, k = h.n_subperiods;
  if (!load.matches(n, j, k)) throw std::invalid_argument("series: load does not match the horizon");
  for (double v : load.data()) {
    if (!(v >= 0)) throw std::invalid_argument("series: load must be nonnegative");
  }
  for (int r = 0; r < kNumResources; ++r) {
    if (!supply_price[r].matches(n, j, k) || !demand_price[r].matches(n, j, k)) {
      throw std::invalid_argument("series: price series do not match the horizon");
    }
  }
  for (const auto& e : scarcity_events) {
    if (e.n < 0 || e.n >= n || e.j < 0 || e.j >= j || e.k < 0 || e.k >= k) {
      throw std::invalid_argument("series: scarcity event outside the horizon");
    }
  }
}

InvestmentPlan InvestmentPlan::zeros(const Horizon& h) {
  InvestmentPlan p;
  const auto n = static_cast<std::size_t>(h.n_periods);
  for (int r = 0; r < kNumResources; ++r) {
    p.x[r].assign(n, 0.0);
    p.z[r].assign(n, 0.0);
    p.x_tot[r].assign(n, 0.0);
  }
  p.x_tot_grid.assign(static_cast<std::size_t>(h.n_contingencies()), std::vector<double>(n, 0.0));
  p.x_max.assign(n, 0.0);
  return p;
}

OperationPlan OperationPlan::zeros(const Horizon& h) {
  OperationPlan op;
  const int n = h.n_periods, j = h.n_operating, k = h.n_subperiods, c = h.n_contingencies();
  for (int r = 0; r < kNumResources; ++r) {
    op.supply[r] = Tensor4(n, j, k, c);
    op.demand[r] = Tensor4(n, j, k, c);
  }
  op.soc = Tensor4(n, j, k, c);
  op.soc_target.assign(static_cast<std::size_t>(n), 0.0);
  return op;
}

double CostBreakdown::total_capital() const { return capital[0] + capital[1] + capital[2]; }
double CostBreakdown::total_capacity_revenue() const {
  return capacity_revenue[0] + capacity_revenue[1] + capacity_revenue[2];
}
double CostBreakdown::total_operating() const {
  return std::accumulate(operating.begin(), operating.end(), 0.0);
}

void Instance::validate() const {
  horizon.validate();
  storage.validate();
  series.validate(horizon);
  for (int r = 0; r < kNumResources; ++r) {
    if (!specs[r]) continue;
    if (idx(specs[r]->kind) != r) throw std::invalid_argument("instance: resource spec stored under the wrong kind");
    specs[r]->validate(horizon.n_periods);
  }
  if (!specs[idx(ResourceKind::Grid)]) throw std::invalid_argument("instance: a grid resource is required");
}

}  // namespace storeplan
