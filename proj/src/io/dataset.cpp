#include "storeplan/io/dataset.hpp"

#include <fmt/format.h>

namespace storeplan::io {

namespace chr = std::chrono;

Dataset load_dataset(const PlanningConfig& config) {
  config.validate();
  if (config.load_csv.empty()) throw ConfigError("load.csv is required");
  if (config.grid_price_csv.empty()) throw ConfigError("prices.grid_csv is required");
  Dataset d;
  d.load = load_timeseries(config.load_csv, {"timestamp", config.load_column, std::nullopt});
  d.grid_price = load_timeseries(config.grid_price_csv, {"timestamp", config.grid_price_column, std::nullopt});
  if (!config.peak_projection_csv.empty()) {
    d.peaks = load_yearly_series(config.peak_projection_csv);
  } else {
    const double span = config.peak_last_year - config.first_year;
    for (int n = 0; n < config.periods; ++n) {
      const double f = span > 0 ? n / span : 0.0;
      d.peaks[config.first_year + n] = config.peak_first_mw + f * (config.peak_last_mw - config.peak_first_mw);
    }
  }
  if (!config.capacity_price_csv.empty()) d.capacity_price = load_yearly_series(config.capacity_price_csv);
  if (!config.scarcity_events_csv.empty()) d.scarcity = load_scarcity_windows(config.scarcity_events_csv);
  for (int r = 0; r < kNumResources; ++r)
    if (!config.resources[r].unit_cost_csv.empty()) d.unit_cost[r] = load_yearly_series(config.resources[r].unit_cost_csv);
  return d;
}

BuiltInstance build_instance(const PlanningConfig& config, const Dataset& data) {
  config.validate();
  if (data.load.dates != data.grid_price.dates) {
    throw IngestError("load and grid price series cover different days");
  }
  const int N = config.periods;
  BuiltInstance out;
  out.days = select_representative_days(data.load, config.representative_days, config.day_selection);
  out.full_load = scale_load_by_peak(data.load, data.peaks, config.first_year, N);
  const int J = static_cast<int>(out.days.days.size());

  Instance& in = out.instance;
  Horizon& h = in.horizon;
  h.n_periods = N;
  h.n_operating = J;
  h.n_subperiods = 24;
  h.dt = 1.0;
  h.duration_weights = config.contingency
                           ? std::vector<double>{config.hours_without_contingency, config.hours_with_contingency}
                           : std::vector<double>{config.hours_without_contingency + config.hours_with_contingency};
  h.day_weights = out.days.weights;
  in.storage = config.storage;

  std::vector<double> credit(N, 0.0);
  if (data.capacity_price) {
    credit = yearly_values(*data.capacity_price, config.first_year, N);
    for (double& v : credit) v *= 12.0;
  }
  for (int r = 0; r < kNumResources; ++r) {
    const ResourceParams& p = config.resources[r];
    ResourceSpec s;
    s.kind = kResources[r];
    s.unit_cost = data.unit_cost[r] ? yearly_values(*data.unit_cost[r], config.first_year, N)
                                    : std::vector<double>(N, p.unit_cost);
    s.fixed_cost.assign(N, p.fixed_cost);
    s.min_invest = p.min_invest;
    s.max_invest = p.max_invest;
    s.lifetime = p.lifetime;
    for (const auto& u : p.preinstalled) {
      const int first = u.year - config.first_year;
      s.preinstalled.push_back({u.capacity, first, first + p.lifetime - 1});
    }
    s.capacity_price = s.kind == ResourceKind::Grid ? std::vector<double>(N, 0.0) : credit;
    in.specs[r] = std::move(s);
  }

  ExogenousSeries& x = in.series;
  x.load = Tensor3(N, J, 24);
  for (int r = 0; r < kNumResources; ++r) {
    x.supply_price[r] = Tensor3(N, J, 24);
    x.demand_price[r] = Tensor3(N, J, 24);
  }
  for (int n = 0; n < N; ++n)
    for (int j = 0; j < J; ++j)
      for (int k = 0; k < 24; ++k) {
        const int day = out.days.days[j];
        x.load(n, j, k) = out.full_load(n, day, k);
        const double lmp = data.grid_price.at(day, k);
        x.supply_price[idx(ResourceKind::Grid)](n, j, k) = lmp;
        x.demand_price[idx(DemandKind::Grid)](n, j, k) = lmp;
        x.supply_price[idx(ResourceKind::Backup)](n, j, k) = config.resources[idx(ResourceKind::Backup)].supply_price;
      }

  for (const auto& w : data.scarcity) {
    for (int j = 0; j < J; ++j) {
      const chr::year_month_day d{data.load.dates[out.days.days[j]]};
      if (d.month() != w.date.month() || d.day() != w.date.day()) continue;
      for (int n = 0; n < N; ++n)
        for (int k = w.hour_begin; k < w.hour_end; ++k) x.scarcity_events.push_back({n, j, k});
    }
  }
  in.validate();
  return out;
}

}  // namespace storeplan::io
