#include "storeplan/core/economics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace storeplan {

int lifetime_window_start(int n, int lifetime) { return std::max(0, n - lifetime + 1); }

namespace {

double preinstalled_total(const ResourceSpec& spec, int n) {
  double total = 0.0;
  for (const auto& u : spec.preinstalled) {
    if (u.live(n)) total += u.capacity;
  }
  return total;
}

double live_investment(std::span<const double> x, const ResourceSpec& spec, int n) {
  double total = 0.0;
  for (int i = lifetime_window_start(n, spec.lifetime); i <= n; ++i) total += x[i];
  return total;
}

}  // namespace

double installed_capacity(std::span<const double> x, const ResourceSpec& spec, int n) {
  if (spec.kind == ResourceKind::Grid) {
    throw std::invalid_argument("installed_capacity called for the grid; use grid_capacity");
  }
  return preinstalled_total(spec, n) + live_investment(x, spec, n);
}

double installed_capacity(const InvestmentPlan& plan, const ResourceSpec& spec, int n) {
  return installed_capacity(plan.x[idx(spec.kind)], spec, n);
}

double largest_grid_unit(std::span<const double> x, const ResourceSpec& spec, int n) {
  double largest = 0.0;
  for (const auto& u : spec.preinstalled) {
    if (u.live(n)) largest = std::max(largest, u.capacity);
  }
  for (int i = lifetime_window_start(n, spec.lifetime); i <= n; ++i) largest = std::max(largest, x[i]);
  return largest;
}

double grid_capacity(std::span<const double> x, const ResourceSpec& spec, int n, int c) {
  const double total = preinstalled_total(spec, n) + live_investment(x, spec, n);
  return c == 0 ? total : total - c * largest_grid_unit(x, spec, n);
}

double grid_capacity(const InvestmentPlan& plan, const ResourceSpec& spec, int n, int c) {
  return grid_capacity(plan.x[idx(ResourceKind::Grid)], spec, n, c);
}

std::optional<double> investment_cost(double x_mw, const ResourceSpec& spec, int n) {
  if (x_mw == 0.0) return 0.0;
  if (x_mw < spec.min_invest || x_mw > spec.max_invest || x_mw < 0.0) return std::nullopt;
  return spec.unit_cost[n] * kKwPerMw * x_mw + spec.fixed_cost[n];
}

void derive_capacities(InvestmentPlan& plan, const ResourceSpecs& specs, const Horizon& h) {
  const int N = h.n_periods;
  const int C = h.n_contingencies();
  plan.x_tot_grid.assign(C, std::vector<double>(N, 0.0));
  plan.x_max.assign(N, 0.0);
  for (int r = 0; r < kNumResources; ++r) {
    plan.x[r].resize(N, 0.0);
    plan.z[r].assign(N, 0.0);
    plan.x_tot[r].assign(N, 0.0);
    for (int n = 0; n < N; ++n) plan.z[r][n] = plan.x[r][n] > 0.0 ? 1.0 : 0.0;
    if (!specs[r]) continue;
    for (int n = 0; n < N; ++n) {
      if (r == idx(ResourceKind::Grid)) {
        plan.x_max[n] = largest_grid_unit(plan.x[r], *specs[r], n);
        for (int c = 0; c < C; ++c) plan.x_tot_grid[c][n] = grid_capacity(plan.x[r], *specs[r], n, c);
        plan.x_tot[r][n] = plan.x_tot_grid[0][n];
      } else {
        plan.x_tot[r][n] = installed_capacity(plan.x[r], *specs[r], n);
      }
    }
  }
}

InvestmentPlan make_plan(const std::array<std::vector<double>, kNumResources>& x,
                         const ResourceSpecs& specs, const Horizon& h) {
  InvestmentPlan plan = InvestmentPlan::zeros(h);
  for (int r = 0; r < kNumResources; ++r) {
    if (!x[r].empty()) plan.x[r] = x[r];
  }
  derive_capacities(plan, specs, h);
  return plan;
}

std::optional<double> net_investment_cost(const InvestmentPlan& plan, const ResourceSpecs& specs,
                                          const Horizon& h) {
  double total = 0.0;
  for (int r = 0; r < kNumResources; ++r) {
    for (int n = 0; n < h.n_periods; ++n) {
      const double x = plan.x[r].empty() ? 0.0 : plan.x[r][n];
      if (!specs[r]) {
        if (x != 0.0) return std::nullopt;
        continue;
      }
      const auto c = investment_cost(x, *specs[r], n);
      if (!c) return std::nullopt;
      total += *c;
      if (r != idx(ResourceKind::Grid)) {
        total -= specs[r]->capacity_price[n] * kKwPerMw * installed_capacity(plan.x[r], *specs[r], n);
      }
    }
  }
  return total;
}

double operating_cost(const OperationPlan& op, const ExogenousSeries& series, const Horizon& h,
                      int n, int c) {
  double total = 0.0;
  for (int j = 0; j < h.n_operating; ++j) {
    double day = 0.0;
    for (int k = 0; k < h.n_subperiods; ++k) {
      for (int r = 0; r < kNumResources; ++r) {
        day += series.supply_price[r](n, j, k) * op.supply[r](n, j, k, c);
        day -= series.demand_price[r](n, j, k) * op.demand[r](n, j, k, c);
      }
    }
    total += h.day_weights[j] * day;
  }
  return h.duration_weights[c] * total;
}

CostBreakdown cost_breakdown(const InvestmentPlan& plan, const OperationPlan& op,
                             const ResourceSpecs& specs, const ExogenousSeries& series,
                             const Horizon& h) {
  CostBreakdown out;
  for (int r = 0; r < kNumResources; ++r) {
    if (!specs[r]) continue;
    for (int n = 0; n < h.n_periods; ++n) {
      const auto c = investment_cost(plan.x[r][n], *specs[r], n);
      if (!c) {
        throw std::invalid_argument(fmt::format("investment {} MW in resource {} period {} is not admissible",
                                                plan.x[r][n], short_name(specs[r]->kind), n));
      }
      out.capital[r] += *c;
      if (r != idx(ResourceKind::Grid)) {
        out.capacity_revenue[r] +=
            specs[r]->capacity_price[n] * kKwPerMw * installed_capacity(plan.x[r], *specs[r], n);
      }
    }
  }
  out.operating.assign(h.n_contingencies(), 0.0);
  for (int c = 0; c < h.n_contingencies(); ++c) {
    for (int n = 0; n < h.n_periods; ++n) out.operating[c] += operating_cost(op, series, h, n, c);
  }
  out.total = out.total_capital() - out.total_capacity_revenue() + out.total_operating();
  return out;
}

}  // namespace storeplan
