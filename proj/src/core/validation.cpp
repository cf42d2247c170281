#include "storeplan/core/validation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "storeplan/core/economics.hpp"

namespace storeplan {

std::string describe(const Violation& v) {
  return fmt::format("{}[{}] residual {:.3g}", v.constraint, fmt::join(v.index, ","), v.residual);
}

namespace {

class Checker {
 public:
  explicit Checker(double tol) : tol_(tol) {}

  void le(double lhs, double rhs, const char* name, std::vector<int> index) {
    const double r = lhs - rhs;
    if (r > tol_ * (1.0 + std::abs(rhs))) out.push_back({name, std::move(index), r});
  }
  void eq(double lhs, double rhs, const char* name, std::vector<int> index) {
    const double r = std::abs(lhs - rhs);
    if (r > tol_ * (1.0 + std::abs(rhs))) out.push_back({name, std::move(index), r});
  }

  std::vector<Violation> out;

 private:
  double tol_;
};

}  // namespace

std::vector<Violation> validate_operation(const OperationPlan& op, const InvestmentPlan& plan,
                                          const ResourceSpecs& specs, const StorageSpec& storage,
                                          const Horizon& h, const ExogenousSeries& series,
                                          const ValidationOptions& options) {
  const int N = h.n_periods, J = h.n_operating, K = h.n_subperiods, C = h.n_contingencies();
  for (int r = 0; r < kNumResources; ++r) {
    if (!op.supply[r].matches(N, J, K, C) || !op.demand[r].matches(N, J, K, C)) {
      throw std::invalid_argument("validate_operation: operation plan does not match the horizon");
    }
  }
  if (!op.soc.matches(N, J, K, C) || static_cast<int>(op.soc_target.size()) != N) {
    throw std::invalid_argument("validate_operation: state of charge does not match the horizon");
  }
  Checker chk(options.tol);

  // capacities from the investments themselves
  std::vector<std::vector<double>> grid(C, std::vector<double>(N, 0.0));
  std::array<std::vector<double>, kNumResources> cap;
  for (int r = 0; r < kNumResources; ++r) {
    cap[r].assign(N, 0.0);
    for (int n = 0; n < N; ++n) {
      const double x = plan.x[r].empty() ? 0.0 : plan.x[r][n];
      if (!specs[r]) {
        chk.le(std::abs(x), 0.0, "investment_without_spec", {r, n});
        continue;
      }
      if (x < -options.tol) chk.le(-x, 0.0, "investment_nonneg", {r, n});
      if (x > options.tol) {
        chk.le(specs[r]->min_invest, x, "investment_min", {r, n});
        chk.le(x, specs[r]->max_invest, "investment_max", {r, n});
      }
      if (r == idx(ResourceKind::Grid)) {
        for (int c = 0; c < C; ++c) grid[c][n] = grid_capacity(plan.x[r], *specs[r], n, c);
      } else {
        cap[r][n] = installed_capacity(plan.x[r], *specs[r], n);
      }
    }
  }

  const auto b = idx(ResourceKind::Backup), g = idx(ResourceKind::Grid), s = idx(ResourceKind::Storage);
  const auto dg = idx(DemandKind::Grid), dl = idx(DemandKind::Load), ds = idx(DemandKind::Storage);
  const double cycle_days = options.cycle_scope == CycleScope::Daily ? h.total_day_weight() : 1.0;

  for (int n = 0; n < N; ++n) {
    const double soc_cap = storage.duration * cap[s][n];
    chk.le(-op.soc_target[n], 0.0, "soc_target_nonneg", {n});
    chk.le(op.soc_target[n], soc_cap, "soc_target_cap", {n});
    for (int c = 0; c < C; ++c) {
      double year_discharge = 0.0;
      for (int j = 0; j < J; ++j) {
        double prev = op.soc_target[n];
        double day_discharge = 0.0;
        for (int k = 0; k < K; ++k) {
          const std::vector<int> at{n, j, k, c};
          double supply = 0.0, demand = 0.0;
          for (int r = 0; r < kNumResources; ++r) {
            const double ys = op.supply[r](n, j, k, c);
            const double yd = op.demand[r](n, j, k, c);
            if (ys < -options.tol) chk.le(-ys, 0.0, "supply_nonneg", at);
            if (yd < -options.tol) chk.le(-yd, 0.0, "demand_nonneg", at);
            supply += ys;
            demand += yd;
          }
          chk.eq(supply, demand, "balance", at);
          chk.le(op.supply[b](n, j, k, c), cap[b][n], "supply_cap_backup", at);
          chk.le(op.supply[g](n, j, k, c), grid[c][n], "supply_cap_grid", at);
          chk.le(op.supply[s](n, j, k, c), cap[s][n], "supply_cap_storage", at);
          chk.le(op.demand[dg](n, j, k, c), grid[c][n], "demand_cap_grid", at);
          chk.le(op.demand[ds](n, j, k, c), cap[s][n], "demand_cap_storage", at);
          const double load = series.load(n, j, k);
          if (options.load_shedding) chk.le(op.demand[dl](n, j, k, c), load, "load_cap", at);
          else chk.eq(op.demand[dl](n, j, k, c), load, "load_served", at);

          const double soc = op.soc(n, j, k, c);
          const double expected = prev + h.dt * (storage.eta_c * op.demand[ds](n, j, k, c) -
                                                 op.supply[s](n, j, k, c) / storage.eta_d);
          chk.eq(soc, expected, "soc_recursion", at);
          chk.le(-soc, 0.0, "soc_nonneg", at);
          chk.le(soc, soc_cap, "soc_cap", at);
          prev = soc;
          day_discharge += op.supply[s](n, j, k, c);

          if (options.market_participation) {
            const double non_grid = op.supply[b](n, j, k, c) + op.supply[s](n, j, k, c);
            const double shortfall = std::max(0.0, op.demand[dl](n, j, k, c) - grid[c][n]);
            chk.le(non_grid, shortfall, "market_participation", at);
          }
        }
        chk.eq(op.soc(n, j, K - 1, c), op.soc_target[n], "soc_terminal", {n, j, c});
        if (options.cycle_scope == CycleScope::Daily) {
          chk.le(h.dt / storage.eta_d * day_discharge,
                 storage.cycle_limit / cycle_days * storage.duration * cap[s][n], "cycle_budget_daily",
                 {n, j, c});
        }
        year_discharge += h.day_weights[j] * day_discharge;
      }
      if (options.cycle_scope == CycleScope::Yearly) {
        chk.le(h.dt / storage.eta_d * year_discharge, storage.cycle_limit * storage.duration * cap[s][n],
               "cycle_budget", {n, c});
      }
    }
  }
  return std::move(chk.out);
}

std::vector<std::array<int, 4>> check_complementarity(const OperationPlan& op, double tol) {
  std::vector<std::array<int, 4>> out;
  const auto& ys = op.supply[idx(ResourceKind::Storage)];
  const auto& yd = op.demand[idx(DemandKind::Storage)];
  if (!yd.matches(ys.periods(), ys.days(), ys.hours(), ys.contingencies())) {
    throw std::invalid_argument("check_complementarity: charge and discharge shapes differ");
  }
  for (int n = 0; n < ys.periods(); ++n)
    for (int j = 0; j < ys.days(); ++j)
      for (int k = 0; k < ys.hours(); ++k)
        for (int c = 0; c < ys.contingencies(); ++c)
          if (ys(n, j, k, c) > tol && yd(n, j, k, c) > tol) out.push_back({n, j, k, c});
  return out;
}

double discharge_cycles(const OperationPlan& op, const StorageSpec& storage, double capacity_mw,
                        const Horizon& h, int n, int c) {
  const auto& ys = op.supply[idx(ResourceKind::Storage)];
  double energy = 0.0;
  for (int j = 0; j < h.n_operating; ++j) {
    double day = 0.0;
    for (int k = 0; k < h.n_subperiods; ++k) day += ys(n, j, k, c);
    energy += h.day_weights[j] * day;
  }
  energy *= h.dt / storage.eta_d;
  if (capacity_mw <= 0.0) {
    if (energy > kFeasibilityTol) {
      throw std::invalid_argument("discharge_cycles: storage discharges without installed capacity");
    }
    return 0.0;
  }
  return energy / (storage.duration * capacity_mw);
}

std::optional<double> scarcity_supply_ratio(const OperationPlan& op, const std::vector<EventHour>& events,
                                            const InvestmentPlan& plan, ResourceKind r, int c) {
  std::optional<double> worst;
  for (const auto& e : events) {
    const double cap = plan.x_tot[idx(r)][e.n];
    if (cap <= 0.0) continue;
    const double ratio = std::max(0.0, op.supply[idx(r)](e.n, e.j, e.k, c)) / cap;
    if (!worst || ratio < *worst) worst = ratio;
  }
  return worst;
}

}  // namespace storeplan
