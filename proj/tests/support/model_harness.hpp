#pragma once

#include <random>

#include "storeplan/core/economics.hpp"
#include "storeplan/formulation/model.hpp"
#include "storeplan/solver/branch_and_bound.hpp"
#include "storeplan/solver/simplex.hpp"
#include "instances.hpp"

namespace storeplan::testing {

struct TinyShape {
  int N = 1, J = 1, K = 3, C = 1;
  bool thresholds = true;  ///< nonzero minimum investments
  bool credits = false;    ///< nonzero capacity prices
  bool backstop = false;   ///< preinstalled backup covering the peak, so every dispatch is feasible
};

/// Random instance with all three resources, small enough for enumeration.
inline Instance random_tiny_instance(std::mt19937& rng, const TinyShape& shape) {
  std::uniform_real_distribution<double> u(0, 1);
  Instance in;
  in.horizon = small_horizon(shape.N, shape.J, shape.K, shape.C);
  in.storage.duration = 2.0 + 2.0 * u(rng);
  in.storage.cycle_limit = 0.5 + 2.0 * u(rng);
  in.storage.eta_c = 0.85 + 0.15 * u(rng);
  in.storage.eta_d = 0.85 + 0.15 * u(rng);
  in.series = random_series(rng, in.horizon, 30.0);
  const int N = shape.N;
  const double lo = shape.thresholds ? 1.0 : 0.0;
  auto credit = [&] { return shape.credits ? 5.0 * u(rng) : 0.0; };
  in.specs[0] = flat_spec(ResourceKind::Backup, N, 20 + 40 * u(rng), lo, 10, 5, 0, credit());
  in.specs[1] = flat_spec(ResourceKind::Grid, N, 10 + 30 * u(rng), shape.thresholds ? 5.0 : 0.0, 15, 5);
  in.specs[2] = flat_spec(ResourceKind::Storage, N, 10 + 60 * u(rng), lo, 10, 5, 0, credit());
  if (shape.thresholds) in.specs[2]->fixed_cost.assign(N, 2000 * u(rng));
  in.specs[1]->preinstalled = {{5 + 15 * u(rng), -3, N + 3}, {5 + 15 * u(rng), -3, N + 3}};
  if (u(rng) < 0.5) in.specs[0]->preinstalled = {{3 * u(rng), -2, N + 3}};
  if (shape.backstop) in.specs[0]->preinstalled = {{31.0, -2, N + 3}};
  if (u(rng) < 0.5) in.specs[2]->preinstalled = {{3 * u(rng), -2, N + 3}};
  in.validate();
  return in;
}

inline ExperimentConfig full_config() {
  ExperimentConfig c;
  c.name = "toy";
  c.investable = {true, true, true};
  return c;
}

inline solver::Solution solve_model(const MilpModel& m) {
  solver::SolverOptions o;
  o.mip_gap = 1e-9;
  bool fixed_binaries = true;
  for (int j = 0; j < m.problem.num_cols(); ++j) {
    if (m.problem.col_type[j] == solver::VarType::Binary && m.problem.col_lower[j] != m.problem.col_upper[j]) {
      fixed_binaries = false;
    }
  }
  return fixed_binaries ? solver::solve_lp(m.problem, o) : solver::solve_milp(m.problem, o);
}

/// Random admissible investments.
inline std::array<std::vector<double>, kNumResources> random_investments(std::mt19937& rng, const Instance& in) {
  std::uniform_real_distribution<double> u(0, 1);
  std::array<std::vector<double>, kNumResources> x;
  for (int r = 0; r < kNumResources; ++r) {
    x[r].assign(in.horizon.n_periods, 0.0);
    for (auto& v : x[r]) {
      if (u(rng) < 0.6) v = in.specs[r]->min_invest + u(rng) * (in.specs[r]->max_invest - in.specs[r]->min_invest);
    }
  }
  return x;
}

enum class MarketRule { None, FixedGrid, Binary };

/// Optimal operating cost for fixed investments: the objective minus the investment terms.
/// nullopt if the dispatch problem is infeasible.
inline std::optional<double> dispatch_cost(const Instance& in, const std::array<std::vector<double>, kNumResources>& x,
                                           MarketRule rule) {
  auto config = full_config();
  MilpModel m = build_full_model(in, config);
  add_no_load_shedding(m);
  if (rule == MarketRule::Binary) add_market_participation(m, compute_bigM(m.instance));
  const auto plan = make_plan(x, m.instance.specs, m.instance.horizon);
  fix_investments(m, plan);
  if (rule == MarketRule::FixedGrid) add_market_participation_fixed_grid(m);
  const auto sol = solve_model(m);
  if (sol.status == solver::SolveStatus::Infeasible) return std::nullopt;
  if (!sol.has_values()) throw std::runtime_error("dispatch solve failed");
  return sol.objective - *net_investment_cost(plan, m.instance.specs, m.instance.horizon);
}

/// Largest non-grid supply in one cell under the linear market rule for fixed investments.
inline std::optional<double> max_nongrid_supply(const Instance& in, const std::array<std::vector<double>, kNumResources>& x,
                                                int n, int j, int k, int c) {
  MilpModel m = build_full_model(in, full_config());
  add_no_load_shedding(m);
  fix_investments(m, make_plan(x, m.instance.specs, m.instance.horizon));
  add_market_participation_fixed_grid(m);
  std::fill(m.problem.objective.begin(), m.problem.objective.end(), 0.0);
  m.problem.objective[m.id({VarRole::Supply, {0, n, j, k, c}})] = -1.0;
  m.problem.objective[m.id({VarRole::Supply, {2, n, j, k, c}})] = -1.0;
  const auto sol = solver::solve_lp(m.problem);
  if (sol.status == solver::SolveStatus::Infeasible) return std::nullopt;
  if (!sol.has_values()) throw std::runtime_error("probe solve failed");
  return -sol.objective;
}

}  // namespace storeplan::testing
