#include "storeplan/app/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "storeplan/core/economics.hpp"
#include "storeplan/core/validation.hpp"
#include "storeplan/formulation/model.hpp"
#include "storeplan/peakshave/flatten.hpp"

namespace storeplan::app {

namespace {

constexpr int B = 0, S = 2;

std::optional<double> flat_value(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  for (double x : v)
    if (x != v.front()) return std::nullopt;
  return v.front();
}

bool nonnegative_prices(const Instance& in) {
  for (int r = 0; r < kNumResources; ++r) {
    for (double p : in.series.supply_price[r].data())
      if (p < 0) return false;
    for (double p : in.series.demand_price[r].data())
      if (p < 0) return false;
  }
  return true;
}

std::string infeasibility_hint(const MilpModel& m) {
  const Instance& in = m.instance;
  double peak = 0;
  for (double v : in.series.load.data()) peak = std::max(peak, v);
  return fmt::format(
      "model is infeasible ({} columns, {} rows, peak load {:.3f} MW); the investment ranges cannot serve the load "
      "in every contingency. Set experiment.load_shedding = true to see which hours go unserved",
      m.problem.num_cols(), m.problem.num_rows(), peak);
}

}  // namespace

void register_default_backends() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto& reg = solver::BackendRegistry::instance();
    reg.add(std::make_shared<solver::CommandBackend>(
        "highs", fmt::format("python3 {}/external_backend.py", STOREPLAN_TOOLS_DIR)));
    if (const char* cmd = std::getenv("STOREPLAN_BACKEND_COMMAND"); cmd && *cmd) {
      reg.add(std::make_shared<solver::CommandBackend>("external", cmd));
    }
  });
}

std::string resolve_backend(const std::string& explicit_choice, const io::PlanningConfig& config) {
  if (!explicit_choice.empty()) return explicit_choice;
  if (const char* env = std::getenv("STOREPLAN_BACKEND"); env && *env) return env;
  return config.backend;
}

io::ExperimentResult run_experiment(const ExperimentConfig& experiment, const io::BuiltInstance& data,
                                    const std::string& backend) {
  io::ExperimentResult r;
  r.name = experiment.name;
  r.market_mode = experiment.market_mode;
  r.investable = experiment.investable;
  r.cycle_scope = experiment.cycle_scope;
  r.duration_weights = data.instance.horizon.duration_weights;
  r.mip_gap_limit = experiment.solver.mip_gap;
  r.status = "error";
  try {
    const MilpModel m = build_model(data.instance, experiment);
    const Instance& in = m.instance;
    r.storage_cost_per_kwh = experiment.storage_cost_per_kwh;
    if (!r.storage_cost_per_kwh && in.specs[S]) {
      if (const auto c = flat_value(in.specs[S]->unit_cost)) r.storage_cost_per_kwh = *c / in.storage.duration;
    }
    r.capacity_price_per_kw_month = experiment.capacity_price_per_kw_month;
    if (!r.capacity_price_per_kw_month && in.specs[B]) {
      if (const auto c = flat_value(in.specs[B]->capacity_price)) r.capacity_price_per_kw_month = *c / 12.0;
    }

    const auto start = std::chrono::steady_clock::now();
    const auto sol = solver::BackendRegistry::instance().get(backend)->submit(m.problem, experiment.solver);
    r.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.status = std::string(solver::to_string(sol.status));
    r.mip_gap = std::isnan(sol.gap) ? 0.0 : sol.gap;
    if (!sol.has_values()) {
      r.error = sol.status == solver::SolveStatus::Infeasible
                    ? infeasibility_hint(m)
                    : fmt::format("solver returned {} without a solution", solver::to_string(sol.status));
      return r;
    }
    r.objective = sol.objective;
    const auto ex = extract_solution(m, sol.values, false);
    r.costs = ex.costs;
    r.plan = ex.plan;
    r.operation = ex.operation;
    for (const auto& v : ex.violations) r.violations.push_back(describe(v));
    // simultaneous charge and discharge can be optimal when a price is negative
    r.complementarity_violations =
        nonnegative_prices(in) ? static_cast<int>(check_complementarity(ex.operation).size()) : -1;
    r.metrics = io::compute_metrics(in, ex.plan, ex.operation);
    r.metrics.flattening_power_bound = storage_upper_bound(data.full_load, in.storage, in.horizon.dt).power;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<ExperimentConfig> case_study_suite(const ExperimentConfig& base) {
  struct Row {
    MarketMode mode;
    std::array<bool, kNumResources> investable;
    std::optional<double> storage_cost;
    CycleScope cycles;
    std::optional<double> capacity_price;
  };
  const std::array<bool, 3> g{false, true, false}, gs{false, true, true}, bgs{true, true, true};
  const auto peak = MarketMode::PeakOnly, full = MarketMode::Full;
  const auto yearly = CycleScope::Yearly, daily = CycleScope::Daily;
  const std::vector<Row> rows{
      {peak, g, std::nullopt, yearly, std::nullopt}, {peak, gs, 604.0, yearly, std::nullopt},
      {full, gs, 604.0, yearly, 0.0},                {full, gs, 604.0, yearly, 3.064},
      {full, gs, 604.0, daily, 0.0},                 {full, bgs, 604.0, yearly, 0.0},
      {full, bgs, 604.0, yearly, 3.064},             {peak, gs, 1.0, yearly, std::nullopt},
      {full, gs, 1.0, yearly, 0.0},
  };
  std::vector<ExperimentConfig> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ExperimentConfig c = base;
    c.name = fmt::format("exp{}", i + 1);
    c.market_mode = rows[i].mode;
    c.investable = rows[i].investable;
    c.storage_cost_per_kwh = rows[i].storage_cost;
    c.cycle_scope = rows[i].cycles;
    c.capacity_price_per_kw_month = rows[i].capacity_price;
    c.validate();
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<io::ExperimentResult> run_suite(const std::vector<ExperimentConfig>& experiments,
                                            const io::BuiltInstance& data, const std::string& backend, int jobs,
                                            const std::function<void(const io::ExperimentResult&)>& on_done) {
  for (std::size_t i = 0; i < experiments.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (experiments[i].name == experiments[k].name) {
        throw std::invalid_argument(fmt::format("duplicate experiment name '{}'", experiments[i].name));
      }
  std::vector<io::ExperimentResult> results(experiments.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  const auto worker = [&] {
    for (std::size_t i = next++; i < experiments.size(); i = next++) {
      results[i] = run_experiment(experiments[i], data, backend);
      if (on_done) {
        std::lock_guard lock(report);
        on_done(results[i]);
      }
    }
  };
  const int threads = std::clamp(jobs, 1, std::max(1, static_cast<int>(experiments.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

ExperimentConfig experiment_from_result(const io::ExperimentResult& r, const ExperimentConfig& base) {
  ExperimentConfig c = base;
  c.name = r.name;
  c.market_mode = r.market_mode;
  c.investable = r.investable;
  c.storage_cost_per_kwh = r.storage_cost_per_kwh;
  c.cycle_scope = r.cycle_scope;
  c.capacity_price_per_kw_month = r.capacity_price_per_kw_month;
  return c;
}

bool RecheckReport::ok(double cost_tol) const {
  return violations.empty() && complementarity_violations <= 0 && cost_mismatch <= cost_tol;
}

RecheckReport recheck_result(const io::ExperimentResult& r, const io::BuiltInstance& data, const ExperimentConfig& base) {
  if (r.error) throw std::invalid_argument(fmt::format("experiment {} has no solution: {}", r.name, *r.error));
  const MilpModel m = build_model(data.instance, experiment_from_result(r, base));
  const Instance& in = m.instance;
  const Horizon& h = in.horizon;
  const Tensor4& t = r.operation.supply[0];
  if (t.periods() != h.n_periods || t.days() != h.n_operating || t.hours() != h.n_subperiods ||
      t.contingencies() != h.n_contingencies()) {
    throw std::invalid_argument(fmt::format("experiment {}: saved operation does not match the configured horizon", r.name));
  }
  RecheckReport out;
  for (const auto& v : validate_operation(r.operation, r.plan, in.specs, in.storage, h, in.series, m.semantics)) {
    out.violations.push_back(describe(v));
  }
  out.complementarity_violations =
      nonnegative_prices(in) ? static_cast<int>(check_complementarity(r.operation).size()) : -1;
  const auto plan = make_plan(r.plan.x, in.specs, h);
  const double total = cost_breakdown(plan, r.operation, in.specs, in.series, h).total;
  out.cost_mismatch = std::abs(total - r.costs.total) / (1.0 + std::abs(r.costs.total));
  return out;
}

bool succeeded(const io::ExperimentResult& r) {
  const bool solved = r.status == "optimal" || (r.status == "gap_feasible" && r.mip_gap <= r.mip_gap_limit);
  return !r.error && solved && r.violations.empty() &&
         r.complementarity_violations <= 0;
}

}  // namespace storeplan::app
