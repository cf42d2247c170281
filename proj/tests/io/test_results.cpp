#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "storeplan/core/economics.hpp"
#include "storeplan/io/results.hpp"

using namespace storeplan;
using namespace storeplan::io;

namespace {

ExperimentResult zero_result(const std::string& name = "zero") {
  ExperimentResult r;
  r.name = name;
  r.investable = {false, true, true};
  r.storage_cost_per_kwh = 604;
  r.capacity_price_per_kw_month = 0.0;
  r.status = "optimal";
  r.duration_weights = {0.8, 0.2};
  r.costs.operating = {0.0, 0.0};
  Horizon h;
  h.n_periods = 2;
  r.plan = InvestmentPlan::zeros(h);
  r.metrics.energy = {EnergyTotals{}, EnergyTotals{}};
  r.metrics.cycles_average = {std::nullopt, std::nullopt};
  r.metrics.cycles_maximum = {std::nullopt, std::nullopt};
  r.metrics.scarcity_backup = {std::nullopt, std::nullopt};
  r.metrics.scarcity_storage = {std::nullopt, std::nullopt};
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("table rows carry the results-table labels") {
  const std::vector<std::string> expected{
      "Parameters", "Market participation", "Available investments", "Storage cost ($/kWh)", "Cycle limit",
      "Cap. price ($/kW-month)", "Solution quality", "Total cost (M$)", "Solve time (s)", "Maximum MIP gap (%)",
      "Costs (M$)", "Total operating", "- base case", "- contingency", "Total capital", "- backup", "- grid",
      "- storage", "Total capacity payment", "- backup", "- grid", "- storage", "Investment decisions (MW)",
      "Terminal capacity", "- backup", "- grid", "- storage", "Total investment", "- backup", "- grid", "- storage",
      "Operating decisions: Base case (GWh/yr)", "Demand (w/o storage)", "- grid", "- load", "- storage",
      "Supply (w/o storage)", "- backup", "- grid", "- storage", "Operating decisions: Contingency (GWh/yr)",
      "Demand (w/o storage)", "- grid", "- load", "- storage", "Supply (w/o storage)", "- backup", "- grid",
      "- storage", "Yearly discharge cycles (#)", "Average (base case)", "Maximum (base case)",
      "Average (contingency)", "Maximum (contingency)", "Minimum scarcity supply ratio (-)", "Backup (base case)",
      "Storage (base case)", "Backup (contingency)", "Storage (contingency)"};
  CHECK(table_row_labels() == expected);
  const auto csv = lines(results_table_csv({zero_result()}));
  REQUIRE(csv.size() == expected.size() + 1);
  CHECK(csv[0] == "Number,zero");
}

TEST_CASE("zero experiment gives zero rows") {
  const auto csv = lines(results_table_csv({zero_result()}, false));
  CHECK(csv[1] == "Parameters,");
  CHECK(csv[2] == "Market participation,Full");
  CHECK(csv[3] == "Available investments,g+s");
  CHECK(csv[4] == "Storage cost ($/kWh),604.000");
  CHECK(csv[8] == "Total cost (M$),0.000");
  CHECK(csv[9] == "Solve time (s),na");
  CHECK(csv[12] == "Total operating,0.000");
  CHECK(csv[16] == "- backup,na");  // backup not investable
  CHECK(csv[17] == "- grid,0.000");
  CHECK(csv[24] == "Terminal capacity,0.000");
  CHECK(csv[51] == "Average (base case),na");
}

TEST_CASE("costs are reported in millions with three decimals") {
  auto r = zero_result();
  r.costs.capital = {0, 87'999'999.6, 1'234'567.0};
  r.costs.capacity_revenue = {0, 0, 500'000};
  r.costs.operating = {0.8 * 331'465'000.0, 0.2 * 331'064'000.0};
  r.costs.total = r.costs.total_capital() - r.costs.total_capacity_revenue() + r.costs.total_operating();
  const auto csv = lines(results_table_csv({r}));
  CHECK(csv[13] == "- base case,331.465");
  CHECK(csv[14] == "- contingency,331.064");
  CHECK(csv[17] == "- grid,88.000");
  CHECK(csv[18] == "- storage,1.235");
  CHECK(csv[19] == "Total capacity payment,-0.500");
  CHECK(csv[22] == "- storage,-0.500");
}

TEST_CASE("peak mode hides capacity payments and failures are marked") {
  auto peak = zero_result("p");
  peak.market_mode = MarketMode::PeakOnly;
  auto failed = zero_result("f");
  failed.error = "infeasible";
  failed.status = "error";
  const auto csv = lines(results_table_csv({peak, failed}));
  CHECK(csv[0] == "Number,p,f");
  CHECK(csv[2] == "Market participation,Peak,Full");
  CHECK(csv[6] == "Cap. price ($/kW-month),na,0.000");
  CHECK(csv[8] == "Total cost (M$),0.000,failed");
  CHECK(csv[19] == "Total capacity payment,na,na");
}

TEST_CASE("write then read returns identical results") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0, 1e8);
  auto r = zero_result("exp1");
  r.objective = u(rng) / 3.0;
  r.mip_gap = 1.234567e-6;
  r.solve_time = 12.5;
  r.costs.capital = {u(rng) / 7.0, u(rng) / 11.0, 0.1};
  r.costs.capacity_revenue = {1.0 / 3.0, 0, 2.0 / 3.0};
  r.costs.operating = {u(rng) / 13.0, u(rng) / 17.0};
  r.costs.total = u(rng) / 19.0;
  r.plan.x[1] = {40.0, 0.0};
  r.plan.z[1] = {1.0, 0.0};
  r.metrics.energy[1].supply_grid = 1.0 / 3.0;
  r.metrics.cycles_average[0] = 149.99999999999997;
  r.metrics.scarcity_storage[1] = 0.0;
  r.metrics.flattening_power_bound = 12.345678901234567;
  r.violations = {"balance at (0, 1, 2, 0): 1e-3"};
  auto b = zero_result("exp2");
  b.error = "solver failed";

  const auto dir = std::filesystem::temp_directory_path() / "storeplan_results_test";
  std::filesystem::remove_all(dir);
  write_results({r, b}, dir);
  const auto back = read_results(dir / "results.json");
  REQUIRE(back.size() == 2);
  CHECK(back[0].objective == r.objective);
  CHECK(back[0].mip_gap == r.mip_gap);
  CHECK(back[0].solve_time == r.solve_time);
  CHECK(back[0].costs.capital == r.costs.capital);
  CHECK(back[0].costs.capacity_revenue == r.costs.capacity_revenue);
  CHECK(back[0].costs.operating == r.costs.operating);
  CHECK(back[0].costs.total == r.costs.total);
  CHECK(back[0].plan.x == r.plan.x);
  CHECK(back[0].metrics == r.metrics);
  CHECK(back[0].violations == r.violations);
  CHECK(back[1].error == b.error);
  CHECK(results_table_csv(back) == results_table_csv({r, b}));
  std::filesystem::remove_all(dir);
}

TEST_CASE("metrics from a hand-built plan") {
  Horizon h;
  h.n_periods = 2;
  h.n_operating = 1;
  h.n_subperiods = 2;
  h.day_weights = {365.0};
  Instance in;
  in.horizon = h;
  in.storage.eta_d = 1.0;
  in.storage.eta_c = 1.0;
  in.storage.duration = 1.0;
  ResourceSpec s;
  s.kind = ResourceKind::Storage;
  s.unit_cost = {1, 1};
  s.fixed_cost = {0, 0};
  s.capacity_price = {0, 0};
  s.max_invest = 10;
  s.lifetime = 5;
  in.specs[2] = s;
  ResourceSpec g = s;
  g.kind = ResourceKind::Grid;
  in.specs[1] = g;
  in.series.scarcity_events = {{0, 0, 1}, {1, 0, 1}};
  auto plan = make_plan({std::vector<double>{0, 0}, {0, 0}, {2, 0}}, in.specs, h);
  auto op = OperationPlan::zeros(h);
  for (int n = 0; n < 2; ++n) {
    op.supply[2](n, 0, 1, 0) = 2.0;  // one full cycle a day in the base case
    op.supply[2](n, 0, 1, 1) = 1.0;
    op.demand[1](n, 0, 0, 0) = 3.0;
  }
  const auto m = compute_metrics(in, plan, op);
  CHECK(m.terminal_capacity[2] == 2.0);
  CHECK(m.total_investment[2] == 2.0);
  CHECK(m.storage_build == 2.0);
  CHECK(m.energy[0].supply_storage == doctest::Approx(365 * 2.0 / 1000));
  CHECK(m.energy[0].demand_load == doctest::Approx(365 * 3.0 / 1000));
  CHECK(*m.cycles_average[0] == doctest::Approx(365.0));
  CHECK(*m.cycles_maximum[1] == doctest::Approx(182.5));
  CHECK(*m.scarcity_storage[0] == doctest::Approx(1.0));
  CHECK(*m.scarcity_storage[1] == doctest::Approx(0.5));
  CHECK_FALSE(m.scarcity_backup[0].has_value());
}
