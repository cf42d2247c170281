#include <doctest.h>

#include "storeplan/io/config.hpp"
#include "storeplan/io/dataset.hpp"

using namespace storeplan;
using namespace storeplan::io;

TEST_CASE("empty config gives the case-study defaults") {
  const auto c = parse_config("");
  CHECK(c.storage.eta_c == 0.913);
  CHECK(c.storage.eta_d == 0.913);
  CHECK(c.storage.duration == 8.0);
  CHECK(c.storage.cycle_limit == 150.0);
  CHECK(c.hours_without_contingency == 0.8);
  CHECK(c.hours_with_contingency == 0.2);
  CHECK(c.experiment.solver.mip_gap == 1e-5);
  CHECK(c.experiment.solver.time_limit == 14400.0);
  CHECK(c.resources[0].min_invest == 2.0);
  CHECK(c.resources[0].max_invest == 30.0);
  CHECK(c.resources[1].min_invest == 40.0);
  CHECK(c.resources[1].max_invest == 40.0);
  CHECK(c.resources[2].min_invest == 2.0);
  CHECK(c.resources[2].max_invest == 24.0);
  CHECK(c.resources[0].lifetime == 20);
  CHECK(c.resources[1].lifetime == 40);
  CHECK(c.resources[2].lifetime == 20);
  CHECK(c.resources[1].preinstalled == std::vector<PreinstalledEntry>{{36, 1996}, {38, 2006}});
  CHECK(c.resources[0].supply_price == 305.0);
  CHECK(c.experiment.load_shed_value == 9337.0);
  CHECK(c.periods == 3);
  CHECK(c.representative_days == 10);
}

TEST_CASE("keys are parsed per section") {
  const auto c = parse_config(R"(
# comment
[experiment]
name = exp8
market_participation = peak
investable = g+s
storage_cost_per_kwh = 1
cycle_limit = daily
; another comment
[storage]
preinstalled_mw = none
duration_h = 4
[solver]
mip_gap = 1e-4
)");
  CHECK(c.experiment.name == "exp8");
  CHECK(c.experiment.market_mode == MarketMode::PeakOnly);
  CHECK(c.experiment.investable == std::array<bool, 3>{false, true, true});
  CHECK(c.experiment.storage_cost_per_kwh == 1.0);
  CHECK(c.experiment.cycle_scope == CycleScope::Daily);
  CHECK(c.resources[2].preinstalled.empty());
  CHECK(c.storage.duration == 4.0);
  CHECK(c.experiment.solver.mip_gap == 1e-4);
}

TEST_CASE("strict mode rejects unknown keys and sections") {
  CHECK_THROWS_AS(parse_config("[experiment]\nnmae = x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experimnt]\nname = x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("name = x\n"), ConfigError);
}

TEST_CASE("range and type violations are rejected") {
  CHECK_THROWS_AS(parse_config("[grid]\nmin_invest_mw = 50\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[storage]\nefficiency_charge = 1.2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[horizon]\nperiods = two\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[horizon]\nrepresentative_days = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nload_shedding = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nmarket_participation = partial\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\ninvestable = g+x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[backup]\npreinstalled_mw = 13\n"), ConfigError);
}

TEST_CASE("relative paths resolve against the config directory") {
  const auto c = parse_config("[load]\ncsv = data/x.csv\n[prices]\ngrid_csv = /abs/p.csv\n", "/cfg");
  CHECK(c.load_csv == std::filesystem::path("/cfg/data/x.csv"));
  CHECK(c.grid_price_csv == std::filesystem::path("/abs/p.csv"));
}

TEST_CASE("overrides and formatting round trip") {
  auto c = parse_config("");
  apply_override(c, "experiment.capacity_price_per_kw_month=3.064");
  apply_override(c, "storage.cycles_per_year = 100");
  CHECK(c.experiment.capacity_price_per_kw_month == 3.064);
  CHECK(c.storage.cycle_limit == 100.0);
  CHECK_THROWS_AS(apply_override(c, "storage.cycles"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "grid.min_invest_mw=41"), ConfigError);

  const auto again = parse_config(format_config(c));
  CHECK(format_config(again) == format_config(c));
  CHECK(again.experiment.capacity_price_per_kw_month == 3.064);
  CHECK(again.resources[1].preinstalled == c.resources[1].preinstalled);
  CHECK(config_keys().size() > 30);
}

TEST_CASE("investable lists") {
  CHECK(investable_to_string({true, true, true}) == "b+g+s");
  CHECK(investable_to_string({false, true, false}) == "g");
  CHECK(investable_from_string("b+g+s") == std::array<bool, 3>{true, true, true});
  CHECK(investable_from_string("none") == std::array<bool, 3>{false, false, false});
  CHECK_THROWS(investable_from_string("g+g"));
  CHECK_THROWS(investable_from_string(""));
}

TEST_CASE("desk configuration builds an instance") {
  const auto c = load_config(std::string(STOREPLAN_CONFIG_DIR) + "/desk.ini");
  const auto data = load_dataset(c);
  const auto built = build_instance(c, data);
  const auto& in = built.instance;
  CHECK(in.horizon.n_periods == 3);
  CHECK(in.horizon.n_operating == 10);
  CHECK(in.horizon.n_subperiods == 24);
  CHECK(in.horizon.total_day_weight() == 365.0);
  double peak = 0;
  for (int j = 0; j < 10; ++j)
    for (int k = 0; k < 24; ++k) peak = std::max(peak, in.series.load(0, j, k));
  CHECK(peak == doctest::Approx(data.peaks.at(2025)));
  // cables of 1996 and 2006 with 40-year lives are live through the horizon
  const auto& grid = *in.specs[1];
  REQUIRE(grid.preinstalled.size() == 2);
  CHECK(grid.preinstalled[0].first_period == -29);
  CHECK(grid.preinstalled[0].last_period == 10);
  // capacity credits come from the yearly series, x12 per year
  CHECK(in.specs[0]->capacity_price[0] == doctest::Approx(2.64 * 12));
  CHECK(in.specs[1]->capacity_price[0] == 0.0);
  CHECK_FALSE(in.series.scarcity_events.empty());
  for (const auto& e : in.series.scarcity_events) CHECK((e.k >= 15 && e.k < 20));
}

TEST_CASE("inline comments after whitespace are ignored") {
  const auto c = parse_config("[experiment]\nmarket_participation = peak   # or full\ninvestable = b+g ; two\n"
                              "[load]\ncsv = a#b.csv\n");
  CHECK(c.experiment.market_mode == MarketMode::PeakOnly);
  CHECK(c.experiment.investable == std::array<bool, 3>{true, true, false});
  CHECK(c.load_csv == "a#b.csv");
}
