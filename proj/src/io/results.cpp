#include "storeplan/io/results.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "storeplan/core/validation.hpp"
#include "storeplan/io/config.hpp"

namespace storeplan::io {

using nlohmann::json;

namespace {

constexpr int B = 0, G = 1, S = 2;

std::string fixed3(double v) {
  // avoid printing -0.000
  if (std::abs(v) < 5e-4) v = 0.0;
  return fmt::format("{:.3f}", v);
}

std::string opt3(const std::optional<double>& v) { return v ? fixed3(*v) : "na"; }

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

json opt_vector_json(const std::vector<std::optional<double>>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(opt_json(x));
  return out;
}

std::vector<std::optional<double>> opt_vector_from(const json& j) {
  std::vector<std::optional<double>> out;
  for (const auto& x : j) out.push_back(opt_from<double>(x));
  return out;
}

json energy_json(const EnergyTotals& e) {
  return {{"demand_grid", e.demand_grid},       {"demand_load", e.demand_load},
          {"demand_storage", e.demand_storage}, {"supply_backup", e.supply_backup},
          {"supply_grid", e.supply_grid},       {"supply_storage", e.supply_storage}};
}

EnergyTotals energy_from(const json& j) {
  return {j.at("demand_grid").get<double>(),   j.at("demand_load").get<double>(),
          j.at("demand_storage").get<double>(), j.at("supply_backup").get<double>(),
          j.at("supply_grid").get<double>(),   j.at("supply_storage").get<double>()};
}

json tensor_group(const std::array<Tensor4, kNumResources>& t, const char* const (&names)[kNumResources]) {
  json out;
  for (int r = 0; r < kNumResources; ++r) out[names[r]] = t[r].data();
  return out;
}

constexpr const char* kSupplyNames[] = {"backup", "grid", "storage"};
constexpr const char* kDemandNames[] = {"grid", "load", "storage"};

void read_tensor(const json& j, const std::array<int, 4>& dims, Tensor4& out) {
  out = Tensor4(dims[0], dims[1], dims[2], dims[3]);
  auto values = j.get<std::vector<double>>();
  if (values.size() != out.data().size()) throw std::runtime_error("operation: tensor size does not match dims");
  out.data() = std::move(values);
}

json operation_json(const OperationPlan& op) {
  const Tensor4& t = op.supply[0];
  return {{"dims", {t.periods(), t.days(), t.hours(), t.contingencies()}},
          {"order", "n,j,k,c"},
          {"supply_mw", tensor_group(op.supply, kSupplyNames)},
          {"demand_mw", tensor_group(op.demand, kDemandNames)},
          {"soc_mwh", op.soc.data()},
          {"soc_target_mwh", op.soc_target}};
}

OperationPlan operation_from(const json& j) {
  const auto dims = j.at("dims").get<std::array<int, 4>>();
  OperationPlan op;
  for (int r = 0; r < kNumResources; ++r) {
    read_tensor(j.at("supply_mw").at(kSupplyNames[r]), dims, op.supply[r]);
    read_tensor(j.at("demand_mw").at(kDemandNames[r]), dims, op.demand[r]);
  }
  read_tensor(j.at("soc_mwh"), dims, op.soc);
  op.soc_target = j.at("soc_target_mwh").get<std::vector<double>>();
  return op;
}

json result_json(const ExperimentResult& r, bool timing) {
  json metrics{{"terminal_capacity_mw", r.metrics.terminal_capacity},
               {"total_investment_mw", r.metrics.total_investment},
               {"energy_gwh", json::array()},
               {"cycles_average", opt_vector_json(r.metrics.cycles_average)},
               {"cycles_maximum", opt_vector_json(r.metrics.cycles_maximum)},
               {"scarcity_backup", opt_vector_json(r.metrics.scarcity_backup)},
               {"scarcity_storage", opt_vector_json(r.metrics.scarcity_storage)},
               {"storage_build_mw", r.metrics.storage_build},
               {"flattening_power_bound_mw", opt_json(r.metrics.flattening_power_bound)}};
  for (const auto& e : r.metrics.energy) metrics["energy_gwh"].push_back(energy_json(e));
  return {{"name", r.name},
          {"parameters",
           {{"market_participation", to_string(r.market_mode)},
            {"investable", r.investable},
            {"storage_cost_per_kwh", opt_json(r.storage_cost_per_kwh)},
            {"cycle_limit", to_string(r.cycle_scope)},
            {"capacity_price_per_kw_month", opt_json(r.capacity_price_per_kw_month)}}},
          {"status", r.status},
          {"error", opt_json(r.error)},
          {"solve_time_s", timing ? json(r.solve_time) : json(nullptr)},
          {"mip_gap", r.mip_gap},
          {"mip_gap_limit", r.mip_gap_limit},
          {"objective_usd", r.objective},
          {"duration_weights", r.duration_weights},
          {"costs_usd",
           {{"capital", r.costs.capital},
            {"capacity_revenue", r.costs.capacity_revenue},
            {"operating", r.costs.operating},
            {"total", r.costs.total}}},
          {"plan",
           {{"x", r.plan.x}, {"z", r.plan.z}, {"x_tot", r.plan.x_tot}, {"x_tot_grid", r.plan.x_tot_grid}, {"x_max", r.plan.x_max}}},
          {"operation", operation_json(r.operation)},
          {"metrics", metrics},
          {"validation", {{"violations", r.violations}, {"complementarity", r.complementarity_violations}}}};
}

ExperimentResult result_from(const json& j) {
  ExperimentResult r;
  r.name = j.at("name").get<std::string>();
  const auto& p = j.at("parameters");
  r.market_mode = market_mode_from_string(p.at("market_participation").get<std::string>());
  r.investable = p.at("investable").get<std::array<bool, kNumResources>>();
  r.storage_cost_per_kwh = opt_from<double>(p.at("storage_cost_per_kwh"));
  r.cycle_scope = cycle_scope_from_string(p.at("cycle_limit").get<std::string>());
  r.capacity_price_per_kw_month = opt_from<double>(p.at("capacity_price_per_kw_month"));
  r.status = j.at("status").get<std::string>();
  r.error = opt_from<std::string>(j.at("error"));
  r.solve_time = j.at("solve_time_s").is_null() ? 0.0 : j.at("solve_time_s").get<double>();
  r.mip_gap = j.at("mip_gap").get<double>();
  r.mip_gap_limit = j.at("mip_gap_limit").get<double>();
  r.objective = j.at("objective_usd").get<double>();
  r.duration_weights = j.at("duration_weights").get<std::vector<double>>();
  const auto& c = j.at("costs_usd");
  r.costs.capital = c.at("capital").get<std::array<double, kNumResources>>();
  r.costs.capacity_revenue = c.at("capacity_revenue").get<std::array<double, kNumResources>>();
  r.costs.operating = c.at("operating").get<std::vector<double>>();
  r.costs.total = c.at("total").get<double>();
  const auto& pl = j.at("plan");
  r.plan.x = pl.at("x").get<std::array<std::vector<double>, kNumResources>>();
  r.plan.z = pl.at("z").get<std::array<std::vector<double>, kNumResources>>();
  r.plan.x_tot = pl.at("x_tot").get<std::array<std::vector<double>, kNumResources>>();
  r.plan.x_tot_grid = pl.at("x_tot_grid").get<std::vector<std::vector<double>>>();
  r.plan.x_max = pl.at("x_max").get<std::vector<double>>();
  r.operation = operation_from(j.at("operation"));
  const auto& m = j.at("metrics");
  r.metrics.terminal_capacity = m.at("terminal_capacity_mw").get<std::array<double, kNumResources>>();
  r.metrics.total_investment = m.at("total_investment_mw").get<std::array<double, kNumResources>>();
  for (const auto& e : m.at("energy_gwh")) r.metrics.energy.push_back(energy_from(e));
  r.metrics.cycles_average = opt_vector_from(m.at("cycles_average"));
  r.metrics.cycles_maximum = opt_vector_from(m.at("cycles_maximum"));
  r.metrics.scarcity_backup = opt_vector_from(m.at("scarcity_backup"));
  r.metrics.scarcity_storage = opt_vector_from(m.at("scarcity_storage"));
  r.metrics.storage_build = m.at("storage_build_mw").get<double>();
  r.metrics.flattening_power_bound = opt_from<double>(m.at("flattening_power_bound_mw"));
  const auto& v = j.at("validation");
  r.violations = v.at("violations").get<std::vector<std::string>>();
  r.complementarity_violations = v.at("complementarity").get<int>();
  return r;
}

using Cell = std::function<std::string(const ExperimentResult&)>;

struct Row {
  std::string label;
  Cell cell;  ///< empty for group headers
  bool parameter = false;  ///< shown for failed experiments too
};

std::string contingency_value(const ExperimentResult& r, int c, const std::function<double(const EnergyTotals&)>& f) {
  if (c >= static_cast<int>(r.metrics.energy.size())) return "na";
  return fixed3(f(r.metrics.energy[c]));
}

std::optional<double> at_c(const std::vector<std::optional<double>>& v, int c) {
  return c < static_cast<int>(v.size()) ? v[c] : std::nullopt;
}

void energy_rows(std::vector<Row>& rows, int c) {
  rows.push_back({"Demand (w/o storage)", [c](const ExperimentResult& r) {
                    return contingency_value(r, c, [](const EnergyTotals& e) { return e.demand_grid + e.demand_load; });
                  }});
  rows.push_back({"- grid", [c](const ExperimentResult& r) {
                    return contingency_value(r, c, [](const EnergyTotals& e) { return e.demand_grid; });
                  }});
  rows.push_back({"- load", [c](const ExperimentResult& r) {
                    return contingency_value(r, c, [](const EnergyTotals& e) { return e.demand_load; });
                  }});
  rows.push_back({"- storage", [c](const ExperimentResult& r) {
                    return contingency_value(r, c, [](const EnergyTotals& e) { return e.demand_storage; });
                  }});
  rows.push_back({"Supply (w/o storage)", [c](const ExperimentResult& r) {
                    return contingency_value(r, c, [](const EnergyTotals& e) { return e.supply_backup + e.supply_grid; });
                  }});
  rows.push_back({"- backup", [c](const ExperimentResult& r) {
                    return contingency_value(r, c, [](const EnergyTotals& e) { return e.supply_backup; });
                  }});
  rows.push_back({"- grid", [c](const ExperimentResult& r) {
                    return contingency_value(r, c, [](const EnergyTotals& e) { return e.supply_grid; });
                  }});
  rows.push_back({"- storage", [c](const ExperimentResult& r) {
                    return contingency_value(r, c, [](const EnergyTotals& e) { return e.supply_storage; });
                  }});
}

std::vector<Row> table_rows(bool timing) {
  const auto musd = [](double v) { return fixed3(v / 1e6); };
  const auto peak = [](const ExperimentResult& r) { return r.market_mode == MarketMode::PeakOnly; };
  std::vector<Row> rows;
  rows.push_back({"Parameters", {}});
  rows.push_back({"Market participation",
                  [peak](const ExperimentResult& r) { return std::string(peak(r) ? "Peak" : "Full"); }, true});
  rows.push_back({"Available investments", [](const ExperimentResult& r) { return investable_to_string(r.investable); }, true});
  rows.push_back({"Storage cost ($/kWh)",
                  [](const ExperimentResult& r) { return r.investable[S] ? opt3(r.storage_cost_per_kwh) : "na"; }, true});
  rows.push_back({"Cycle limit", [](const ExperimentResult& r) { return std::string(to_string(r.cycle_scope)); }, true});
  rows.push_back({"Cap. price ($/kW-month)",
                  [peak](const ExperimentResult& r) {
                    if (peak(r)) return std::string("na");
                    return r.capacity_price_per_kw_month ? fixed3(*r.capacity_price_per_kw_month) : "series";
                  },
                  true});
  rows.push_back({"Solution quality", {}});
  rows.push_back({"Total cost (M$)", [musd](const ExperimentResult& r) { return musd(r.costs.total); }});
  rows.push_back({"Solve time (s)",
                  [timing](const ExperimentResult& r) { return timing ? fixed3(r.solve_time) : std::string("na"); }});
  rows.push_back({"Maximum MIP gap (%)", [](const ExperimentResult& r) { return fixed3(100.0 * r.mip_gap); }});

  rows.push_back({"Costs (M$)", {}});
  rows.push_back({"Total operating", [musd](const ExperimentResult& r) { return musd(r.costs.total_operating()); }});
  for (int c = 0; c < 2; ++c) {
    rows.push_back({c == 0 ? "- base case" : "- contingency", [c, musd](const ExperimentResult& r) {
                      if (c >= static_cast<int>(r.costs.operating.size()) || !(r.duration_weights[c] > 0)) return std::string("na");
                      return musd(r.costs.operating[c] / r.duration_weights[c]);
                    }});
  }
  rows.push_back({"Total capital", [musd](const ExperimentResult& r) { return musd(r.costs.total_capital()); }});
  const char* names[] = {"- backup", "- grid", "- storage"};
  for (int i = 0; i < kNumResources; ++i) {
    rows.push_back({names[i], [i, musd](const ExperimentResult& r) {
                      return r.investable[i] ? musd(r.costs.capital[i]) : std::string("na");
                    }});
  }
  rows.push_back({"Total capacity payment", [musd, peak](const ExperimentResult& r) {
                    return peak(r) ? std::string("na") : musd(-r.costs.total_capacity_revenue());
                  }});
  for (int i = 0; i < kNumResources; ++i) {
    rows.push_back({names[i], [i, musd, peak](const ExperimentResult& r) {
                      return peak(r) || i == G ? std::string("na") : musd(-r.costs.capacity_revenue[i]);
                    }});
  }

  rows.push_back({"Investment decisions (MW)", {}});
  rows.push_back({"Terminal capacity", [](const ExperimentResult& r) {
                    const auto& t = r.metrics.terminal_capacity;
                    return fixed3(t[0] + t[1] + t[2]);
                  }});
  for (int i = 0; i < kNumResources; ++i) {
    rows.push_back({names[i], [i](const ExperimentResult& r) { return fixed3(r.metrics.terminal_capacity[i]); }});
  }
  rows.push_back({"Total investment", [](const ExperimentResult& r) {
                    const auto& t = r.metrics.total_investment;
                    return fixed3(t[0] + t[1] + t[2]);
                  }});
  for (int i = 0; i < kNumResources; ++i) {
    rows.push_back({names[i], [i](const ExperimentResult& r) {
                      return r.investable[i] ? fixed3(r.metrics.total_investment[i]) : std::string("na");
                    }});
  }

  rows.push_back({"Operating decisions: Base case (GWh/yr)", {}});
  energy_rows(rows, 0);
  rows.push_back({"Operating decisions: Contingency (GWh/yr)", {}});
  energy_rows(rows, 1);

  rows.push_back({"Yearly discharge cycles (#)", {}});
  rows.push_back({"Average (base case)", [](const ExperimentResult& r) { return opt3(at_c(r.metrics.cycles_average, 0)); }});
  rows.push_back({"Maximum (base case)", [](const ExperimentResult& r) { return opt3(at_c(r.metrics.cycles_maximum, 0)); }});
  rows.push_back({"Average (contingency)", [](const ExperimentResult& r) { return opt3(at_c(r.metrics.cycles_average, 1)); }});
  rows.push_back({"Maximum (contingency)", [](const ExperimentResult& r) { return opt3(at_c(r.metrics.cycles_maximum, 1)); }});

  rows.push_back({"Minimum scarcity supply ratio (-)", {}});
  rows.push_back({"Backup (base case)", [](const ExperimentResult& r) { return opt3(at_c(r.metrics.scarcity_backup, 0)); }});
  rows.push_back({"Storage (base case)", [](const ExperimentResult& r) { return opt3(at_c(r.metrics.scarcity_storage, 0)); }});
  rows.push_back({"Backup (contingency)", [](const ExperimentResult& r) { return opt3(at_c(r.metrics.scarcity_backup, 1)); }});
  rows.push_back({"Storage (contingency)", [](const ExperimentResult& r) { return opt3(at_c(r.metrics.scarcity_storage, 1)); }});
  return rows;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace

ExperimentMetrics compute_metrics(const Instance& in, const InvestmentPlan& plan, const OperationPlan& op) {
  const Horizon& h = in.horizon;
  const int N = h.n_periods, J = h.n_operating, K = h.n_subperiods, C = h.n_contingencies();
  ExperimentMetrics m;
  m.terminal_capacity = {plan.x_tot[B][N - 1], plan.x_tot_grid[0][N - 1], plan.x_tot[S][N - 1]};
  for (int r = 0; r < kNumResources; ++r)
    for (double v : plan.x[r]) m.total_investment[r] += v;
  m.storage_build = *std::max_element(plan.x_tot[S].begin(), plan.x_tot[S].end());
  for (int c = 0; c < C; ++c) {
    EnergyTotals e;
    for (int n = 0; n < N; ++n)
      for (int j = 0; j < J; ++j) {
        const double f = h.day_weights[j] * h.dt / 1000.0 / N;
        for (int k = 0; k < K; ++k) {
          e.demand_grid += f * op.demand[idx(DemandKind::Grid)](n, j, k, c);
          e.demand_load += f * op.demand[idx(DemandKind::Load)](n, j, k, c);
          e.demand_storage += f * op.demand[idx(DemandKind::Storage)](n, j, k, c);
          e.supply_backup += f * op.supply[B](n, j, k, c);
          e.supply_grid += f * op.supply[G](n, j, k, c);
          e.supply_storage += f * op.supply[S](n, j, k, c);
        }
      }
    m.energy.push_back(e);

    std::optional<double> avg, max;
    int live = 0;
    double sum = 0;
    for (int n = 0; n < N; ++n) {
      if (!(plan.x_tot[S][n] > 0)) continue;
      const double cyc = discharge_cycles(op, in.storage, plan.x_tot[S][n], h, n, c);
      sum += cyc;
      ++live;
      max = std::max(max.value_or(cyc), cyc);
    }
    if (live > 0) avg = sum / live;
    m.cycles_average.push_back(avg);
    m.cycles_maximum.push_back(max);

    const auto& events = in.series.scarcity_events;
    m.scarcity_backup.push_back(events.empty() ? std::nullopt
                                               : scarcity_supply_ratio(op, events, plan, ResourceKind::Backup, c));
    m.scarcity_storage.push_back(events.empty() ? std::nullopt
                                                : scarcity_supply_ratio(op, events, plan, ResourceKind::Storage, c));
  }
  return m;
}

const std::vector<std::string>& table_row_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    for (const auto& row : table_rows(true)) out.push_back(row.label);
    return out;
  }();
  return labels;
}

std::string results_table_csv(const std::vector<ExperimentResult>& results, bool timing) {
  std::string out = "Number";
  for (const auto& r : results) out += "," + csv_cell(r.name);
  out += "\n";
  for (const auto& row : table_rows(timing)) {
    out += csv_cell(row.label);
    for (const auto& r : results) {
      std::string v;
      if (row.cell) {
        if (r.error && !row.parameter) {
          v = row.label == "Total cost (M$)" ? "failed" : "na";
        } else {
          v = row.cell(r);
        }
      }
      out += "," + csv_cell(v);
    }
    out += "\n";
  }
  return out;
}

std::string results_json(const std::vector<ExperimentResult>& results, bool timing) {
  json doc{{"experiments", json::array()}};
  for (const auto& r : results) doc["experiments"].push_back(result_json(r, timing));
  return doc.dump(2) + "\n";
}

std::vector<ExperimentResult> parse_results_json(const std::string& text) {
  std::vector<ExperimentResult> out;
  try {
    const json doc = json::parse(text);
    for (const auto& e : doc.at("experiments")) out.push_back(result_from(e));
  } catch (const json::exception& e) {
    throw std::runtime_error(fmt::format("malformed results file: {}", e.what()));
  }
  return out;
}

void write_results(const std::vector<ExperimentResult>& results, const std::filesystem::path& dir, bool timing) {
  std::filesystem::create_directories(dir);
  const auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
    if (!f) throw std::runtime_error(fmt::format("cannot write {}", p.string()));
  };
  write(dir / "results.json", results_json(results, timing));
  write(dir / "results.csv", results_table_csv(results, timing));
}

std::vector<ExperimentResult> read_results(const std::filesystem::path& json_path) {
  std::ifstream in(json_path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", json_path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_results_json(ss.str());
}

}  // namespace storeplan::io
