#include "storeplan/app/plot_data.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace storeplan::app {

namespace {

const io::ExperimentResult& find(const std::vector<io::ExperimentResult>& results, const std::string& name) {
  for (const auto& r : results)
    if (r.name == name) {
      if (r.error) throw std::invalid_argument(fmt::format("experiment {} failed: {}", name, *r.error));
      return r;
    }
  throw std::invalid_argument(fmt::format("savings decomposition needs experiment {}", name));
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", p.string()));
}

}  // namespace

SavingsDecomposition savings_decomposition(const std::vector<io::ExperimentResult>& results) {
  const double t1 = find(results, "exp1").costs.total, t2 = find(results, "exp2").costs.total;
  const double t3 = find(results, "exp3").costs.total, t4 = find(results, "exp4").costs.total;
  return {t1, t1 - t2, t2 - t3, t3 - t4};
}

std::string savings_csv(const SavingsDecomposition& s) {
  const auto pct = [&](double v) { return s.baseline != 0 ? 100.0 * v / s.baseline : 0.0; };
  std::string out = "component,savings_musd,savings_percent\n";
  const std::pair<const char*, double> rows[] = {{"deferred_investment", s.deferred_investment},
                                                 {"arbitrage", s.arbitrage},
                                                 {"capacity_market", s.capacity_market},
                                                 {"total", s.total()}};
  for (const auto& [name, v] : rows) out += fmt::format("{},{:.3f},{:.3f}\n", name, v / 1e6, pct(v));
  return out;
}

std::string savings_table_csv(const std::vector<io::ExperimentResult>& results) {
  std::string out = "experiment,total_cost_musd,savings_musd,savings_percent\n";
  if (results.empty()) return out;
  const auto& first = results.front();
  for (const auto& r : results) {
    if (r.error || first.error) {
      out += fmt::format("{},na,na,na\n", r.name);
      continue;
    }
    const double s = first.costs.total - r.costs.total;
    const double pct = first.costs.total != 0 ? 100.0 * s / first.costs.total : 0.0;
    out += fmt::format("{},{:.3f},{:.3f},{:.3f}\n", r.name, r.costs.total / 1e6, s / 1e6, pct);
  }
  return out;
}

std::string supply_heatmap_csv(const io::ExperimentResult& r, int n) {
  const Tensor4& any = r.operation.supply[0];
  if (n < 0 || n >= any.periods()) {
    throw std::out_of_range(fmt::format("period {} outside the horizon of {} periods", n, any.periods()));
  }
  const char* names[] = {"backup", "grid", "storage"};
  std::string out = "resource,contingency,day,hour,value\n";
  for (int res = 0; res < kNumResources; ++res)
    for (int c = 0; c < any.contingencies(); ++c) {
      const double cap = res == idx(ResourceKind::Grid) ? r.plan.x_tot_grid[c][n] : r.plan.x_tot[res][n];
      for (int j = 0; j < any.days(); ++j)
        for (int k = 0; k < any.hours(); ++k) {
          // supply may exceed capacity by the solver's feasibility tolerance
          const double v = cap > 0 ? std::clamp(r.operation.supply[res](n, j, k, c) / cap, 0.0, 1.0) : 0.0;
          out += fmt::format("{},{},{},{},{:.6f}\n", names[res], c, j, k, v);
        }
    }
  return out;
}

void emit_plot_data(const std::vector<io::ExperimentResult>& results, int n, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto has = [&](const char* name) {
    return std::any_of(results.begin(), results.end(), [&](const auto& r) { return r.name == name && !r.error; });
  };
  if (has("exp1") && has("exp2") && has("exp3") && has("exp4")) {
    write_file(dir / "savings.csv", savings_csv(savings_decomposition(results)));
  }
  write_file(dir / "savings_vs_first.csv", savings_table_csv(results));
  for (const auto& r : results) {
    if (r.error) continue;
    write_file(dir / fmt::format("heatmap_{}.csv", r.name), supply_heatmap_csv(r, n));
  }
}

}  // namespace storeplan::app
