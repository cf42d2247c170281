#include "storeplan/formulation/model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "storeplan/core/economics.hpp"
#include "storeplan/peakshave/flatten.hpp"

namespace storeplan {

using solver::kInf;
using solver::Sense;
using solver::VarType;

const char* role_name(VarRole role) {
  switch (role) {
    case VarRole::Invest: return "x";
    case VarRole::Build: return "z";
    case VarRole::Capacity: return "xtot";
    case VarRole::GridCapacity: return "xgrid";
    case VarRole::LargestUnit: return "xmax";
    case VarRole::Supply: return "ys";
    case VarRole::Demand: return "yd";
    case VarRole::Charge: return "soc";
    case VarRole::ChargeTarget: return "soc0";
    case VarRole::Market: return "zm";
    case VarRole::UnitSelect: return "sel";
  }
  return "?";
}

namespace {

constexpr int kBuildPriority = 2;
constexpr int kSelectPriority = 1;
constexpr int kMarketPriority = 0;
constexpr double kIntegralityTol = 1e-6;

constexpr int B = idx(ResourceKind::Backup), G = idx(ResourceKind::Grid), S = idx(ResourceKind::Storage);
constexpr int DG = idx(DemandKind::Grid), DL = idx(DemandKind::Load), DS = idx(DemandKind::Storage);

std::string var_name(const VarKey& key, int arity) {
  std::string name = role_name(key.role);
  for (int i = 0; i < arity; ++i) name += fmt::format("_{}", key.index[i]);
  return name;
}

int arity(VarRole role) {
  switch (role) {
    case VarRole::Invest:
    case VarRole::Build:
    case VarRole::Capacity:
    case VarRole::GridCapacity:
    case VarRole::UnitSelect: return 2;
    case VarRole::LargestUnit:
    case VarRole::ChargeTarget: return 1;
    case VarRole::Supply:
    case VarRole::Demand: return 5;
    case VarRole::Charge:
    case VarRole::Market: return 4;
  }
  return 0;
}

// Row builder that skips zero coefficients.
struct Row {
  std::vector<int> cols;
  std::vector<double> vals;
  Row& add(int col, double v) {
    if (v != 0.0) {
      cols.push_back(col);
      vals.push_back(v);
    }
    return *this;
  }
};

void add_row(solver::Problem& p, const Row& r, Sense sense, double rhs, std::string name) {
  p.add_row(r.cols, r.vals, sense, rhs, std::move(name));
}

double preinstalled_live(const ResourceSpec& spec, int n) {
  double total = 0.0;
  for (const auto& u : spec.preinstalled)
    if (u.live(n)) total += u.capacity;
  return total;
}

double largest_preinstalled(const ResourceSpec& spec, int n) {
  double largest = 0.0;
  for (const auto& u : spec.preinstalled)
    if (u.live(n)) largest = std::max(largest, u.capacity);
  return largest;
}

bool non_grid(int r) { return r != G; }

}  // namespace

int MilpModel::add_var(VarKey key, double cost, double lo, double hi, VarType type, int priority) {
  if (registry_.count(key)) throw ModelError(fmt::format("duplicate variable {}", var_name(key, arity(key.role))));
  const int col = problem.add_column(cost, lo, hi, type, var_name(key, arity(key.role)));
  problem.branch_priority.resize(problem.num_cols(), 0);
  problem.branch_priority[col] = priority;
  registry_.emplace(key, col);
  return col;
}

int MilpModel::id(VarKey key) const {
  const auto it = registry_.find(key);
  if (it == registry_.end()) throw ModelError(fmt::format("missing variable {}", var_name(key, arity(key.role))));
  return it->second;
}

std::optional<int> MilpModel::find(VarKey key) const {
  const auto it = registry_.find(key);
  if (it == registry_.end()) return std::nullopt;
  return it->second;
}

void MilpModel::fix(int col, double value) {
  problem.col_lower[col] = value;
  problem.col_upper[col] = value;
}

MilpModel build_full_model(const Instance& raw, const ExperimentConfig& config) {
  MilpModel m;
  m.instance = apply_config(raw, config);
  const Instance& in = m.instance;
  const Horizon& h = in.horizon;
  const StorageSpec& st = in.storage;
  const int N = h.n_periods, J = h.n_operating, K = h.n_subperiods, C = h.n_contingencies();
  m.semantics.load_shedding = true;
  m.semantics.market_participation = false;
  m.semantics.cycle_scope = config.cycle_scope;
  auto& p = m.problem;
  p.name = config.name.empty() ? "STOREPLAN" : config.name;

  // investment block
  for (int r = 0; r < kNumResources; ++r) {
    for (int n = 0; n < N; ++n) {
      const auto& spec = in.specs[r];
      const double hi = spec ? spec->max_invest : 0.0;
      const double unit = spec ? spec->unit_cost[n] * kKwPerMw : 0.0;
      const double fixed = spec ? spec->fixed_cost[n] : 0.0;
      const int x = m.add_var({VarRole::Invest, {r, n}}, unit, 0.0, hi, VarType::Continuous);
      const int z = m.add_var({VarRole::Build, {r, n}}, fixed, 0.0, hi > 0.0 ? 1.0 : 0.0, VarType::Binary,
                              kBuildPriority);
      if (!spec) continue;
      add_row(p, Row{}.add(x, 1.0).add(z, -spec->min_invest), Sense::GreaterEqual, 0.0,
              fmt::format("invlo_{}_{}", r, n));
      add_row(p, Row{}.add(x, 1.0).add(z, -spec->max_invest), Sense::LessEqual, 0.0,
              fmt::format("invhi_{}_{}", r, n));
    }
  }
  for (int r = 0; r < kNumResources; ++r) {
    if (!non_grid(r)) continue;
    for (int n = 0; n < N; ++n) {
      const auto& spec = in.specs[r];
      const double credit = spec ? spec->capacity_price[n] * kKwPerMw : 0.0;
      const int xt = m.add_var({VarRole::Capacity, {r, n}}, -credit, 0.0, kInf, VarType::Continuous);
      Row row;
      row.add(xt, 1.0);
      double pre = 0.0;
      if (spec) {
        for (int i = lifetime_window_start(n, spec->lifetime); i <= n; ++i) row.add(m.id({VarRole::Invest, {r, i}}), -1.0);
        pre = preinstalled_live(*spec, n);
      }
      add_row(p, row, Sense::Equal, pre, fmt::format("cap_{}_{}", r, n));
    }
  }
  const auto& grid = *in.specs[G];
  for (int n = 0; n < N; ++n) {
    const double pre_max = largest_preinstalled(grid, n);
    const double hi = std::max(grid.max_invest, pre_max);
    const int xmax = m.add_var({VarRole::LargestUnit, {n}}, 0.0, pre_max, hi, VarType::Continuous);
    for (int i = lifetime_window_start(n, grid.lifetime); i <= n; ++i) {
      add_row(p, Row{}.add(xmax, 1.0).add(m.id({VarRole::Invest, {G, i}}), -1.0), Sense::GreaterEqual, 0.0,
              fmt::format("epi_{}_{}", n, i));
    }
    for (int c = 0; c < C; ++c) {
      const int xt = m.add_var({VarRole::GridCapacity, {n, c}}, 0.0, 0.0, kInf, VarType::Continuous);
      Row row;
      row.add(xt, 1.0);
      for (int i = lifetime_window_start(n, grid.lifetime); i <= n; ++i) row.add(m.id({VarRole::Invest, {G, i}}), -1.0);
      row.add(xmax, static_cast<double>(c));
      add_row(p, row, Sense::Equal, preinstalled_live(grid, n), fmt::format("gcap_{}_{}", n, c));
    }
  }

  // operations block
  for (int n = 0; n < N; ++n) {
    const int soc0 = m.add_var({VarRole::ChargeTarget, {n}}, 0.0, 0.0, kInf, VarType::Continuous);
    const int xts = m.id({VarRole::Capacity, {S, n}});
    add_row(p, Row{}.add(soc0, 1.0).add(xts, -st.duration), Sense::LessEqual, 0.0, fmt::format("soc0cap_{}", n));
    for (int c = 0; c < C; ++c) {
      const double Tc = h.duration_weights[c];
      const int xtg = m.id({VarRole::GridCapacity, {n, c}});
      Row cycle_year;
      for (int j = 0; j < J; ++j) {
        const double w = h.day_weights[j];
        Row cycle_day;
        int prev = soc0;
        for (int k = 0; k < K; ++k) {
          std::array<int, kNumResources> ys{}, yd{};
          for (int r = 0; r < kNumResources; ++r) {
            const double price = in.series.supply_price[r](n, j, k);
            ys[r] = m.add_var({VarRole::Supply, {r, n, j, k, c}}, Tc * w * price, 0.0, kInf, VarType::Continuous);
          }
          for (int d = 0; d < kNumResources; ++d) {
            const double price = in.series.demand_price[d](n, j, k);
            const double hi = d == DL ? in.series.load(n, j, k) : kInf;
            yd[d] = m.add_var({VarRole::Demand, {d, n, j, k, c}}, -Tc * w * price, 0.0, hi, VarType::Continuous);
          }
          const int soc = m.add_var({VarRole::Charge, {n, j, k, c}}, 0.0, 0.0, kInf, VarType::Continuous);
          const auto tag = fmt::format("{}_{}_{}_{}", n, j, k, c);

          Row bal;
          for (int r = 0; r < kNumResources; ++r) bal.add(ys[r], 1.0);
          for (int d = 0; d < kNumResources; ++d) bal.add(yd[d], -1.0);
          add_row(p, bal, Sense::Equal, 0.0, "bal_" + tag);
          add_row(p, Row{}.add(ys[B], 1.0).add(m.id({VarRole::Capacity, {B, n}}), -1.0), Sense::LessEqual, 0.0,
                  "supb_" + tag);
          add_row(p, Row{}.add(ys[S], 1.0).add(xts, -1.0), Sense::LessEqual, 0.0, "sups_" + tag);
          add_row(p, Row{}.add(yd[DG], 1.0).add(xtg, -1.0), Sense::LessEqual, 0.0, "demg_" + tag);
          add_row(p, Row{}.add(ys[G], 1.0).add(xtg, -1.0), Sense::LessEqual, 0.0, "supg_" + tag);
          add_row(p, Row{}.add(yd[DS], 1.0).add(xts, -1.0), Sense::LessEqual, 0.0, "dems_" + tag);
          add_row(p, Row{}.add(soc, 1.0).add(xts, -st.duration), Sense::LessEqual, 0.0, "soccap_" + tag);
          add_row(p,
                  Row{}.add(soc, 1.0).add(prev, -1.0).add(yd[DS], -h.dt * st.eta_c).add(ys[S], h.dt / st.eta_d),
                  Sense::Equal, 0.0, "soc_" + tag);
          prev = soc;
          cycle_day.add(ys[S], h.dt / st.eta_d);
          cycle_year.add(ys[S], w * h.dt / st.eta_d);
        }
        add_row(p, Row{}.add(prev, 1.0).add(soc0, -1.0), Sense::Equal, 0.0, fmt::format("ter_{}_{}_{}", n, j, c));
        if (config.cycle_scope == CycleScope::Daily) {
          cycle_day.add(xts, -st.cycle_limit / h.total_day_weight() * st.duration);
          add_row(p, cycle_day, Sense::LessEqual, 0.0, fmt::format("cycd_{}_{}_{}", n, j, c));
        }
      }
      if (config.cycle_scope == CycleScope::Yearly) {
        cycle_year.add(xts, -st.cycle_limit * st.duration);
        add_row(p, cycle_year, Sense::LessEqual, 0.0, fmt::format("cyc_{}_{}", n, c));
      }
    }
  }
  return m;
}

void add_no_load_shedding(MilpModel& m) {
  const Horizon& h = m.instance.horizon;
  for (int n = 0; n < h.n_periods; ++n)
    for (int j = 0; j < h.n_operating; ++j)
      for (int k = 0; k < h.n_subperiods; ++k)
        for (int c = 0; c < h.n_contingencies(); ++c) {
          m.fix(m.id({VarRole::Demand, {DL, n, j, k, c}}), m.instance.series.load(n, j, k));
        }
  m.semantics.load_shedding = false;
}

BigMConstants compute_bigM(const Instance& in) {
  const Horizon& h = in.horizon;
  const int N = h.n_periods, J = h.n_operating, K = h.n_subperiods, C = h.n_contingencies();
  const auto& grid = *in.specs[G];
  const auto& load = in.series.load;
  const double peak = load.data().empty() ? 0.0 : *std::max_element(load.data().begin(), load.data().end());
  const std::vector<double> none(N, 0.0);
  double pre_max = 0.0;
  for (int n = 0; n < N; ++n) pre_max = std::max(pre_max, grid_capacity(none, grid, n, 0));

  BigMConstants out;
  // preinstalled capacity above the demand bound is not covered by the buildout argument
  out.lower1 = -std::max(peak + 2.0 * grid.max_invest, pre_max);
  out.lower2 = out.lower1;
  out.upper1 = Tensor4(N, J, K, C);
  out.upper2 = Tensor3(N, J, K);
  for (int n = 0; n < N; ++n)
    for (int j = 0; j < J; ++j)
      for (int k = 0; k < K; ++k) {
        out.upper2(n, j, k) = load(n, j, k);
        for (int c = 0; c < C; ++c) out.upper1(n, j, k, c) = load(n, j, k) - grid_capacity(none, grid, n, c);
      }
  const auto& storage = in.specs[S];
  out.storage_buildout = storage_upper_bound(load, in.storage, h.dt).power + (storage ? storage->max_invest : 0.0);
  return out;
}

namespace {

// In market mode a larger x^max shrinks x^tot_g1 and widens the shortfall, so the epigraph alone
// is not tight. Binaries select which live unit attains the maximum.
void pin_largest_unit(MilpModel& m) {
  const Instance& in = m.instance;
  const auto& grid = *in.specs[G];
  auto& p = m.problem;
  if (grid.max_invest <= 0.0 || in.horizon.n_contingencies() < 2) return;
  for (int n = 0; n < in.horizon.n_periods; ++n) {
    const int xmax = m.id({VarRole::LargestUnit, {n}});
    const double pre_max = largest_preinstalled(grid, n);
    const double big = std::max(grid.max_invest, pre_max);
    Row pick;
    int cand = 0;
    // candidate 0 is the largest preinstalled unit (possibly 0)
    {
      const int u = m.add_var({VarRole::UnitSelect, {n, cand}}, 0.0, 0.0, 1.0, VarType::Binary, kSelectPriority);
      add_row(p, Row{}.add(xmax, 1.0).add(u, big), Sense::LessEqual, pre_max + big, fmt::format("selp_{}", n));
      pick.add(u, 1.0);
      ++cand;
    }
    for (int i = lifetime_window_start(n, grid.lifetime); i <= n; ++i, ++cand) {
      const int u = m.add_var({VarRole::UnitSelect, {n, cand}}, 0.0, 0.0, 1.0, VarType::Binary, kSelectPriority);
      add_row(p, Row{}.add(xmax, 1.0).add(m.id({VarRole::Invest, {G, i}}), -1.0).add(u, big), Sense::LessEqual, big,
              fmt::format("sel_{}_{}", n, i));
      pick.add(u, 1.0);
    }
    add_row(p, pick, Sense::Equal, 1.0, fmt::format("pick_{}", n));
  }
}

void check_fresh_market(const MilpModel& m) {
  if (m.market_binaries || m.market_fixed_grid) throw ModelError("market participation constraint already added");
}

}  // namespace

void add_market_participation(MilpModel& m, const BigMConstants& bigM) {
  check_fresh_market(m);
  const Horizon& h = m.instance.horizon;
  auto& p = m.problem;
  pin_largest_unit(m);
  for (int n = 0; n < h.n_periods; ++n)
    for (int j = 0; j < h.n_operating; ++j)
      for (int k = 0; k < h.n_subperiods; ++k)
        for (int c = 0; c < h.n_contingencies(); ++c) {
          const int z = m.add_var({VarRole::Market, {n, j, k, c}}, 0.0, 0.0, 1.0, VarType::Binary, kMarketPriority);
          const int yl = m.id({VarRole::Demand, {DL, n, j, k, c}});
          const int xt = m.id({VarRole::GridCapacity, {n, c}});
          const int yb = m.id({VarRole::Supply, {B, n, j, k, c}});
          const int ys = m.id({VarRole::Supply, {S, n, j, k, c}});
          const auto tag = fmt::format("{}_{}_{}_{}", n, j, k, c);
          // (1 - z) M1lo <= yl - xt <= z M1hi
          add_row(p, Row{}.add(yl, 1.0).add(xt, -1.0).add(z, bigM.lower1), Sense::GreaterEqual, bigM.lower1,
                  "mk1_" + tag);
          add_row(p, Row{}.add(yl, 1.0).add(xt, -1.0).add(z, -bigM.upper1(n, j, k, c)), Sense::LessEqual, 0.0,
                  "mk2_" + tag);
          // yb + ys <= yl - xt - (1 - z) M2lo
          add_row(p, Row{}.add(yb, 1.0).add(ys, 1.0).add(yl, -1.0).add(xt, 1.0).add(z, -bigM.lower2),
                  Sense::LessEqual, -bigM.lower2, "mk3_" + tag);
          // yb + ys <= z M2hi
          add_row(p, Row{}.add(yb, 1.0).add(ys, 1.0).add(z, -bigM.upper2(n, j, k)), Sense::LessEqual, 0.0,
                  "mk4_" + tag);
        }
  m.market_binaries = true;
  m.semantics.market_participation = true;
}

void add_market_participation_fixed_grid(MilpModel& m) {
  check_fresh_market(m);
  if (m.semantics.load_shedding) throw ModelError("fixed-grid market constraint requires load shedding off");
  const Horizon& h = m.instance.horizon;
  auto& p = m.problem;
  std::vector<std::vector<double>> cap(h.n_contingencies(), std::vector<double>(h.n_periods));
  for (int n = 0; n < h.n_periods; ++n)
    for (int c = 0; c < h.n_contingencies(); ++c) {
      const int xt = m.id({VarRole::GridCapacity, {n, c}});
      if (p.col_lower[xt] != p.col_upper[xt]) {
        throw ModelError("fixed-grid market constraint requires fixed grid capacity");
      }
      cap[c][n] = p.col_lower[xt];
    }
  for (int n = 0; n < h.n_periods; ++n)
    for (int j = 0; j < h.n_operating; ++j)
      for (int k = 0; k < h.n_subperiods; ++k)
        for (int c = 0; c < h.n_contingencies(); ++c) {
          const double shortfall = std::max(0.0, m.instance.series.load(n, j, k) - cap[c][n]);
          add_row(p,
                  Row{}.add(m.id({VarRole::Supply, {B, n, j, k, c}}), 1.0).add(m.id({VarRole::Supply, {S, n, j, k, c}}), 1.0),
                  Sense::LessEqual, shortfall, fmt::format("mkf_{}_{}_{}_{}", n, j, k, c));
        }
  m.market_fixed_grid = true;
  m.semantics.market_participation = true;
}

MilpModel build_model(const Instance& instance, const ExperimentConfig& config) {
  MilpModel m = build_full_model(instance, config);
  if (!config.load_shedding) add_no_load_shedding(m);
  if (config.market_mode == MarketMode::PeakOnly) add_market_participation(m, compute_bigM(m.instance));
  return m;
}

void fix_investments(MilpModel& m, const InvestmentPlan& given) {
  const Instance& in = m.instance;
  const Horizon& h = in.horizon;
  const int N = h.n_periods;
  for (int r = 0; r < kNumResources; ++r) {
    for (int n = 0; n < N; ++n) {
      const double x = given.x[r].empty() ? 0.0 : given.x[r][n];
      const auto& spec = in.specs[r];
      const bool ok = x == 0.0 || (spec && x >= spec->min_invest && x <= spec->max_invest);
      if (!ok) throw ModelError(fmt::format("investment {} MW in {} period {} is not admissible", x, short_name(static_cast<ResourceKind>(r)), n));
    }
  }
  const InvestmentPlan plan = make_plan(given.x, in.specs, h);
  for (int r = 0; r < kNumResources; ++r) {
    for (int n = 0; n < N; ++n) {
      m.fix(m.id({VarRole::Invest, {r, n}}), plan.x[r][n]);
      m.fix(m.id({VarRole::Build, {r, n}}), plan.z[r][n]);
      if (non_grid(r)) m.fix(m.id({VarRole::Capacity, {r, n}}), plan.x_tot[r][n]);
    }
  }
  const auto& grid = *in.specs[G];
  for (int n = 0; n < N; ++n) {
    m.fix(m.id({VarRole::LargestUnit, {n}}), plan.x_max[n]);
    for (int c = 0; c < h.n_contingencies(); ++c) m.fix(m.id({VarRole::GridCapacity, {n, c}}), plan.x_tot_grid[c][n]);
    if (!m.find({VarRole::UnitSelect, {n, 0}})) continue;
    // select the first candidate attaining the maximum
    std::vector<double> values{largest_preinstalled(grid, n)};
    for (int i = lifetime_window_start(n, grid.lifetime); i <= n; ++i) values.push_back(plan.x[G][i]);
    const auto best = std::max_element(values.begin(), values.end()) - values.begin();
    for (int cand = 0; cand < static_cast<int>(values.size()); ++cand) {
      m.fix(m.id({VarRole::UnitSelect, {n, cand}}), cand == best ? 1.0 : 0.0);
    }
  }
}

ExtractedSolution extract_solution(const MilpModel& m, const std::vector<double>& values, bool throw_on_violation) {
  const Instance& in = m.instance;
  const Horizon& h = in.horizon;
  const int N = h.n_periods, J = h.n_operating, K = h.n_subperiods, C = h.n_contingencies();
  if (static_cast<int>(values.size()) != m.problem.num_cols()) {
    throw ModelError(fmt::format("solution has {} values for {} columns", values.size(), m.problem.num_cols()));
  }
  auto binary = [&](int col) {
    const double v = values[col];
    const double r = std::round(v);
    if (std::abs(v - r) > kIntegralityTol || (r != 0.0 && r != 1.0)) {
      throw ModelError(fmt::format("binary {} has fractional value {}", m.problem.col_names[col], v));
    }
    return r;
  };
  for (const auto& [key, col] : m.registry()) {
    if (m.problem.col_type[col] == VarType::Binary) (void)binary(col);
  }

  ExtractedSolution out;
  std::array<std::vector<double>, kNumResources> x;
  for (int r = 0; r < kNumResources; ++r) {
    x[r].assign(N, 0.0);
    for (int n = 0; n < N; ++n) {
      const double z = binary(m.id({VarRole::Build, {r, n}}));
      const auto& spec = in.specs[r];
      if (z == 0.0 || !spec) continue;
      x[r][n] = std::clamp(values[m.id({VarRole::Invest, {r, n}})], spec->min_invest, spec->max_invest);
    }
  }
  out.plan = make_plan(x, in.specs, h);
  out.operation = OperationPlan::zeros(h);
  auto clean = [](double v) { return std::max(0.0, v); };
  for (int n = 0; n < N; ++n) {
    out.operation.soc_target[n] = clean(values[m.id({VarRole::ChargeTarget, {n}})]);
    for (int j = 0; j < J; ++j)
      for (int k = 0; k < K; ++k)
        for (int c = 0; c < C; ++c) {
          for (int r = 0; r < kNumResources; ++r) {
            out.operation.supply[r](n, j, k, c) = clean(values[m.id({VarRole::Supply, {r, n, j, k, c}})]);
            out.operation.demand[r](n, j, k, c) = clean(values[m.id({VarRole::Demand, {r, n, j, k, c}})]);
          }
          out.operation.soc(n, j, k, c) = clean(values[m.id({VarRole::Charge, {n, j, k, c}})]);
          // buying and selling the same grid energy at one price is a cost-neutral degeneracy; net it
          auto& buy = out.operation.supply[idx(ResourceKind::Grid)](n, j, k, c);
          auto& sell = out.operation.demand[idx(DemandKind::Grid)](n, j, k, c);
          if (in.series.supply_price[idx(ResourceKind::Grid)](n, j, k) ==
              in.series.demand_price[idx(DemandKind::Grid)](n, j, k)) {
            const double wash = std::min(buy, sell);
            buy -= wash;
            sell -= wash;
          }
        }
  }
  out.costs = cost_breakdown(out.plan, out.operation, in.specs, in.series, h);
  out.solver_objective = m.problem.evaluate_objective(values);
  out.violations = validate_operation(out.operation, out.plan, in.specs, in.storage, h, in.series, m.semantics);
  if (throw_on_violation && !out.violations.empty()) {
    std::string msg = fmt::format("extracted solution violates {} constraint(s)", out.violations.size());
    for (std::size_t i = 0; i < std::min<std::size_t>(5, out.violations.size()); ++i) msg += "; " + describe(out.violations[i]);
    throw ModelError(msg);
  }
  return out;
}

}  // namespace storeplan
