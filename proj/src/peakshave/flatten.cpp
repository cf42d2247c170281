#include "storeplan/peakshave/flatten.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "storeplan/solver/simplex.hpp"

namespace storeplan {

namespace {

constexpr double kThroughputPenalty = 1e-9;

// solver noise below this is reported as an idle hour
double clean(double v) { return v > 1e-9 ? v : 0.0; }

void check_profile(std::span<const double> load) {
  if (load.empty()) throw std::invalid_argument("flatten_load: empty load profile");
  for (double v : load) {
    if (!(v >= 0)) throw std::invalid_argument("flatten_load: load must be nonnegative");
  }
}

FlattenResult flatten_split(std::span<const double> load, double eta_c, double eta_d, double dt) {
  check_profile(load);
  if (!(eta_c >= 0 && eta_c <= 1 && eta_d > 0 && eta_d <= 1)) {
    throw std::invalid_argument("flatten_load: efficiencies out of range");
  }
  const int K = static_cast<int>(load.size());
  const double eta = eta_c * eta_d;

  solver::Problem lp;
  lp.name = "FLATTEN";
  const int peak = lp.add_column(1.0, 0.0, solver::kInf);
  std::vector<int> yd(K), ys(K);
  for (int k = 0; k < K; ++k) {
    yd[k] = lp.add_column(kThroughputPenalty, 0.0, solver::kInf);
    ys[k] = lp.add_column(kThroughputPenalty, 0.0, solver::kInf);
  }
  for (int k = 0; k < K; ++k) {
    const int cols[] = {peak, ys[k], yd[k]};
    const double vals[] = {1.0, 1.0, -1.0};
    lp.add_row(cols, vals, solver::Sense::GreaterEqual, load[k]);
  }
  {
    std::vector<int> cols;
    std::vector<double> vals;
    for (int k = 0; k < K; ++k) {
      cols.push_back(yd[k]);
      vals.push_back(eta);
      cols.push_back(ys[k]);
      vals.push_back(-1.0);
    }
    lp.add_row(cols, vals, solver::Sense::GreaterEqual, 0.0);
  }
  const auto sol = solver::solve_lp(lp);
  if (sol.status != solver::SolveStatus::Optimal) {
    throw std::runtime_error("flatten_load: LP did not solve to optimality");
  }

  FlattenResult out;
  out.charge.resize(K);
  out.discharge.resize(K);
  double net_peak = 0.0, cum = 0.0, hi = 0.0, lo = 0.0;
  for (int k = 0; k < K; ++k) {
    out.charge[k] = clean(sol.values[yd[k]]);
    out.discharge[k] = clean(sol.values[ys[k]]);
    net_peak = std::max(net_peak, load[k] - out.discharge[k] + out.charge[k]);
    out.required_power = std::max({out.required_power, out.charge[k], out.discharge[k]});
    // stored energy relative to the start of the day; the start itself counts
    cum += dt * (eta_c * out.charge[k] - out.discharge[k] / eta_d);
    hi = std::max(hi, cum);
    lo = std::min(lo, cum);
  }
  out.flattened_peak = net_peak;
  out.required_energy = hi - lo;
  return out;
}

}  // namespace

FlattenResult flatten_load(std::span<const double> load, const StorageSpec& storage, double dt) {
  return flatten_split(load, storage.eta_c, storage.eta_d, dt);
}

FlattenResult flatten_load(std::span<const double> load, double eta_rt, double dt) {
  if (!(eta_rt >= 0 && eta_rt <= 1)) throw std::invalid_argument("flatten_load: efficiency out of range");
  const double split = std::sqrt(eta_rt);
  if (split == 0.0) return flatten_split(load, 0.0, 1.0, dt);
  return flatten_split(load, split, split, dt);
}

double flattened_peak_closed_form(std::span<const double> load, double eta_rt) {
  check_profile(load);
  std::vector<double> y(load.begin(), load.end());
  std::sort(y.begin(), y.end(), std::greater<>());
  const int K = static_cast<int>(y.size());
  const double total = std::accumulate(y.begin(), y.end(), 0.0);
  // every m is a vertex of the dual polyhedron, so the maximum runs over all of them
  double best = -std::numeric_limits<double>::infinity();
  double head = 0.0;
  for (int m = 0; m <= K; ++m) {
    if (m > 0) head += y[m - 1];
    const double denom = m + (K - m) * eta_rt;
    if (denom <= 0.0) continue;
    best = std::max(best, (head + eta_rt * (total - head)) / denom);
  }
  return best;
}

StorageBound storage_upper_bound(const std::vector<std::vector<double>>& days, const StorageSpec& storage,
                                 double dt) {
  if (days.empty()) throw std::invalid_argument("storage_upper_bound: no load profiles");
  StorageBound out;
  double energy = 0.0;
  for (const auto& day : days) {
    const auto r = flatten_load(day, storage, dt);
    out.power = std::max(out.power, r.required_power);
    energy = std::max(energy, r.required_energy);
  }
  if (out.power > 0.0) out.duration = energy / out.power;
  return out;
}

StorageBound storage_upper_bound(const Tensor3& load, const StorageSpec& storage, double dt) {
  std::vector<std::vector<double>> days;
  for (int n = 0; n < load.periods(); ++n)
    for (int j = 0; j < load.days(); ++j) {
      std::vector<double> day(load.hours());
      for (int k = 0; k < load.hours(); ++k) day[k] = load(n, j, k);
      days.push_back(std::move(day));
    }
  return storage_upper_bound(days, storage, dt);
}

}  // namespace storeplan
