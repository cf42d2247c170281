#include "storeplan/solver/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <fmt/format.h>

namespace storeplan::solver {

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vec = Eigen::VectorXd;
using Clock = std::chrono::steady_clock;

constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-14;
constexpr int kRefactorInterval = 100;
constexpr int kBlandThreshold = 1000;
constexpr double kArtificialBound = 1e6;

double pow2_round(double s) {
  if (!(s > 0) || !std::isfinite(s)) return 1.0;
  return std::exp2(std::round(std::log2(s)));
}

enum class Phase { Done, Optimal, Infeasible, Unbounded, Limit, Singular };

}  // namespace

struct SimplexSolver::Impl {
  SolverOptions opt;
  int m = 0;
  int n = 0;
  int total = 0;

  // Scaled structural matrix, both orientations.
  std::vector<int> cstart, cidx;
  std::vector<double> cval;
  std::vector<int> rstart, ridx;
  std::vector<double> rval;
  std::vector<double> colscale, rowscale;
  double objscale = 1.0;
  double offset = 0.0;
  std::vector<double> orig_cost;

  std::vector<double> cost;  // scaled, logicals zero
  std::vector<double> lo, up;    // true bounds, scaled
  std::vector<double> wlo, wup;  // working bounds (artificial box during the dual phase)
  std::vector<double> x, d;
  std::vector<BasisStatus> status;
  std::vector<int> head, pos;
  bool have_basis = false;

  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  struct Eta {
    int pivot;
    double pivot_value;
    std::vector<int> idx;
    std::vector<double> val;
  };
  std::vector<Eta> etas;
  std::vector<double> dse;  // dual steepest-edge weights per basis row

  long iterations = 0;
  long degenerate_run = 0;
  std::optional<Clock::time_point> deadline;

  explicit Impl(const Problem& p, SolverOptions o) : opt(o) {
    p.validate();
    m = p.num_rows();
    n = p.num_cols();
    total = n + m;
    offset = p.objective_offset;
    orig_cost = p.objective;
    build_scaled(p);
  }

  // ---------------------------------------------------------------- setup

  void build_scaled(const Problem& p) {
    rowscale.assign(m, 1.0);
    colscale.assign(n, 1.0);
    for (int pass = 0; pass < 6; ++pass) {
      for (int i = 0; i < m; ++i) {
        double lo_abs = kInf, hi_abs = 0.0;
        for (int k = p.row_start[i]; k < p.row_start[i + 1]; ++k) {
          const double a = std::abs(p.row_value[k] * colscale[p.row_index[k]]);
          lo_abs = std::min(lo_abs, a);
          hi_abs = std::max(hi_abs, a);
        }
        if (hi_abs > 0) rowscale[i] = 1.0 / std::sqrt(lo_abs * hi_abs);
      }
      std::vector<double> cmin(n, kInf), cmax(n, 0.0);
      for (int i = 0; i < m; ++i) {
        for (int k = p.row_start[i]; k < p.row_start[i + 1]; ++k) {
          const int j = p.row_index[k];
          const double a = std::abs(p.row_value[k] * rowscale[i]);
          cmin[j] = std::min(cmin[j], a);
          cmax[j] = std::max(cmax[j], a);
        }
      }
      for (int j = 0; j < n; ++j) {
        if (cmax[j] > 0) colscale[j] = 1.0 / std::sqrt(cmin[j] * cmax[j]);
      }
    }
    for (auto& s : rowscale) s = pow2_round(s);
    for (auto& s : colscale) s = pow2_round(s);

    // CSR (scaled)
    rstart.assign(p.row_start.begin(), p.row_start.end());
    ridx.assign(p.row_index.begin(), p.row_index.end());
    rval.resize(p.row_value.size());
    for (int i = 0; i < m; ++i) {
      for (int k = rstart[i]; k < rstart[i + 1]; ++k) {
        rval[k] = p.row_value[k] * rowscale[i] * colscale[ridx[k]];
      }
    }
    // CSC
    cstart.assign(n + 1, 0);
    for (int j : ridx) ++cstart[j + 1];
    for (int j = 0; j < n; ++j) cstart[j + 1] += cstart[j];
    cidx.resize(ridx.size());
    cval.resize(ridx.size());
    std::vector<int> fill(cstart.begin(), cstart.end() - 1);
    for (int i = 0; i < m; ++i) {
      for (int k = rstart[i]; k < rstart[i + 1]; ++k) {
        const int dst = fill[ridx[k]]++;
        cidx[dst] = i;
        cval[dst] = rval[k];
      }
    }

    double cmax = 0.0;
    for (int j = 0; j < n; ++j) cmax = std::max(cmax, std::abs(p.objective[j] * colscale[j]));
    objscale = cmax > 0 ? pow2_round(cmax) : 1.0;

    cost.assign(total, 0.0);
    lo.assign(total, 0.0);
    up.assign(total, 0.0);
    for (int j = 0; j < n; ++j) {
      cost[j] = p.objective[j] * colscale[j] / objscale;
      lo[j] = p.col_lower[j] / colscale[j];
      up[j] = p.col_upper[j] / colscale[j];
    }
    for (int i = 0; i < m; ++i) {
      lo[n + i] = p.row_lower[i] * rowscale[i];
      up[n + i] = p.row_upper[i] * rowscale[i];
    }
    wlo = lo;
    wup = up;
    x.assign(total, 0.0);
    d.assign(total, 0.0);
    status.assign(total, BasisStatus::AtLower);
    head.assign(m, 0);
    pos.assign(total, -1);
  }

  void slack_basis() {
    for (int j = 0; j < n; ++j) {
      pos[j] = -1;
      status[j] = default_nonbasic(j);
    }
    for (int i = 0; i < m; ++i) {
      head[i] = n + i;
      pos[n + i] = i;
      status[n + i] = BasisStatus::Basic;
    }
    have_basis = true;
    dse.assign(m, 1.0);
  }

  BasisStatus default_nonbasic(int j) const {
    if (std::isfinite(wlo[j])) return BasisStatus::AtLower;
    if (std::isfinite(wup[j])) return BasisStatus::AtUpper;
    return BasisStatus::Free;
  }

  bool load_basis(const Basis& b) {
    if (static_cast<int>(b.status.size()) != total) return false;
    int basic = 0;
    for (auto s : b.status) basic += s == BasisStatus::Basic;
    if (basic != m) return false;
    int r = 0;
    for (int j = 0; j < total; ++j) {
      status[j] = b.status[j];
      if (status[j] == BasisStatus::Basic) {
        head[r] = j;
        pos[j] = r++;
      } else {
        pos[j] = -1;
      }
    }
    have_basis = true;
    dse.assign(m, 1.0);
    return true;
  }

  /// Places nonbasic variables on their (working) bounds, repairing statuses that point at an
  /// infinite bound.
  void place_nonbasic() {
    for (int j = 0; j < total; ++j) {
      auto& s = status[j];
      if (s == BasisStatus::Basic) continue;
      if (s == BasisStatus::AtLower && !std::isfinite(wlo[j])) s = default_nonbasic(j);
      if (s == BasisStatus::AtUpper && !std::isfinite(wup[j])) s = default_nonbasic(j);
      if (s == BasisStatus::Free && (std::isfinite(wlo[j]) || std::isfinite(wup[j]))) {
        // keep a free nonbasic value only if it is inside the bounds
        if (x[j] < wlo[j] || x[j] > wup[j]) s = default_nonbasic(j);
      }
      switch (s) {
        case BasisStatus::AtLower: x[j] = wlo[j]; break;
        case BasisStatus::AtUpper: x[j] = wup[j]; break;
        case BasisStatus::Free:
          if (!std::isfinite(wlo[j]) && !std::isfinite(wup[j]) && !std::isfinite(x[j])) x[j] = 0.0;
          if (std::isfinite(wlo[j]) || std::isfinite(wup[j])) {
            x[j] = std::clamp(x[j], wlo[j], wup[j]);
          }
          break;
        case BasisStatus::Basic: break;
      }
    }
  }

  // ------------------------------------------------------------ factor

  bool refactor() {
    std::vector<Eigen::Triplet<double, int>> trip;
    trip.reserve(static_cast<std::size_t>(m) * 3);
    for (int r = 0; r < m; ++r) {
      const int j = head[r];
      if (j < n) {
        for (int k = cstart[j]; k < cstart[j + 1]; ++k) trip.emplace_back(cidx[k], r, cval[k]);
      } else {
        trip.emplace_back(j - n, r, -1.0);
      }
    }
    SpMat basis(m, m);
    basis.setFromTriplets(trip.begin(), trip.end());
    basis.makeCompressed();
    etas.clear();
    if (m == 0) return true;
    lu.analyzePattern(basis);
    lu.factorize(basis);
    if (lu.info() != Eigen::Success) return false;
    // Reject numerically singular factors.
    const double logdet = lu.logAbsDeterminant();
    return std::isfinite(logdet);
  }

  void ftran(Vec& v) const {
    if (m == 0) return;
    v = lu.solve(v);
    for (const auto& e : etas) {
      const double vp = v[e.pivot] / e.pivot_value;
      if (vp != 0.0) {
        for (std::size_t t = 0; t < e.idx.size(); ++t) v[e.idx[t]] -= e.val[t] * vp;
      }
      v[e.pivot] = vp;
    }
  }

  void btran(Vec& v) const {
    if (m == 0) return;
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double acc = v[it->pivot];
      for (std::size_t t = 0; t < it->idx.size(); ++t) acc -= it->val[t] * v[it->idx[t]];
      v[it->pivot] = acc / it->pivot_value;
    }
    v = lu.transpose().solve(v);
  }

  void push_eta(int r, const Vec& alpha) {
    Eta e;
    e.pivot = r;
    e.pivot_value = alpha[r];
    for (int i = 0; i < m; ++i) {
      if (i != r && std::abs(alpha[i]) > kDropTol) {
        e.idx.push_back(i);
        e.val.push_back(alpha[i]);
      }
    }
    etas.push_back(std::move(e));
  }

  void load_column(int j, Vec& v) const {
    v.setZero(m);
    if (j < n) {
      for (int k = cstart[j]; k < cstart[j + 1]; ++k) v[cidx[k]] = cval[k];
    } else {
      v[j - n] = -1.0;
    }
  }

  double dot_column(const Vec& y, int j) const {
    if (j >= n) return -y[j - n];
    double s = 0.0;
    for (int k = cstart[j]; k < cstart[j + 1]; ++k) s += y[cidx[k]] * cval[k];
    return s;
  }

  // ------------------------------------------------------- primal/dual values

  void compute_basic_values() {
    Vec rhs = Vec::Zero(m);
    for (int j = 0; j < total; ++j) {
      if (status[j] == BasisStatus::Basic || x[j] == 0.0) continue;
      if (j < n) {
        for (int k = cstart[j]; k < cstart[j + 1]; ++k) rhs[cidx[k]] -= cval[k] * x[j];
      } else {
        rhs[j - n] += x[j];
      }
    }
    ftran(rhs);
    for (int r = 0; r < m; ++r) x[head[r]] = rhs[r];
  }

  /// Reduced costs for the cost vector `c` (all variables).
  void compute_reduced_costs(const std::vector<double>& c) {
    Vec y(m);
    for (int r = 0; r < m; ++r) y[r] = c[head[r]];
    btran(y);
    for (int j = 0; j < total; ++j) {
      d[j] = status[j] == BasisStatus::Basic ? 0.0 : c[j] - dot_column(y, j);
    }
  }

  double infeasibility(int j) const {
    const double tol = opt.feasibility_tol;
    if (x[j] < wlo[j] - tol) return wlo[j] - x[j];
    if (x[j] > wup[j] + tol) return x[j] - wup[j];
    return 0.0;
  }

  bool dual_infeasible(int j) const {
    const double tol = opt.optimality_tol;
    switch (status[j]) {
      case BasisStatus::Basic: return false;
      case BasisStatus::AtLower: return wlo[j] != wup[j] && d[j] < -tol;
      case BasisStatus::AtUpper: return wlo[j] != wup[j] && d[j] > tol;
      case BasisStatus::Free: return std::abs(d[j]) > tol;
    }
    return false;
  }

  bool out_of_time() const {
    if (iterations >= opt.iteration_limit) return true;
    return deadline && (iterations % 64 == 0) && Clock::now() > *deadline;
  }

  void pivot(int r, int q, const Vec& alpha_q, BasisStatus leaving_status) {
    const int leaving = head[r];
    status[leaving] = leaving_status;
    pos[leaving] = -1;
    head[r] = q;
    pos[q] = r;
    status[q] = BasisStatus::Basic;
    push_eta(r, alpha_q);
  }

  /// Refactors when the eta file is long; returns false if the basis turned singular.
  bool maybe_refactor() {
    if (static_cast<int>(etas.size()) < kRefactorInterval) return true;
    if (!refactor()) return false;
    compute_basic_values();
    return true;
  }

  // ------------------------------------------------------------- primal

  Phase primal() {
    std::vector<double> phase_cost(total, 0.0);
    Vec alpha(m);
    degenerate_run = 0;
    while (true) {
      if (out_of_time()) return Phase::Limit;
      if (!maybe_refactor()) return Phase::Singular;

      bool phase_one = false;
      for (int r = 0; r < m; ++r) {
        const int j = head[r];
        const double tol = opt.feasibility_tol;
        double c = 0.0;
        if (x[j] < wlo[j] - tol) c = -1.0;
        else if (x[j] > wup[j] + tol) c = 1.0;
        phase_cost[j] = c;
        phase_one |= c != 0.0;
      }
      if (phase_one) {
        for (int j = 0; j < total; ++j) {
          if (status[j] != BasisStatus::Basic) phase_cost[j] = 0.0;
        }
        compute_reduced_costs(phase_cost);
      } else {
        compute_reduced_costs(cost);
      }

      const bool bland = degenerate_run > kBlandThreshold;
      int q = -1;
      double best = 0.0;
      for (int j = 0; j < total; ++j) {
        if (!dual_infeasible(j)) continue;
        if (bland) {
          q = j;
          break;
        }
        const double score = std::abs(d[j]);
        if (score > best) {
          best = score;
          q = j;
        }
      }
      if (q < 0) return phase_one ? Phase::Infeasible : Phase::Optimal;

      const double dir = d[q] < 0 ? 1.0 : -1.0;
      load_column(q, alpha);
      ftran(alpha);

      // Harris two-pass ratio test.
      const double ftol = opt.feasibility_tol;
      double theta_max = kInf;
      auto row_limit = [&](int r, bool relaxed) -> double {
        const double a = alpha[r];
        if (std::abs(a) <= kPivotTol) return kInf;
        const int j = head[r];
        const double rate = -dir * a;
        const double t = relaxed ? ftol : 0.0;
        if (rate < 0) {
          double bound = wlo[j];
          if (phase_one) {
            if (x[j] < wlo[j] - ftol) return kInf;
            if (x[j] > wup[j] + ftol) bound = wup[j];
          }
          if (!std::isfinite(bound)) return kInf;
          return std::max(0.0, x[j] - bound + t) / -rate;
        }
        double bound = wup[j];
        if (phase_one) {
          if (x[j] > wup[j] + ftol) return kInf;
          if (x[j] < wlo[j] - ftol) bound = wlo[j];
        }
        if (!std::isfinite(bound)) return kInf;
        return std::max(0.0, bound - x[j] + t) / rate;
      };
      for (int r = 0; r < m; ++r) theta_max = std::min(theta_max, row_limit(r, true));

      int leave = -1;
      double theta = kInf;
      double best_pivot = 0.0;
      for (int r = 0; r < m; ++r) {
        const double lim = row_limit(r, false);
        if (lim > theta_max) continue;
        const double piv = std::abs(alpha[r]);
        if (bland) {
          if (leave < 0 || lim < theta || (lim == theta && head[r] < head[leave])) {
            leave = r;
            theta = lim;
          }
        } else if (piv > best_pivot) {
          best_pivot = piv;
          leave = r;
          theta = lim;
        }
      }
      double own = kInf;
      if (dir > 0 && std::isfinite(wup[q])) own = wup[q] - x[q];
      if (dir < 0 && std::isfinite(wlo[q])) own = x[q] - wlo[q];
      if (status[q] == BasisStatus::Free) {
        own = dir > 0 ? (std::isfinite(wup[q]) ? wup[q] - x[q] : kInf)
                      : (std::isfinite(wlo[q]) ? x[q] - wlo[q] : kInf);
      }
      own = std::max(own, 0.0);

      if (leave < 0 && !std::isfinite(own)) {
        return phase_one ? Phase::Singular : Phase::Unbounded;
      }
      ++iterations;
      const bool flip = leave < 0 || own <= theta;
      const double step = flip ? own : theta;
      degenerate_run = step < 1e-12 ? degenerate_run + 1 : 0;
      if (step != 0.0) {
        for (int r = 0; r < m; ++r) x[head[r]] -= dir * alpha[r] * step;
        x[q] += dir * step;
      }
      if (flip) {
        status[q] = dir > 0 ? BasisStatus::AtUpper : BasisStatus::AtLower;
        x[q] = dir > 0 ? wup[q] : wlo[q];
        continue;
      }
      const int lv = head[leave];
      const double rate = -dir * alpha[leave];
      BasisStatus ls;
      if (rate < 0) {
        const bool to_upper = phase_one && x[lv] > wup[lv] + ftol;
        ls = to_upper ? BasisStatus::AtUpper : BasisStatus::AtLower;
      } else {
        const bool to_lower = phase_one && x[lv] < wlo[lv] - ftol;
        ls = to_lower ? BasisStatus::AtLower : BasisStatus::AtUpper;
      }
      // In phase one the step may end exactly at the bound the variable was crossing toward.
      if (phase_one) {
        ls = std::abs(x[lv] - wlo[lv]) <= std::abs(x[lv] - wup[lv]) ? BasisStatus::AtLower
                                                                    : BasisStatus::AtUpper;
      }
      if ((ls == BasisStatus::AtLower && !std::isfinite(wlo[lv])) ||
          (ls == BasisStatus::AtUpper && !std::isfinite(wup[lv]))) {
        ls = std::isfinite(wlo[lv]) ? BasisStatus::AtLower : BasisStatus::AtUpper;
      }
      pivot(leave, q, alpha, ls);
      x[lv] = ls == BasisStatus::AtLower ? wlo[lv] : wup[lv];
    }
  }

  // --------------------------------------------------------------- dual

  Phase dual() {
    Vec rho(m), alpha_q(m), tau(m);
    std::vector<double> alpha_row(total, 0.0);
    degenerate_run = 0;
    if (static_cast<int>(dse.size()) != m) dse.assign(m, 1.0);
    while (true) {
      if (out_of_time()) return Phase::Limit;
      if (static_cast<int>(etas.size()) >= kRefactorInterval) {
        if (!refactor()) return Phase::Singular;
        compute_basic_values();
      }
      compute_reduced_costs(cost);
      for (int j = 0; j < total; ++j) {
        if (dual_infeasible(j)) return Phase::Done;  // lost dual feasibility: let primal finish
      }

      const bool bland = degenerate_run > kBlandThreshold;
      int r = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        const double inf = infeasibility(head[i]);
        if (inf <= 0) continue;
        if (bland) {
          if (r < 0 || head[i] < head[r]) r = i;
          continue;
        }
        const double score = inf * inf / dse[i];
        if (score > best) {
          best = score;
          r = i;
        }
      }
      if (r < 0) return Phase::Optimal;

      const int lv = head[r];
      const bool to_lower = x[lv] < wlo[lv];
      const double delta = to_lower ? x[lv] - wlo[lv] : x[lv] - wup[lv];
      const double s = delta < 0 ? -1.0 : 1.0;

      rho.setZero(m);
      rho[r] = 1.0;
      btran(rho);
      std::fill(alpha_row.begin(), alpha_row.end(), 0.0);
      for (int i = 0; i < m; ++i) {
        const double ri = rho[i];
        if (std::abs(ri) < kDropTol) continue;
        for (int k = rstart[i]; k < rstart[i + 1]; ++k) alpha_row[ridx[k]] += ri * rval[k];
        alpha_row[n + i] = -ri;
      }

      const double dtol = opt.optimality_tol;
      auto eligible = [&](int j) {
        if (status[j] == BasisStatus::Basic || wlo[j] == wup[j]) return false;
        const double a = alpha_row[j];
        if (std::abs(a) <= kPivotTol) return false;
        switch (status[j]) {
          case BasisStatus::AtLower: return s * a > 0;
          case BasisStatus::AtUpper: return s * a < 0;
          case BasisStatus::Free: return true;
          default: return false;
        }
      };
      double theta_max = kInf;
      for (int j = 0; j < total; ++j) {
        if (!eligible(j)) continue;
        theta_max = std::min(theta_max, (std::abs(d[j]) + dtol) / std::abs(alpha_row[j]));
      }
      if (!std::isfinite(theta_max)) return Phase::Infeasible;
      int q = -1;
      double best_pivot = 0.0;
      double best_ratio = kInf;
      for (int j = 0; j < total; ++j) {
        if (!eligible(j)) continue;
        const double ratio = std::abs(d[j]) / std::abs(alpha_row[j]);
        if (ratio > theta_max) continue;
        if (bland) {
          if (q < 0 || ratio < best_ratio) {
            q = j;
            best_ratio = ratio;
          }
        } else if (std::abs(alpha_row[j]) > best_pivot) {
          best_pivot = std::abs(alpha_row[j]);
          q = j;
          best_ratio = ratio;
        }
      }
      if (q < 0) return Phase::Infeasible;

      load_column(q, alpha_q);
      ftran(alpha_q);
      const double piv = alpha_q[r];
      if (std::abs(piv) <= kPivotTol ||
          std::abs(piv - alpha_row[q]) > 1e-6 * (1.0 + std::abs(piv))) {
        // Factor drifted; refactor and try again.
        if (etas.empty()) return Phase::Singular;
        if (!refactor()) return Phase::Singular;
        compute_basic_values();
        continue;
      }
      ++iterations;
      degenerate_run = best_ratio < 1e-12 ? degenerate_run + 1 : 0;

      // dual steepest-edge weights
      tau = rho;
      ftran(tau);
      const double wr = dse[r];
      for (int i = 0; i < m; ++i) {
        if (i == r || alpha_q[i] == 0.0) continue;
        const double ratio = alpha_q[i] / piv;
        dse[i] = std::max(dse[i] - 2.0 * ratio * tau[i] + ratio * ratio * wr, 1e-4);
      }
      dse[r] = std::max(wr / (piv * piv), 1e-4);

      const double theta_p = delta / piv;
      for (int i = 0; i < m; ++i) x[head[i]] -= theta_p * alpha_q[i];
      x[q] += theta_p;
      pivot(r, q, alpha_q, to_lower ? BasisStatus::AtLower : BasisStatus::AtUpper);
      x[lv] = to_lower ? wlo[lv] : wup[lv];
    }
  }

  // ---------------------------------------------------------- driver

  void restore_bounds() {
    for (int j = 0; j < total; ++j) {
      if (wlo[j] == lo[j] && wup[j] == up[j]) continue;
      wlo[j] = lo[j];
      wup[j] = up[j];
      if (status[j] == BasisStatus::AtLower && !std::isfinite(lo[j])) status[j] = BasisStatus::Free;
      if (status[j] == BasisStatus::AtUpper && !std::isfinite(up[j])) status[j] = BasisStatus::Free;
    }
  }

  /// Makes the basis dual feasible by bound flips and, where a flip is impossible, by boxing the
  /// variable with an artificial bound. Returns false if nothing could be done.
  bool make_dual_feasible() {
    bool changed = false;
    for (int j = 0; j < total; ++j) {
      if (!dual_infeasible(j)) continue;
      if (d[j] < 0) {
        if (!std::isfinite(wup[j])) {
          wup[j] = std::max(kArtificialBound, std::abs(x[j]) * 10.0);
          if (std::isfinite(wlo[j])) wup[j] = std::max(wup[j], wlo[j] + kArtificialBound);
        }
        status[j] = BasisStatus::AtUpper;
        x[j] = wup[j];
      } else {
        if (!std::isfinite(wlo[j])) {
          wlo[j] = -std::max(kArtificialBound, std::abs(x[j]) * 10.0);
          if (std::isfinite(wup[j])) wlo[j] = std::min(wlo[j], wup[j] - kArtificialBound);
        }
        status[j] = BasisStatus::AtLower;
        x[j] = wlo[j];
      }
      changed = true;
    }
    return changed;
  }

  bool artificial_active() const {
    for (int j = 0; j < total; ++j) {
      if (wlo[j] != lo[j] || wup[j] != up[j]) return true;
    }
    return false;
  }

  bool start(bool warm) {
    wlo = lo;
    wup = up;
    if (!warm || !have_basis) slack_basis();
    place_nonbasic();
    if (!refactor()) {
      slack_basis();
      place_nonbasic();
      if (!refactor()) return false;
    }
    compute_basic_values();
    return true;
  }

  Phase run() {
    // Dual phase with artificial box whenever the start is primal infeasible.
    bool primal_feasible = true;
    for (int r = 0; r < m; ++r) primal_feasible &= infeasibility(head[r]) == 0.0;
    if (!primal_feasible) {
      compute_reduced_costs(cost);
      make_dual_feasible();
      compute_basic_values();
      const Phase ph = dual();
      if (ph == Phase::Limit) return ph;
      if (ph == Phase::Infeasible && !artificial_active()) return Phase::Infeasible;
      if (ph == Phase::Singular) {
        if (!recover()) return Phase::Singular;
      }
    }
    for (int attempt = 0; attempt < 3; ++attempt) {
      restore_bounds();
      place_nonbasic();
      if (!refactor()) {
        if (!recover()) return Phase::Singular;
      }
      compute_basic_values();
      const Phase ph = primal();
      if (ph != Phase::Singular) return ph;
      if (!recover()) return Phase::Singular;
    }
    return Phase::Singular;
  }

  bool recover() {
    wlo = lo;
    wup = up;
    slack_basis();
    place_nonbasic();
    if (!refactor()) return false;
    compute_basic_values();
    return true;
  }

  LpResult finish(Phase phase) {
    LpResult res;
    res.iterations = iterations;
    switch (phase) {
      case Phase::Optimal: res.status = SolveStatus::Optimal; break;
      case Phase::Infeasible: res.status = SolveStatus::Infeasible; break;
      case Phase::Unbounded: res.status = SolveStatus::Unbounded; break;
      case Phase::Limit: res.status = SolveStatus::TimeLimit; break;
      default: res.status = SolveStatus::NumericalError; break;
    }
    res.values.resize(n);
    for (int j = 0; j < n; ++j) res.values[j] = x[j] * colscale[j];
    double obj = offset;
    for (int j = 0; j < n; ++j) obj += orig_cost[j] * res.values[j];
    res.objective = obj;
    if (res.status == SolveStatus::Optimal) {
      compute_reduced_costs(cost);
      double bound = 0.0;
      for (int j = 0; j < total; ++j) {
        if (status[j] == BasisStatus::Basic) continue;
        const double dj = d[j];
        const double b = dj >= 0 ? lo[j] : up[j];
        if (std::isfinite(b)) bound += dj * b;
        else bound += dj * x[j];
      }
      res.dual_bound = bound * objscale + offset;
    } else {
      res.dual_bound = -kInf;
    }
    return res;
  }

  LpResult solve(bool warm) {
    iterations = 0;
    if (!start(warm)) return finish(Phase::Singular);
    Phase ph = run();
    if (ph == Phase::Optimal) {
      // Verify in original units; retry once from a fresh factorization.
      for (int attempt = 0; attempt < 2 && !verify(); ++attempt) {
        if (!refactor()) {
          if (!recover()) return finish(Phase::Singular);
        }
        compute_basic_values();
        ph = primal();
        if (ph != Phase::Optimal) break;
      }
      if (ph == Phase::Optimal && !verify()) ph = Phase::Singular;
    }
    return finish(ph);
  }

  bool verify() const {
    const double tol = 10.0 * opt.feasibility_tol;
    for (int j = 0; j < n; ++j) {
      const double v = x[j] * colscale[j];
      const double l = lo[j] * colscale[j];
      const double u = up[j] * colscale[j];
      if (v < l - tol * (1.0 + std::abs(l)) || v > u + tol * (1.0 + std::abs(u))) return false;
    }
    for (int i = 0; i < m; ++i) {
      double act = 0.0;
      for (int k = rstart[i]; k < rstart[i + 1]; ++k) act += rval[k] * x[ridx[k]];
      act /= rowscale[i];
      const double l = lo[n + i] / rowscale[i];
      const double u = up[n + i] / rowscale[i];
      if (act < l - tol * (1.0 + std::abs(l)) || act > u + tol * (1.0 + std::abs(u))) return false;
    }
    return true;
  }
};

SimplexSolver::SimplexSolver(const Problem& problem, SolverOptions options)
    : impl_(std::make_unique<Impl>(problem, options)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

void SimplexSolver::set_col_bounds(int col, double lower, double upper) {
  if (col < 0 || col >= impl_->n) throw std::out_of_range("set_col_bounds: bad column");
  if (lower > upper) throw std::invalid_argument("set_col_bounds: crossed bounds");
  impl_->lo[col] = lower / impl_->colscale[col];
  impl_->up[col] = upper / impl_->colscale[col];
}

double SimplexSolver::col_lower(int col) const { return impl_->lo[col] * impl_->colscale[col]; }
double SimplexSolver::col_upper(int col) const { return impl_->up[col] * impl_->colscale[col]; }

void SimplexSolver::set_deadline(std::optional<Clock::time_point> deadline) {
  impl_->deadline = deadline;
}

LpResult SimplexSolver::solve() { return impl_->solve(true); }

LpResult SimplexSolver::solve_from(const Basis& basis) {
  if (!impl_->load_basis(basis)) impl_->have_basis = false;
  return impl_->solve(true);
}

Basis SimplexSolver::basis() const { return Basis{impl_->status}; }

void SimplexSolver::reset_basis() { impl_->have_basis = false; }

Solution solve_lp(const Problem& problem, const SolverOptions& options) {
  const auto t0 = Clock::now();
  SimplexSolver lp(problem, options);
  lp.set_deadline(t0 + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(options.time_limit)));
  LpResult r = lp.solve();
  Solution sol;
  sol.status = r.status;
  sol.iterations = r.iterations;
  if (r.status == SolveStatus::Optimal) {
    sol.values = std::move(r.values);
    sol.objective = r.objective;
    sol.best_bound = r.dual_bound;
    sol.gap = 0.0;
  }
  sol.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
  return sol;
}

}  // namespace storeplan::solver
