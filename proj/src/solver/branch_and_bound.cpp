#include "storeplan/solver/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <vector>

#include <fmt/format.h>

#include "storeplan/solver/simplex.hpp"

namespace storeplan::solver {

namespace {

using Clock = std::chrono::steady_clock;

struct Fixing {
  int col;
  std::int8_t value;
};

struct Node {
  long id = 0;
  int depth = 0;
  double bound = -kInf;
  std::vector<Fixing> fixings;
  std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
  bool operator()(const std::unique_ptr<Node>& a, const std::unique_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  }
};

/// Row-activity bound propagation over the original matrix. Works on a private copy of the
/// column bounds; returns false when some row cannot be satisfied.
class Propagator {
 public:
  explicit Propagator(const Problem& p) : p_(p) {}

  bool run(std::vector<double>& lo, std::vector<double>& up) const {
    const int m = p_.num_rows();
    for (int pass = 0; pass < 20; ++pass) {
      bool changed = false;
      for (int i = 0; i < m; ++i) {
        if (!row(i, lo, up, changed)) return false;
      }
      if (!changed) break;
    }
    return true;
  }

 private:
  bool row(int i, std::vector<double>& lo, std::vector<double>& up, bool& changed) const {
    const double rlo = p_.row_lower[i];
    const double rup = p_.row_upper[i];
    double min_act = 0.0, max_act = 0.0;
    int min_inf = 0, max_inf = 0;
    const int b = p_.row_start[i], e = p_.row_start[i + 1];
    for (int k = b; k < e; ++k) {
      const int j = p_.row_index[k];
      const double a = p_.row_value[k];
      const double lmin = a > 0 ? lo[j] : up[j];
      const double lmax = a > 0 ? up[j] : lo[j];
      if (std::isfinite(lmin)) min_act += a * lmin; else ++min_inf;
      if (std::isfinite(lmax)) max_act += a * lmax; else ++max_inf;
    }
    const double tol = 1e-6;
    if (min_inf == 0 && std::isfinite(rup) && min_act > rup + tol * (1.0 + std::abs(rup))) return false;
    if (max_inf == 0 && std::isfinite(rlo) && max_act < rlo - tol * (1.0 + std::abs(rlo))) return false;

    for (int k = b; k < e; ++k) {
      const int j = p_.row_index[k];
      const double a = p_.row_value[k];
      const bool binary = p_.col_type[j] == VarType::Binary;
      const double lmin = a > 0 ? lo[j] : up[j];
      const double lmax = a > 0 ? up[j] : lo[j];
      // residual activity of the other columns
      double rest_min = kInf, rest_max = -kInf;
      if (std::isfinite(lmin)) {
        if (min_inf == 0) rest_min = min_act - a * lmin;
      } else if (min_inf == 1) {
        rest_min = min_act;
      }
      if (std::isfinite(lmax)) {
        if (max_inf == 0) rest_max = max_act - a * lmax;
      } else if (max_inf == 1) {
        rest_max = max_act;
      }
      double new_lo = lo[j], new_up = up[j];
      // a x_j <= rup - rest_min,  a x_j >= rlo - rest_max
      if (std::isfinite(rup) && std::isfinite(rest_min)) {
        const double lim = (rup - rest_min) / a;
        if (a > 0) new_up = std::min(new_up, lim); else new_lo = std::max(new_lo, lim);
      }
      if (std::isfinite(rlo) && std::isfinite(rest_max)) {
        const double lim = (rlo - rest_max) / a;
        if (a > 0) new_lo = std::max(new_lo, lim); else new_up = std::min(new_up, lim);
      }
      if (binary) {
        new_lo = new_lo > 1e-6 ? 1.0 : lo[j];
        new_up = new_up < 1.0 - 1e-6 ? 0.0 : up[j];
      } else {
        // only keep meaningful tightenings, with a little slack against round-off
        const double slack = 1e-7 * (1.0 + std::abs(new_lo));
        new_lo = new_lo - slack > lo[j] + 1e-4 * (1.0 + std::abs(lo[j])) ? new_lo - slack : lo[j];
        const double slack_u = 1e-7 * (1.0 + std::abs(new_up));
        new_up = new_up + slack_u < up[j] - 1e-4 * (1.0 + std::abs(up[j])) ? new_up + slack_u : up[j];
      }
      if (new_lo > new_up) {
        if (new_lo - new_up > 1e-6 * (1.0 + std::abs(new_lo))) return false;
        new_lo = new_up = binary ? std::round(new_lo) : 0.5 * (new_lo + new_up);
      }
      if (new_lo != lo[j] || new_up != up[j]) {
        // keep the running activities consistent with the tightened bounds
        const double omin = a > 0 ? lo[j] : up[j];
        const double omax = a > 0 ? up[j] : lo[j];
        lo[j] = new_lo;
        up[j] = new_up;
        const double nmin = a > 0 ? lo[j] : up[j];
        const double nmax = a > 0 ? up[j] : lo[j];
        if (std::isfinite(omin)) min_act -= a * omin; else --min_inf;
        if (std::isfinite(nmin)) min_act += a * nmin; else ++min_inf;
        if (std::isfinite(omax)) max_act -= a * omax; else --max_inf;
        if (std::isfinite(nmax)) max_act += a * nmax; else ++max_inf;
        changed = true;
      }
    }
    return true;
  }

  const Problem& p_;
};

class BranchAndBound {
 public:
  BranchAndBound(const Problem& p, const SolverOptions& opt)
      : p_(p), opt_(opt), lp_(p, opt), prop_(p) {
    for (int j = 0; j < p.num_cols(); ++j) {
      if (p.col_type[j] == VarType::Binary) binaries_.push_back(j);
    }
    lp_lo_ = p.col_lower;
    lp_up_ = p.col_upper;
  }

  Solution run() {
    t0_ = Clock::now();
    deadline_ = t0_ + std::chrono::duration_cast<Clock::duration>(
                          std::chrono::duration<double>(opt_.time_limit));
    lp_.set_deadline(deadline_);

    auto root = std::make_unique<Node>();
    root->id = next_id_++;
    std::unique_ptr<Node> dive = std::move(root);
    bool limit_hit = false;
    bool unbounded = false;
    bool numerical = false;

    while (dive || !open_.empty()) {
      if (nodes_ >= opt_.node_limit || Clock::now() > deadline_) {
        limit_hit = true;
        break;
      }
      std::unique_ptr<Node> node;
      if (dive) {
        node = std::move(dive);
      } else {
        node = std::move(const_cast<std::unique_ptr<Node>&>(open_.top()));
        open_.pop();
      }
      if (has_incumbent_ && prunable(node->bound)) continue;
      if (has_incumbent_ && gap_closed(node->bound)) {
        open_.push(std::move(node));
        break;
      }
      ++nodes_;

      std::vector<double> lo = p_.col_lower, up = p_.col_upper;
      for (const auto& f : node->fixings) lo[f.col] = up[f.col] = f.value;
      if (!prop_.run(lo, up)) continue;
      apply_binary_bounds(lo, up);

      LpResult r = node->basis ? lp_.solve_from(*node->basis) : lp_.solve();
      iterations_ += r.iterations;
      if (r.status == SolveStatus::Infeasible) continue;
      if (r.status == SolveStatus::TimeLimit) {
        limit_hit = true;
        open_.push(std::move(node));
        break;
      }
      if (r.status == SolveStatus::Unbounded) {
        if (node->depth == 0) {
          unbounded = true;
          break;
        }
        numerical = true;
        lost_bound_ = std::min(lost_bound_, node->bound);
        continue;
      }
      if (r.status != SolveStatus::Optimal) {
        // Retry once from scratch before giving up on the node.
        lp_.reset_basis();
        r = lp_.solve();
        iterations_ += r.iterations;
        if (r.status == SolveStatus::Infeasible) continue;
        if (r.status != SolveStatus::Optimal) {
          numerical = true;
          lost_bound_ = std::min(lost_bound_, node->bound);
          continue;
        }
      }
      const double bound = std::max(node->bound, r.objective);
      if (has_incumbent_ && prunable(bound)) continue;

      const int branch_col = select_branch(r.values);
      if (branch_col < 0) {
        accept(r.values, lo, up);
        continue;
      }
      auto basis = std::make_shared<const Basis>(lp_.basis());
      const double frac = r.values[branch_col];
      const std::int8_t first = frac >= 0.5 ? 1 : 0;
      for (std::int8_t v : {first, static_cast<std::int8_t>(1 - first)}) {
        auto child = std::make_unique<Node>();
        child->id = next_id_++;
        child->depth = node->depth + 1;
        child->bound = bound;
        child->fixings = node->fixings;
        child->fixings.push_back({branch_col, v});
        child->basis = basis;
        if (v == first && !has_incumbent_) dive = std::move(child);
        else open_.push(std::move(child));
      }
    }

    Solution sol;
    sol.nodes = nodes_;
    sol.iterations = iterations_;
    sol.incumbent_history = history_;
    sol.wall_time = std::chrono::duration<double>(Clock::now() - t0_).count();
    if (unbounded && !has_incumbent_) {
      sol.status = SolveStatus::Unbounded;
      return sol;
    }
    double best_bound = has_incumbent_ ? incumbent_obj_ : kInf;
    if (!open_.empty()) best_bound = std::min(best_bound, open_.top()->bound);
    if (dive) best_bound = std::min(best_bound, dive->bound);
    best_bound = std::min(best_bound, lost_bound_);
    if (!has_incumbent_) {
      sol.status = limit_hit ? SolveStatus::TimeLimit
                   : numerical ? SolveStatus::NumericalError
                               : SolveStatus::Infeasible;
      sol.best_bound = best_bound;
      return sol;
    }
    sol.values = incumbent_;
    sol.objective = incumbent_obj_;
    sol.best_bound = std::min(best_bound, incumbent_obj_);
    sol.gap = relative_gap(incumbent_obj_, sol.best_bound);
    sol.status = sol.gap <= opt_.mip_gap ? SolveStatus::Optimal : SolveStatus::GapFeasible;
    return sol;
  }

 private:
  static double relative_gap(double inc, double bound) {
    const double diff = std::max(0.0, inc - bound);
    if (diff <= 1e-9 * std::max(1.0, std::abs(inc))) return 0.0;
    return diff / std::max(std::abs(inc), 1e-9);
  }

  bool prunable(double bound) const {
    return bound >= incumbent_obj_ - 1e-9 * std::max(1.0, std::abs(incumbent_obj_));
  }

  bool gap_closed(double node_bound) const {
    double b = std::min({incumbent_obj_, lost_bound_, node_bound});
    if (!open_.empty()) b = std::min(b, open_.top()->bound);
    return relative_gap(incumbent_obj_, b) <= opt_.mip_gap;
  }

  void apply_binary_bounds(const std::vector<double>& lo, const std::vector<double>& up) {
    for (int j : binaries_) {
      if (lo[j] != lp_lo_[j] || up[j] != lp_up_[j]) {
        lp_.set_col_bounds(j, lo[j], up[j]);
        lp_lo_[j] = lo[j];
        lp_up_[j] = up[j];
      }
    }
  }

  int select_branch(const std::vector<double>& x) const {
    int best = -1;
    int best_priority = 0;
    double best_frac = 0.0;
    for (int j : binaries_) {
      const double f = std::abs(x[j] - std::round(x[j]));
      if (f <= opt_.integrality_tol) continue;
      const int pr = p_.priority(j);
      const double score = std::min(x[j] - std::floor(x[j]), std::ceil(x[j]) - x[j]);
      if (best < 0 || pr > best_priority || (pr == best_priority && score > best_frac)) {
        best = j;
        best_priority = pr;
        best_frac = score;
      }
    }
    return best;
  }

  /// Rounds the binaries and re-solves the continuous part so the stored point is exactly
  /// integral and feasible.
  void accept(const std::vector<double>& x, const std::vector<double>& lo,
              const std::vector<double>& up) {
    std::vector<double> point = x;
    std::vector<double> fixed_lo = lo, fixed_up = up;
    for (int j : binaries_) fixed_lo[j] = fixed_up[j] = std::round(x[j]);
    for (int j : binaries_) point[j] = fixed_lo[j];
    double obj = p_.evaluate_objective(point);
    if (p_.max_violation(point) > opt_.feasibility_tol) {
      apply_binary_bounds(fixed_lo, fixed_up);
      const LpResult r = lp_.solve();
      iterations_ += r.iterations;
      apply_binary_bounds(lo, up);
      if (r.status != SolveStatus::Optimal) return;
      point = r.values;
      for (int j : binaries_) point[j] = fixed_lo[j];
      obj = p_.evaluate_objective(point);
    }
    if (has_incumbent_ && obj >= incumbent_obj_) return;
    has_incumbent_ = true;
    incumbent_ = std::move(point);
    incumbent_obj_ = obj;
    history_.push_back(obj);
    if (opt_.verbose) {
      fmt::print(stderr, "incumbent {:.10g} after {} nodes\n", obj, nodes_);
    }
  }

  const Problem& p_;
  SolverOptions opt_;
  SimplexSolver lp_;
  Propagator prop_;
  std::vector<int> binaries_;
  std::vector<double> lp_lo_, lp_up_;
  std::priority_queue<std::unique_ptr<Node>, std::vector<std::unique_ptr<Node>>, NodeOrder> open_;
  long next_id_ = 0;
  long nodes_ = 0;
  long iterations_ = 0;
  bool has_incumbent_ = false;
  double incumbent_obj_ = kInf;
  double lost_bound_ = kInf;  // bounds of nodes dropped after numerical trouble
  std::vector<double> incumbent_;
  std::vector<double> history_;
  Clock::time_point t0_, deadline_;
};

}  // namespace

Solution solve_milp(const Problem& problem, const SolverOptions& options) {
  options.validate();
  problem.validate();
  BranchAndBound bb(problem, options);
  return bb.run();
}

}  // namespace storeplan::solver
