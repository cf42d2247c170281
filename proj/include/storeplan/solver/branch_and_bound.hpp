#pragma once

#include "storeplan/solver/problem.hpp"
#include "storeplan/solver/solution.hpp"

namespace storeplan::solver {

/// LP-based branch-and-bound for problems whose integer columns are all binary.
///
/// Nodes are explored best-bound first (ties: lowest node id) after an initial depth-first dive
/// that stops at the first incumbent. The branching column is the most fractional binary among
/// those with the highest branch priority, ties broken by lowest column id. Each node re-solves
/// the LP relaxation with the dual simplex from its parent's basis, after row-activity bound
/// propagation has fixed whatever binaries it can.
///
/// Status is Optimal once (incumbent - bound) / |incumbent| <= mip_gap. Hitting the time or node
/// limit returns GapFeasible with the achieved gap if an incumbent exists, TimeLimit otherwise.
Solution solve_milp(const Problem& problem, const SolverOptions& options = {});

}  // namespace storeplan::solver
