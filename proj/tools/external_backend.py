#!/usr/bin/env python3
"""External solver backend: solve an MPS file and write a storeplan solution file.

usage: external_backend.py IN.mps OUT.sol [MIP_GAP] [TIME_LIMIT]

Uses highspy when importable, otherwise scipy.optimize.milp (also HiGHS underneath).
"""
import math
import sys


def solve_highspy(path, gap, time_limit):
    import highspy

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", gap)
    h.setOptionValue("time_limit", time_limit)
    if h.readModel(path) != highspy.HighsStatus.kOk:
        raise RuntimeError("highs could not read " + path)
    h.run()
    status = h.getModelStatus()
    lp = h.getLp()
    names = [lp.col_names_[j] for j in range(lp.num_col_)]
    info = h.getInfo()
    if status == highspy.HighsModelStatus.kOptimal:
        st = "optimal"
    elif status == highspy.HighsModelStatus.kInfeasible:
        st = "infeasible"
    elif status in (highspy.HighsModelStatus.kUnbounded,
                    highspy.HighsModelStatus.kUnboundedOrInfeasible):
        st = "unbounded"
    elif status == highspy.HighsModelStatus.kTimeLimit:
        st = "gap_feasible" if info.primal_solution_status == 2 else "time_limit"
    else:
        st = "numerical_error"
    values = list(h.getSolution().col_value) if st in ("optimal", "gap_feasible") else None
    return st, info.objective_function_value, names, values


def read_mps(path):
    rows, kind, obj_row = {}, [], None
    cols, col_id = [], {}
    cost, entries, rhs, rng = [], [], [], []
    lo, up, binary, offset = [], [], [], 0.0
    section = None

    def col(name):
        if name not in col_id:
            col_id[name] = len(cols)
            cols.append(name)
            cost.append(0.0)
            lo.append(0.0)
            up.append(math.inf)
            binary.append(False)
        return col_id[name]

    with open(path) as f:
        for raw in f:
            if not raw.strip() or raw.startswith("*"):
                continue
            tok = raw.split()
            if not raw[0].isspace():
                section = tok[0]
                continue
            if section == "ROWS":
                if tok[0] == "N" and obj_row is None:
                    obj_row = tok[1]
                else:
                    rows[tok[1]] = len(kind)
                    kind.append(tok[0])
                    rhs.append(0.0)
                    rng.append(None)
            elif section == "COLUMNS":
                j = col(tok[0])
                for r, v in zip(tok[1::2], tok[2::2]):
                    if r == obj_row:
                        cost[j] += float(v)
                    else:
                        entries.append((rows[r], j, float(v)))
            elif section in ("RHS", "RANGES"):
                pairs = tok[1:] if len(tok) % 2 else tok
                for r, v in zip(pairs[0::2], pairs[1::2]):
                    if r == obj_row:
                        offset = -float(v)
                    elif section == "RHS":
                        rhs[rows[r]] = float(v)
                    else:
                        rng[rows[r]] = float(v)
            elif section == "BOUNDS":
                t, j = tok[0], col(tok[2])
                v = float(tok[3]) if len(tok) > 3 else 0.0
                if t == "UP":
                    up[j] = v
                elif t == "LO":
                    lo[j] = v
                elif t == "FX":
                    lo[j] = up[j] = v
                elif t == "FR":
                    lo[j], up[j] = -math.inf, math.inf
                elif t == "MI":
                    lo[j] = -math.inf
                elif t == "BV":
                    lo[j], up[j], binary[j] = 0.0, 1.0, True
    row_lo, row_up = [], []
    for i, k in enumerate(kind):
        r, b = rng[i], rhs[i]
        if k == "E":
            l, u = b, b
            if r is not None:
                l, u = (b, b + r) if r >= 0 else (b + r, b)
        elif k == "L":
            l, u = (-math.inf if r is None else b - abs(r)), b
        elif k == "G":
            l, u = b, (math.inf if r is None else b + abs(r))
        else:
            l, u = -math.inf, math.inf
        row_lo.append(l)
        row_up.append(u)
    return cols, cost, lo, up, binary, entries, row_lo, row_up, offset


def solve_scipy(path, gap, time_limit):
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import coo_matrix

    cols, cost, lo, up, binary, entries, row_lo, row_up, offset = read_mps(path)
    n, m = len(cols), len(row_lo)
    cons = []
    if m:
        r = [e[0] for e in entries]
        c = [e[1] for e in entries]
        v = [e[2] for e in entries]
        a = coo_matrix((v, (r, c)), shape=(m, n)).tocsr()
        cons.append(LinearConstraint(a, row_lo, row_up))
    res = milp(np.array(cost), constraints=cons, integrality=np.array(binary, dtype=int),
               bounds=Bounds(lo, up),
               options={"mip_rel_gap": gap, "time_limit": time_limit, "disp": False})
    st = {0: "optimal", 1: "gap_feasible", 2: "infeasible", 3: "unbounded"}.get(res.status, "numerical_error")
    if st == "gap_feasible" and res.x is None:
        st = "time_limit"
    values = list(res.x) if res.x is not None else None
    obj = (res.fun + offset) if res.fun is not None else float("nan")
    return st, obj, cols, values


def main(argv):
    if len(argv) < 3:
        print(__doc__, file=sys.stderr)
        return 2
    path, out = argv[1], argv[2]
    gap = float(argv[3]) if len(argv) > 3 else 1e-5
    time_limit = float(argv[4]) if len(argv) > 4 else 14400.0
    try:
        st, obj, names, values = solve_highspy(path, gap, time_limit)
    except ImportError:
        st, obj, names, values = solve_scipy(path, gap, time_limit)
    with open(out, "w") as f:
        f.write(f"status {st}\n")
        f.write(f"objective {obj!r}\n")
        if values is not None:
            for name, v in zip(names, values):
                f.write(f"{name} {float(v)!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
