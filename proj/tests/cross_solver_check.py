#!/usr/bin/env python3
"""Cross-checks the built-in exact solver against scipy's MILP (HiGHS).

Usage: cross_solver_check.py <qcache-binary> <corpus-dir>
Exits 77 (ctest skip) when scipy is unavailable.
"""
import json
import subprocess
import sys

try:
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
except ImportError:
    print("scipy not available, skipping cross-solver check")
    sys.exit(77)

QCACHE, CORPUS = sys.argv[1], sys.argv[2]

CASES = [
    ("loop_persistent", "MRU", "all-comp"),
    ("loop_persistent", "FIFO", "miss"),
    ("nested", "MRU", "all-comp"),
    ("nested", "LRU", "lru-maymust-pers"),
    ("loops_seq", "FIFO", "all-comp"),
    ("diamond_in_loop", "MRU", "block-miss"),
    ("switch4", "FIFO", "hit"),
    ("two_phase", "MRU", "all-comp"),
    ("loop_conflict", "LRU", "lru-maymust-pers"),
    ("deep_nest", "MRU", "all-comp"),
]


def run(args):
    return subprocess.run(args, capture_output=True, text=True, check=True).stdout


def solve_with_scipy(model):
    names = [v["name"] for v in model["variables"]]
    idx = {n: i for i, n in enumerate(names)}
    n = len(names)
    lb = np.array([float(v["lb"]) for v in model["variables"]])
    ub = np.array([float(v["ub"]) for v in model["variables"]])
    c = np.zeros(n)
    for t in model.get("objective") or []:
        c[idx[t["var"]]] = -float(t["coeff"])  # milp minimizes
    rows, lo, hi = [], [], []
    for con in model.get("constraints") or []:
        row = np.zeros(n)
        for t in con.get("terms") or []:
            row[idx[t["var"]]] += float(t["coeff"])
        rows.append(row)
        rhs = float(con["rhs"])
        if con["rel"] == "<=":
            lo.append(-np.inf)
            hi.append(rhs)
        elif con["rel"] == ">=":
            lo.append(rhs)
            hi.append(np.inf)
        else:
            lo.append(rhs)
            hi.append(rhs)
    res = milp(
        c=c,
        constraints=LinearConstraint(np.array(rows), np.array(lo), np.array(hi)),
        bounds=Bounds(lb, ub),
        integrality=np.ones(n),
    )
    if not res.success:
        raise RuntimeError(f"scipy milp failed: {res.message}")
    return round(-res.fun)


failures = 0
for prog, policy, config in CASES:
    program = f"{CORPUS}/{prog}.prog"
    model = json.loads(
        run([QCACHE, "emit-lp", "--program", program, "--policy", policy, "--k", "2",
             "--config", config, "--json"])
    )
    external = solve_with_scipy(model)
    csv = run([QCACHE, "analyze", "--program", program, "--policy", policy, "--k", "2",
               "--config", config, "--baseline", "allmiss"])
    row = [line for line in csv.splitlines() if line.startswith(program)][0]
    internal = int(row.split(",")[2])
    status = "ok" if internal == external else "MISMATCH"
    print(f"{prog}/{policy}/{config}: internal={internal} external={external} {status}")
    if internal != external:
        failures += 1

sys.exit(1 if failures else 0)
