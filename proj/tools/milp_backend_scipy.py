#!/usr/bin/env python3
"""Subprocess MILP backend on top of scipy.optimize.milp (HiGHS).

Protocol: milp_backend_scipy.py <model.json> <result.json>
Model: {"sense": "min"|"max", "time_limit_s": float,
        "columns": [{"name", "lb", "ub", "integer", "obj"}...],
        "rows": [{"name", "coeffs": [[var_index, coef]...], "sense", "rhs"}...]}
Result: {"status", "objective", "bound", "values", "message"}
"""

import json
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix


def main() -> int:
    model_path, result_path = sys.argv[1], sys.argv[2]
    with open(model_path) as f:
        model = json.load(f)

    cols = model["columns"]
    n = len(cols)
    sign = -1.0 if model.get("sense", "min") == "max" else 1.0
    c = sign * np.array([col.get("obj", 0.0) for col in cols], dtype=float)
    lb = np.array([-np.inf if col.get("lb") is None else col["lb"] for col in cols], dtype=float)
    ub = np.array([np.inf if col.get("ub") is None else col["ub"] for col in cols], dtype=float)
    integrality = np.array([1 if col.get("integer") else 0 for col in cols], dtype=int)

    rows = model.get("rows", [])
    data, indices, indptr = [], [], [0]
    row_lo, row_hi = [], []
    for row in rows:
        for j, a in row["coeffs"]:
            indices.append(j)
            data.append(a)
        indptr.append(len(indices))
        rhs = row["rhs"]
        sense = row["sense"]
        row_lo.append(rhs if sense in ("=", ">=") else -np.inf)
        row_hi.append(rhs if sense in ("=", "<=") else np.inf)

    constraints = []
    if rows:
        a_matrix = csr_matrix((data, indices, indptr), shape=(len(rows), n))
        constraints.append(LinearConstraint(a_matrix, np.array(row_lo), np.array(row_hi)))

    options = {"presolve": True}
    time_limit = model.get("time_limit_s")
    if time_limit:
        options["time_limit"] = float(time_limit)

    res = milp(
        c,
        constraints=constraints,
        integrality=integrality,
        bounds=Bounds(lb, ub),
        options=options,
    )

    status_map = {0: "optimal", 1: "feasible", 2: "infeasible", 3: "unbounded"}
    status = status_map.get(res.status, "error")
    if status == "feasible" and res.x is None:
        status = "error"

    reply = {"status": status, "message": res.message}
    if res.x is not None:
        reply["values"] = [float(v) for v in res.x]
        reply["objective"] = float(sign * res.fun)
        dual = getattr(res, "mip_dual_bound", None)
        reply["bound"] = float(sign * dual) if dual is not None else reply["objective"]
    with open(result_path, "w") as f:
        json.dump(reply, f)
    return 0


if __name__ == "__main__":
    sys.exit(main())
