#!/usr/bin/env python3
"""Solve an MPS file written by `h2flex lpwrite` with an independent solver.

Parses the fixed-layout MPS sections (NAME/ROWS/COLUMNS/RHS/BOUNDS/ENDATA)
and hands the LP to scipy's HiGHS backend. Prints the optimal objective on
stdout so it can be recorded as a cross-check fixture:

    python3 tools/solve_mps.py problem.mps
"""

import sys

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix


def parse_mps(path):
    obj_row = None
    row_sense = {}
    row_order = []
    cols = {}
    col_order = []
    objective = {}
    entries = []  # (row, col, value)
    rhs = {}
    bounds = {}

    section = None
    with open(path) as handle:
        for line in handle:
            if not line.strip() or line.startswith("*"):
                continue
            if not line[0].isspace():
                section = line.split()[0]
                continue
            tok = line.split()
            if section == "ROWS":
                sense, name = tok
                if sense == "N":
                    obj_row = name
                else:
                    row_sense[name] = sense
                    row_order.append(name)
            elif section == "COLUMNS":
                col = tok[0]
                if col not in cols:
                    cols[col] = len(col_order)
                    col_order.append(col)
                for row, value in zip(tok[1::2], tok[2::2]):
                    if row == obj_row:
                        objective[col] = float(value)
                    else:
                        entries.append((row, col, float(value)))
            elif section == "RHS":
                for row, value in zip(tok[1::2], tok[2::2]):
                    if row != obj_row:
                        rhs[row] = float(value)
            elif section == "BOUNDS":
                kind, _, col = tok[0], tok[1], tok[2]
                lo, hi = bounds.get(col, (0.0, np.inf))
                if kind == "UP":
                    hi = float(tok[3])
                elif kind == "LO":
                    lo = float(tok[3])
                elif kind == "FX":
                    lo = hi = float(tok[3])
                elif kind == "FR":
                    lo, hi = -np.inf, np.inf
                elif kind == "MI":
                    lo = -np.inf
                elif kind == "PL":
                    hi = np.inf
                else:
                    raise ValueError(f"unsupported bound kind {kind}")
                bounds[col] = (lo, hi)

    n = len(col_order)
    c = np.zeros(n)
    for col, value in objective.items():
        c[cols[col]] = value

    row_index = {name: i for i, name in enumerate(row_order)}
    b = np.zeros(len(row_order))
    for row, value in rhs.items():
        b[row_index[row]] = value

    data, rows_ub, cols_ub = [], [], []
    data_eq, rows_eq, cols_eq = [], [], []
    ub_rows = [name for name in row_order if row_sense[name] in ("L", "G")]
    eq_rows = [name for name in row_order if row_sense[name] == "E"]
    ub_index = {name: i for i, name in enumerate(ub_rows)}
    eq_index = {name: i for i, name in enumerate(eq_rows)}
    b_ub = np.zeros(len(ub_rows))
    for name in ub_rows:
        sign = 1.0 if row_sense[name] == "L" else -1.0
        b_ub[ub_index[name]] = sign * b[row_index[name]]
    b_eq = np.array([b[row_index[name]] for name in eq_rows])

    for row, col, value in entries:
        if row_sense[row] == "E":
            data_eq.append(value)
            rows_eq.append(eq_index[row])
            cols_eq.append(cols[col])
        else:
            sign = 1.0 if row_sense[row] == "L" else -1.0
            data.append(sign * value)
            rows_ub.append(ub_index[row])
            cols_ub.append(cols[col])

    a_ub = coo_matrix((data, (rows_ub, cols_ub)), shape=(len(ub_rows), n)) if ub_rows else None
    a_eq = coo_matrix((data_eq, (rows_eq, cols_eq)), shape=(len(eq_rows), n)) if eq_rows else None
    bnds = [bounds.get(col, (0.0, np.inf)) for col in col_order]
    return c, a_ub, b_ub if ub_rows else None, a_eq, b_eq if eq_rows else None, bnds


def main():
    if len(sys.argv) != 2:
        print(__doc__, file=sys.stderr)
        return 2
    c, a_ub, b_ub, a_eq, b_eq, bounds = parse_mps(sys.argv[1])
    result = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if not result.success:
        print(f"solver failed: {result.message}", file=sys.stderr)
        return 1
    print(f"{result.fun:.12e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
