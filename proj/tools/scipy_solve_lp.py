#!/usr/bin/env python3
"""Reference external-solver bridge: solves an exported LP model with
scipy.optimize.milp (HiGHS) and writes the documented solution format.

Usage: scipy_solve_lp.py MODEL.lp SOLUTION.txt

Wire it up with:
    export RRR_EXT_SOLVER='python3 tools/scipy_solve_lp.py {model} {solution}'
"""

import sys

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp


def parse_terms(tokens, variables):
    """tokens like ['1', 'x1', '+', '5', 'x2'] or ['-', '3', 't', ...]"""
    coefs = {}
    sign = 1
    it = iter(tokens)
    for tok in it:
        if tok == "+":
            sign = 1
        elif tok == "-":
            sign = -1
        else:
            coef = sign * int(tok)
            name = next(it)
            idx = variables.setdefault(name, len(variables))
            coefs[idx] = coefs.get(idx, 0) + coef
            sign = 1
    return coefs


def parse_lp(path):
    variables = {}
    objective = {}
    rows = []  # (coefs, sense, rhs)
    free_vars = set()
    binaries = set()
    section = None
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("\\"):
                continue
            lower = line.lower()
            if lower in ("minimize", "maximize"):
                section = "objective"
                if lower == "maximize":
                    raise SystemExit("only minimization models are produced")
                continue
            if lower == "subject to":
                section = "rows"
                continue
            if lower == "bounds":
                section = "bounds"
                continue
            if lower == "binaries":
                section = "binaries"
                continue
            if lower == "end":
                break
            if section == "objective":
                body = line.split(":", 1)[1]
                objective.update(parse_terms(body.split(), variables))
            elif section == "rows":
                name, body = line.split(":", 1)
                tokens = body.split()
                sense_pos = next(i for i, t in enumerate(tokens) if t in ("<=", ">=", "="))
                coefs = parse_terms(tokens[:sense_pos], variables)
                rows.append((coefs, tokens[sense_pos], int(tokens[sense_pos + 1])))
            elif section == "bounds":
                tokens = line.split()
                if len(tokens) == 2 and tokens[1] == "free":
                    free_vars.add(tokens[0])
                else:
                    raise SystemExit(f"unsupported bound line: {line}")
            elif section == "binaries":
                binaries.update(line.split())
    return variables, objective, rows, free_vars, binaries


def main():
    if len(sys.argv) != 3:
        raise SystemExit(__doc__)
    model_path, solution_path = sys.argv[1], sys.argv[2]
    variables, objective, rows, free_vars, binaries = parse_lp(model_path)

    nvar = len(variables)
    c = np.zeros(nvar)
    for idx, coef in objective.items():
        c[idx] = coef

    data, ri, ci, lo, hi = [], [], [], [], []
    for rno, (coefs, sense, rhs) in enumerate(rows):
        for idx, coef in coefs.items():
            ri.append(rno)
            ci.append(idx)
            data.append(coef)
        lo.append(rhs if sense in (">=", "=") else -np.inf)
        hi.append(rhs if sense in ("<=", "=") else np.inf)
    amat = sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), nvar))

    lb = np.zeros(nvar)
    ub = np.full(nvar, np.inf)
    integrality = np.zeros(nvar)
    for name, idx in variables.items():
        if name in binaries:
            ub[idx] = 1
            integrality[idx] = 1
        elif name in free_vars:
            lb[idx] = -np.inf

    res = milp(
        c=c,
        constraints=LinearConstraint(amat, lo, hi),
        integrality=integrality,
        bounds=Bounds(lb, ub),
    )

    with open(solution_path, "w") as out:
        if res.status != 0 or res.x is None:
            out.write("#status infeasible\n" if res.status == 2 else "#status unknown\n")
            return
        out.write("#status optimal\n")
        for name, idx in sorted(variables.items(), key=lambda kv: kv[1]):
            value = res.x[idx]
            snapped = round(value)
            if abs(value - snapped) < 1e-7:
                value = snapped
            out.write(f"{name} {value:.10g}\n")


if __name__ == "__main__":
    main()
