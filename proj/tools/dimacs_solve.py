#!/usr/bin/env python3
"""Minimal DIMACS front end for the python-sat CaDiCaL binding.

Usage: dimacs_solve.py [--conflicts N] FILE.cnf
Prints competition-style `s` and `v` lines; exits 10 (SAT), 20 (UNSAT) or
0 (UNKNOWN, conflict budget exhausted).
"""
import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--conflicts", type=int, default=0,
                        help="conflict budget; 0 means unlimited")
    parser.add_argument("cnf")
    args = parser.parse_args()

    formula = CNF(from_file=args.cnf)
    with Solver(name="cadical153", bootstrap_with=formula.clauses) as solver:
        if args.conflicts > 0:
            solver.conf_budget(args.conflicts)
            verdict = solver.solve_limited()
        else:
            verdict = solver.solve()
        if verdict is None:
            print("s UNKNOWN")
            return 0
        if not verdict:
            print("s UNSATISFIABLE")
            return 20
        model = solver.get_model() or []
    print("s SATISFIABLE")
    for start in range(0, len(model), 20):
        print("v " + " ".join(str(lit) for lit in model[start:start + 20]))
    print("v 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())
