#!/usr/bin/env python3
"""Run a DIMACS CNF file through python-sat and print a competition-style answer.

Usage: pysat-solve.py [--solver NAME] FILE

Prints `s SATISFIABLE` followed by `v` lines, or `s UNSATISFIABLE`.
Exit status follows the usual convention: 10 for SAT, 20 for UNSAT.
"""

import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--solver", default="cadical153")
    parser.add_argument("cnf")
    args = parser.parse_args()

    formula = CNF(from_file=args.cnf)
    with Solver(name=args.solver, bootstrap_with=formula.clauses) as solver:
        if not solver.solve():
            print("s UNSATISFIABLE")
            return 20
        model = solver.get_model()
    print("s SATISFIABLE")
    for start in range(0, len(model), 20):
        print("v " + " ".join(str(lit) for lit in model[start:start + 20]))
    print("v 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())
