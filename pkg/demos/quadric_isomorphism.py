"""Intertwining two connections with the same Jordan residue.

For the intersection of two quadrics in CP^5 the residue c1* has a Jordan
block at eigenvalue 0.  In the generalized eigenbasis P the quantum connection
reads J/u^2 + M/u, while the model connection is J/u^2 + N/u.  The solver finds
the unique R = Id + u R_1 + ... carrying one to the other.
"""
from __future__ import annotations

import argparse
import time

from tecalc.connection import EStructure, gauge_transform
from tecalc.normalform import isomorphism_solver
from tecalc.quantum import quadric_frame_matrices, quantum_structure
from tecalc.scalars import format_scalar
from tecalc.series import MatrixSeries


def show(label, M):
    print(label)
    for row in M.rows:
        print("   ", "  ".join(f"{format_scalar(x):>10}" for x in row))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--order", type=int, default=4)
    parser.add_argument("--lookahead", type=int, default=2)
    args = parser.parse_args()

    mats = quadric_frame_matrices()
    Q = quantum_structure("quadric-intersection-cp5", 2)
    P = mats["P"]
    print("P^-1 c1 P == J:", P.inverse() @ Q.c1 @ P == mats["J"])
    print("P^-1 mu P == M:", P.inverse() @ Q.mu @ P == mats["M"])

    depth = args.order + args.lookahead + 1
    model = EStructure(MatrixSeries([mats["J"], mats["N"]], depth))
    target = EStructure(MatrixSeries([mats["J"], mats["M"]], depth))
    start = time.perf_counter()
    res = isomorphism_solver(model, target, args.order, args.lookahead)
    print(f"\nsolved to order {args.order} in {time.perf_counter() - start:.2f} s, "
          f"kernel dimension {res.kernel_dimension}")
    for k in range(1, min(args.order, 2) + 1):
        show(f"R_{k}:", res.R.P[k])
    moved = gauge_transform(res.R, model.truncate(args.order))
    print("gauge(R, model) equals the target:",
          moved.A == target.truncate(args.order).A)


if __name__ == "__main__":
    main()
