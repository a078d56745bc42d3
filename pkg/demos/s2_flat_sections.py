"""Flat sections and the R-matrix of the quantum connection of the two-sphere.

The connection is d/du + mu/u + c1*/u^2 on the basis (1, H).  Its residue c1*
has eigenvalues -2 and 2 with eigenvectors v = H - 1 and w = 1 + H.  This
script solves u^2 nabla s = 2 s starting from w, prints the coefficients in
the (v, w) frame, then shows that the R-matrix columns are flat.
"""
from __future__ import annotations

import argparse

from tecalc.connection import apply_connection
from tecalc.normalform import rmatrix_from_grading
from tecalc.quantum import eigenframe_data, flat_sections_ode, quantum_structure, teleman_rmatrix
from tecalc.scalars import format_scalar
from tecalc.series import MatrixSeries


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--order", type=int, default=6)
    args = parser.parse_args()
    N = args.order

    Q = quantum_structure("s2", N + 2)
    C, xi, mu = eigenframe_data(Q)
    Cinv = C.inverse()

    print("flat section for w = 2, coefficients (beta_n, alpha_n) in the (v, w) frame")
    sec = flat_sections_ode(Q, 2, [1, 1], N).section
    for n in range(N + 1):
        beta, alpha = (Cinv @ sec[n]).col(0)
        print(f"  n={n}: beta={format_scalar(beta):>14}  alpha={format_scalar(alpha):>14}"
              f"  beta/alpha={format_scalar(beta / alpha) if alpha else '-'}")

    R = teleman_rmatrix(Q, N).P
    frame = MatrixSeries.constant(C, N) @ R
    flat = apply_connection(Q.E.truncate(N), frame) == frame @ MatrixSeries.constant(xi, N)
    print(f"\ncolumns of C R are flat to order {N}: {flat}")
    print("R_1 =", [[format_scalar(x) for x in row] for row in R[1].rows])

    G = rmatrix_from_grading(xi, mu, N).P
    print("grading-convention R is the inverse:", G @ R == MatrixSeries.identity(2, N))


if __name__ == "__main__":
    main()
