from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from conftest import (check_decomposition, jordan_matrix, random_levelt_structure, random_matrix,
                      random_unimodular)
from tecalc.connection import EStructure, exponential_structure, gauge_transform
from tecalc.levelt import (IrrationalSpectrum, block_diagonalize, eigenvalues,
                           generalized_eigenblocks, hom_solver, sylvester_offdiag_solve)
from tecalc.linalg import Matrix
from tecalc.quantum import quadric_frame_matrices, quantum_structure
from tecalc.scalars import GaussianRational
from tecalc.series import MatrixSeries


def test_s2_eigenblocks():
    data = generalized_eigenblocks(Matrix([[0, 2], [2, 0]]))
    assert data.eigenvalues == [-2, 2]
    # columns proportional to H - 1 and 1 + H
    c0, c1 = data.C.col(0), data.C.col(1)
    assert c0[0] == -c0[1] and c1[0] == c1[1]


def test_diagonal_input_gives_identity():
    assert generalized_eigenblocks(Matrix.diag([-1, 0, 3])).C == Matrix.identity(3)


def test_quadric_eigenblocks_span_reference_basis():
    Q = quantum_structure("quadric-intersection-cp5", 2)
    data = generalized_eigenblocks(Q.c1)
    assert [(b.eigenvalue, b.multiplicity) for b in data.blocks] == [(-8, 1), (0, 2), (8, 1)]
    P = quadric_frame_matrices()["P"]
    for blk in data.blocks:
        idx = list(blk.indices)
        ours = data.C.submatrix(range(4), idx)
        theirs = P.submatrix(range(4), idx)
        joint = Matrix([list(r) + list(s) for r, s in zip(ours.rows, theirs.rows)])
        assert joint.rank() == len(idx)


def test_irrational_spectrum():
    with pytest.raises(IrrationalSpectrum):
        generalized_eigenblocks(Matrix([[0, 2], [1, 0]]))
    with pytest.raises(IrrationalSpectrum):
        eigenvalues(Matrix([[0, -1], [1, 0]]), "Q")


def test_gaussian_spectrum():
    ev = eigenvalues(Matrix([[0, -1], [1, 0]]), "Q(i)")
    assert sorted(str(w) for w, _ in ev) == sorted([str(GaussianRational(0, -1)),
                                                   str(GaussianRational(0, 1))])


def test_sylvester_zero():
    A0 = Matrix.diag([-2, 2])
    assert sylvester_offdiag_solve(A0, Matrix.zeros(2)).is_zero()


def test_sylvester_two_by_two():
    T = sylvester_offdiag_solve(Matrix.diag([-2, 2]), Matrix([[0, 1], [1, 0]]))
    assert T == Matrix([[0, Fraction(-1, 4)], [Fraction(1, 4), 0]])


def test_sylvester_random_blocks(rng):
    for _ in range(5):
        J = jordan_matrix(rng, [(2, -1), (1, 2), (2, 3)])
        blocks = [[0, 1], [2], [3, 4]]
        Cm = random_matrix(rng, 5)
        for idx in blocks:
            for i in idx:
                for j in idx:
                    Cm = Cm.with_entry(i, j, 0)
        T = sylvester_offdiag_solve(J, Cm, blocks)
        assert J @ T - T @ J == Cm
        assert all(T.submatrix(idx, idx).is_zero() for idx in blocks)


def test_already_block_diagonal():
    E = EStructure.from_coefficients([Matrix.diag([-1, 2])] + [Matrix.diag([3, 4])] * 4)
    dec = block_diagonalize(E, 4)
    assert dec.P.P == MatrixSeries.identity(2, 4)
    assert all(T.is_zero() for T in dec.T)


def test_s2_blocks():
    dec = check_decomposition(quantum_structure("s2", 8).E)
    structs = dec.block_structures()
    assert [w for w, _ in structs] == [-2, 2]
    for w, sub in structs:
        assert sub.rank == 1 and sub.residue == Matrix([[w]]) and sub.A[1].is_zero()


def test_quadric_blocks_match_reference_frame():
    Q = quantum_structure("quadric-intersection-cp5", 8)
    mats = quadric_frame_matrices()
    dec = block_diagonalize(Q.E, 8, C=mats["P"])
    assert [s.rank for _, s in dec.block_structures()] == [1, 2, 1]
    assert dec.transformed.residue == mats["J"]


def test_random_levelt_structures(rng):
    for _ in range(6):
        check_decomposition(random_levelt_structure(rng))


def test_hom_disjoint_exponentials_is_zero():
    space = hom_solver(exponential_structure(-2, 6), exponential_structure(2, 6), 5)
    assert space.dimension == 0


def test_hom_exponential_endomorphisms_are_constants():
    E = exponential_structure(3, 6)
    space = hom_solver(E, E, 5)
    assert space.dimension == 1
    F = space.basis[0]
    assert all(F[k].is_zero() for k in range(1, 6))


def _sympy_hom_dimension(E1, E2, K, N):
    """Independent dense oracle for the dimension of the projected hom space."""
    r = E1.rank
    size = r * r
    syms = sympy.symbols(f"f0:{(K + 1) * size}")

    def F(k):
        return sympy.Matrix(r, r, syms[k * size:(k + 1) * size])

    def sm(M):
        return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row]
                             for row in M.rows])

    eqs = []
    for k in range(K + 1):
        lhs = (k - 1) * F(k - 1) if k >= 1 else sympy.zeros(r, r)
        for j in range(k + 1):
            lhs -= F(j) * sm(E1.A[k - j]) - sm(E2.A[k - j]) * F(j)
        eqs.extend(list(lhs))
    M = sympy.Matrix([[sympy.diff(e, s) for s in syms] for e in eqs])
    kernel = M.nullspace()
    if not kernel:
        return 0
    proj = sympy.Matrix.hstack(*[v[:(N + 1) * size, :] for v in kernel])
    return proj.rank()


def test_hom_gauge_equivalent_pair_contains_gauge(rng):
    for _ in range(3):
        E1 = EStructure(MatrixSeries([Matrix.diag([-1, 2])] + [random_matrix(rng, 2) for _ in range(4)]))
        P = MatrixSeries([random_unimodular(rng, 2)] + [random_matrix(rng, 2) for _ in range(4)])
        E2 = gauge_transform(P, E1)
        space = hom_solver(E1, E2, 2)
        assert space.dimension == _sympy_hom_dimension(E1, E2, 4, 2) == 2
        Finv = P.invert().truncate(2)

        def flat(S):
            return [x for m in S.coeffs for x in m.entries()]

        base = Matrix([flat(b) for b in space.basis])
        assert Matrix([flat(b) for b in space.basis] + [flat(Finv)]).rank() == base.rank()
