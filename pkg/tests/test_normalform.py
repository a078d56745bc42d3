from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given

from conftest import fractions, random_matrix
from tecalc.connection import (EStructure, Splitting, exponential_structure, gauge_transform,
                               twist)
from tecalc.levelt import block_diagonalize
from tecalc.linalg import Matrix
from tecalc.normalform import (Inconsistent, NonUnique, NonzeroSubleading, NoSolution,
                               NotSemisimple, ResidueNotScalar, check_splitting_kind,
                               flatten_scalar_block, isomorphism_solver, lookahead_stable,
                               rmatrix_from_grading, semisimple_splitting, semisimplify)
from tecalc.quantum import (eigenframe_data, flat_sections_ode, gw_splitting,
                            quadric_frame_matrices, quantum_structure, teleman_rmatrix)
from tecalc.series import MatrixSeries


def quadric_pair(order: int = 11):
    mats = quadric_frame_matrices()
    E1 = EStructure(MatrixSeries([mats["J"], mats["N"]], order))
    E2 = EStructure(MatrixSeries([mats["J"], mats["M"]], order))
    return E1, E2


# ---------------------------------------------------------------- flatten
def test_flatten_already_flat_is_identity():
    res = flatten_scalar_block(exponential_structure(5, 6))
    assert res.Q.P == MatrixSeries.identity(1, 6)
    assert res.certificate and res.w == 5


@given(fractions, fractions)
def test_flatten_rank_one_constant_term(w, c):
    E = EStructure.from_coefficients([[[w]], [[0]], [[c]]] + [[[0]]] * 4)
    res = flatten_scalar_block(E, 5)
    assert res.Q.P[1] == Matrix([[-c]])
    assert res.certificate
    assert gauge_transform(res.Q, E.truncate(5)).A == MatrixSeries.constant(Matrix([[w]]), 5)


def test_flatten_s2_block_matches_flat_section():
    Q = quantum_structure("s2", 11)
    dec = block_diagonalize(Q.E, 11)
    w, block = dec.block_structures()[1]
    assert w == 2
    res = flatten_scalar_block(block, 10)
    assert res.certificate
    (j,) = dec.blocks[1]
    P = dec.P.P.truncate(10)
    column = MatrixSeries([P[k].submatrix(range(2), [j]) for k in range(11)]) @ res.Q.P
    seed = column[0].col(0)
    section = flat_sections_ode(Q, 2, seed, 10).section
    assert column == section


def test_flatten_preconditions():
    with pytest.raises(ResidueNotScalar):
        flatten_scalar_block(quantum_structure("s2", 3).E)
    E = EStructure.from_coefficients([[[1, 0], [0, 1]], [[0, 1], [0, 0]]])
    with pytest.raises(NonzeroSubleading):
        flatten_scalar_block(E)


def test_flatten_random_scalar_blocks(rng):
    for _ in range(5):
        w = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        A = [Matrix.scalar(3, w), Matrix.zeros(3)] + [random_matrix(rng, 3) for _ in range(6)]
        res = flatten_scalar_block(EStructure(MatrixSeries(A)), 6)
        assert res.certificate


# ---------------------------------------------------------------- semisimplify
def test_semisimplify_direct_sum_is_identity():
    E = EStructure.from_coefficients([Matrix.diag([-1, 3])] + [Matrix.zeros(2)] * 4)
    iso = semisimplify(E)
    assert iso.gauge.P == MatrixSeries.identity(2, 4)
    assert iso.weights == (-1, 3)


def test_semisimplify_s2_to_order_10():
    E = quantum_structure("s2", 11).E
    iso = semisimplify(E, 10)
    assert iso.weights == (-2, 2) and iso.certificate
    assert gauge_transform(iso.gauge, E.truncate(10)).A == \
        MatrixSeries.constant(Matrix.diag([-2, 2]), 10)


def test_semisimplify_quadric_not_semisimple():
    with pytest.raises(NotSemisimple):
        semisimplify(quantum_structure("quadric-intersection-cp5", 4).E)


def test_semisimplify_twist_shifts_weights():
    E = quantum_structure("s2", 7).E
    base = semisimplify(E, 6)
    moved = semisimplify(twist(E, 3), 6)
    assert moved.weights == tuple(w + 3 for w in base.weights)
    assert moved.gauge.P == base.gauge.P


# ---------------------------------------------------------------- R from grading
def test_rmatrix_from_zero_grading_is_identity():
    R = rmatrix_from_grading(Matrix.diag([-2, 2]), Matrix.zeros(2), 5)
    assert R.P == MatrixSeries.identity(2, 5)


def test_rmatrix_from_grading_s2_first_order():
    half = Fraction(1, 2)
    R = rmatrix_from_grading(Matrix.diag([-2, 2]), Matrix([[0, half], [half, 0]]), 3).P
    assert R[1] == Matrix([[Fraction(-1, 16), Fraction(-1, 8)], [Fraction(1, 8), Fraction(1, 16)]])


def test_rmatrix_from_grading_recursion_holds():
    Q = quantum_structure("s2", 8)
    _, xi, mu = eigenframe_data(Q)
    R = rmatrix_from_grading(xi, mu, 8).P
    for k in range(8):
        assert xi @ R[k + 1] - R[k + 1] @ xi == R[k] @ (mu - Matrix.scalar(2, k))


def test_rmatrix_conventions_are_mutually_inverse():
    Q = quantum_structure("s2", 8)
    _, xi, mu = eigenframe_data(Q)
    G = rmatrix_from_grading(xi, mu, 6).P
    T = teleman_rmatrix(Q, 6).P
    assert G @ T == MatrixSeries.identity(2, 6)
    assert T @ G == MatrixSeries.identity(2, 6)


def test_rmatrix_from_grading_rejects_diagonal_mu():
    with pytest.raises(Inconsistent):
        rmatrix_from_grading(Matrix.diag([-2, 2]), Matrix.diag([1, 0]), 3)


def test_rmatrix_from_grading_independent_of_ordering():
    # swapping the eigenvalue order and conjugating back gives the same R
    half = Fraction(1, 2)
    mu = Matrix([[0, half], [half, 0]])
    S = Matrix([[0, 1], [1, 0]])
    R = rmatrix_from_grading(Matrix.diag([-2, 2]), mu, 5).P
    R2 = rmatrix_from_grading(Matrix.diag([2, -2]), S @ mu @ S, 5).P
    Sser = MatrixSeries.constant(S, 5)
    assert Sser @ R2 @ Sser == R


# ---------------------------------------------------------------- isomorphisms
def test_isomorphism_of_equal_exponentials_is_identity():
    E = exponential_structure(4, 6)
    res = isomorphism_solver(E, E, 5)
    assert res.kernel_dimension == 0
    assert res.R.P == MatrixSeries.identity(1, 5)


def test_isomorphism_recovers_random_rmatrix(rng):
    E1 = EStructure(MatrixSeries([Matrix.diag([-1, 1, 4])] +
                                 [random_matrix(rng, 3) for _ in range(7)]))
    R = MatrixSeries([Matrix.identity(3)] + [random_matrix(rng, 3) for _ in range(7)])
    E2 = gauge_transform(R, E1)
    res = isomorphism_solver(E1, E2, 5)
    assert res.kernel_dimension == 0
    assert res.R.P == R.truncate(5)


def test_quadric_pair_first_order_entries():
    E1, E2 = quadric_pair()
    res = isomorphism_solver(E1, E2, 8, 2)
    R1 = res.R.P[1]
    assert res.kernel_dimension == 0
    assert R1[0, 1] == Fraction(-1, 12)
    assert R1[2, 1] == Fraction(1, 2)
    assert R1[1, 0] == Fraction(3, 32)
    mats = quadric_frame_matrices()
    # u^2 R' = R A2 - A1 R at every order
    assert gauge_transform(res.R, E1.truncate(8)).A == MatrixSeries([mats["J"], mats["M"]], 8)


def test_quadric_pair_lookahead_stable():
    E1, E2 = quadric_pair(10)
    assert lookahead_stable(E1, E2, 6, 2)


def test_isomorphism_no_solution():
    with pytest.raises(NoSolution):
        isomorphism_solver(exponential_structure(-2, 4), exponential_structure(2, 4), 3)


def test_isomorphism_nonunique_reports_dimension():
    E = EStructure(MatrixSeries([Matrix.zeros(2), Matrix([[0, 0], [0, 1]])], 4))
    with pytest.raises(NonUnique) as info:
        isomorphism_solver(E, E, 2)
    assert info.value.dimension > 0
    res = isomorphism_solver(E, E, 2, allow_nonunique=True)
    assert res.kernel_dimension == info.value.dimension
    assert gauge_transform(res.R, E.truncate(2)).A == E.truncate(2).A


# ---------------------------------------------------------------- splitting kinds
def test_canonical_splitting_of_exponential():
    E = exponential_structure(Fraction(-3, 2), 6)
    flags = check_splitting_kind(Splitting.constant(1, 6), E, omega=[1])
    assert flags.homogeneous and flags.p_compatible and flags.omega_compatible
    assert flags.block_preserving and flags.omega_weight == 0


def test_gw_splitting_on_s2():
    Q = quantum_structure("s2", 8)
    flags = check_splitting_kind(gw_splitting(Q), Q.E)
    assert flags.homogeneous and flags.p_compatible
    assert not flags.block_preserving


def test_semisimple_splitting_on_s2():
    Q = quantum_structure("s2", 9)
    s = semisimple_splitting(Q.E, 8)
    flags = check_splitting_kind(s, Q.E, N=7)
    assert flags.homogeneous and flags.block_preserving


def test_omega_compatibility_detects_weight():
    Q = quantum_structure("s2", 6)
    # the unit has grading -1/2 and is not an eigenvector of mu in general
    flags = check_splitting_kind(gw_splitting(Q), Q.E, omega=[1, 0])
    assert flags.omega_compatible and flags.omega_weight == Fraction(-1, 2)
    flags = check_splitting_kind(gw_splitting(Q), Q.E, omega=[1, 1])
    assert flags.omega_compatible is False
