from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from math import factorial, prod

import pytest

from tecalc.connection import EStructure, apply_connection, gauge_transform
from tecalc.linalg import Matrix
from tecalc.normalform import NotSemisimple
from tecalc.quantum import (BadGrading, MuPropertyFailed, Obstructed, UnknownPreset,
                            build_quantum, eigenframe_data, flat_sections_ode, gw_splitting,
                            preset, quadric_frame_matrices, quantum_structure, teleman_rmatrix)
from tecalc.series import MatrixSeries


def s2_coordinates(w, N):
    """Flat section coefficients written in the (v, w) = (H - 1, 1 + H) frame."""
    Q = quantum_structure("s2", N + 2)
    C, _, _ = eigenframe_data(Q)
    seed = [1, 1] if w == 2 else [-1, 1]
    sec = flat_sections_ode(Q, w, seed, N).section
    Cinv = C.inverse()
    return [Cinv @ sec[k] for k in range(N + 1)]


def alpha_closed_form(n):
    return Fraction(prod(4 * j * j - 1 for j in range(n)), 16 ** n * factorial(n))


def test_presets_match_reference_data():
    s2 = preset("s2")
    assert s2.c1 == Matrix([[0, 2], [2, 0]])
    assert s2.grading() == Matrix.diag([Fraction(-1, 2), Fraction(1, 2)])
    quad = preset("quadric-intersection-cp5")
    assert quad.c1 == Matrix([[0, 8, 0, 32], [2, 0, 16, 0], [0, 2, 0, 8], [0, 0, 2, 0]])
    assert quad.grading() == Matrix.diag([Fraction(k, 2) for k in (-3, -1, 1, 3)])


@pytest.mark.parametrize("name", ["s2", "quadric-intersection-cp5", "point"])
def test_quantum_connection_shape(name):
    Q = quantum_structure(name, 6)
    assert Q.E.A[0] == Q.data.c1 and Q.E.A[1] == Q.mu
    assert all(Q.E.A[i].is_zero() for i in range(2, 7))
    assert Q.mu == Q.data.expected_mu()


def test_point_is_trivial():
    Q = quantum_structure("point", 4)
    assert Q.E.A.is_zero()
    assert teleman_rmatrix(Q, 4).P == MatrixSeries.identity(1, 4)
    sec = flat_sections_ode(Q, 0, [1], 4).section
    assert sec == MatrixSeries.constant(Matrix([[1]]), 4)


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        preset("cp7")


def test_bad_grading_rejected():
    with pytest.raises(BadGrading):
        build_quantum(replace(preset("s2"), mu=Matrix.diag([0, 0])))
    with pytest.raises(BadGrading):
        build_quantum(replace(preset("s2"), degrees=(0,)))


def test_non_self_adjoint_c1_rejected():
    with pytest.raises(ValueError):
        build_quantum(replace(preset("s2"), c1=Matrix([[1, 2], [2, 0]])))


def test_mu_property_in_eigenframe():
    _, xi, mu = eigenframe_data(quantum_structure("s2", 2))
    assert xi == Matrix.diag([-2, 2])
    assert mu[0, 0] == 0 and mu[1, 1] == 0


def test_mu_property_failure_detected():
    # a c1* whose eigenframe does not kill the diagonal of mu
    data = replace(preset("s2"), c1=Matrix.diag([1, 3]), pairing=Matrix.identity(2),
                   eigenbasis=None)
    with pytest.raises(MuPropertyFailed):
        teleman_rmatrix(build_quantum(data, 3), 3)


def test_teleman_rejects_jordan_block():
    with pytest.raises(NotSemisimple):
        teleman_rmatrix(quantum_structure("quadric-intersection-cp5", 3), 3)


def test_teleman_s2_first_orders():
    R = teleman_rmatrix(quantum_structure("s2", 4), 3).P
    assert R[1] == Matrix([[Fraction(1, 16), Fraction(1, 8)], [Fraction(-1, 8), Fraction(-1, 16)]])
    assert R[2] == Matrix([[Fraction(-3, 512), Fraction(3, 128)], [Fraction(3, 128), Fraction(-3, 512)]])


def test_teleman_columns_are_flat():
    Q = quantum_structure("s2", 8)
    C, xi, _ = eigenframe_data(Q)
    frame = MatrixSeries.constant(C, 6) @ teleman_rmatrix(Q, 6).P
    E = Q.E.truncate(6)
    lhs = apply_connection(E, frame)
    assert lhs == frame @ MatrixSeries.constant(xi, 6)


def test_flat_section_w2_recursions():
    coords = s2_coordinates(2, 10)
    beta = [c[0, 0] for c in coords]
    alpha = [c[1, 0] for c in coords]
    assert alpha[1] == Fraction(-1, 16) and beta[1] == Fraction(1, 8)
    for n in range(10):
        assert alpha[n + 1] == alpha[n] * (4 * n * n - 1) / (16 * (n + 1))
    for n in range(11):
        assert beta[n] == -2 * n * alpha[n]
        assert alpha[n] == alpha_closed_form(n)


def test_flat_section_minus_two_recursions():
    coords = s2_coordinates(-2, 10)
    delta = [c[0, 0] for c in coords]
    gamma = [c[1, 0] for c in coords]
    assert delta[1] == Fraction(1, 16) and gamma[1] == Fraction(-1, 8)
    for n in range(11):
        assert gamma[n] == -2 * n * delta[n]
        assert delta[n] == (-1) ** n * alpha_closed_form(n)


def test_flat_section_raw_coefficients():
    sec = flat_sections_ode(quantum_structure("s2", 4), 2, [1, 1], 2).section
    assert sec[1] == Matrix.column([Fraction(-3, 16), Fraction(1, 16)])
    assert sec[2] == Matrix.column([Fraction(-15, 512), Fraction(9, 512)])


def test_flat_section_bad_seed():
    with pytest.raises(Obstructed):
        flat_sections_ode(quantum_structure("s2", 4), 2, [1, 0], 2)


def test_flat_section_obstructed_without_mu_property():
    E = EStructure(MatrixSeries([Matrix.diag([1, 3]), Matrix.diag([1, 0])], 4))
    with pytest.raises(Obstructed):
        flat_sections_ode(E, 1, [1, 0], 3)


def test_gw_splitting_is_constant():
    Q = quantum_structure("quadric-intersection-cp5", 5)
    S = gw_splitting(Q)
    assert S.S == MatrixSeries.identity(4, 5)
    assert all(gauge_transform(S.S, Q.E).A[i].is_zero() for i in range(2, 6))


def test_quadric_frame_identities():
    mats = quadric_frame_matrices()
    Q = quantum_structure("quadric-intersection-cp5", 2)
    P = mats["P"]
    Pinv = P.inverse()
    assert Pinv @ Q.c1 @ P == mats["J"]
    assert Pinv @ Q.mu @ P == mats["M"]
