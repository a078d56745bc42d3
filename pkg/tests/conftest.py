from __future__ import annotations

import random
import sys
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from tecalc.connection import EStructure, gauge_transform
from tecalc.levelt import block_diagonalize, is_block_diagonal
from tecalc.linalg import Matrix
from tecalc.series import MatrixSeries

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))
nonzero_fractions = fractions.filter(lambda q: q != 0)


def series_coeffs(order: int):
    return st.lists(fractions, min_size=order + 1, max_size=order + 1)


def matrices(n: int):
    return st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=n, max_size=n).map(Matrix)


def random_matrix(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> Matrix:
    return Matrix([[Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for _ in range(n)]
                   for _ in range(n)])


def random_unimodular(rng: random.Random, n: int) -> Matrix:
    """Integer matrix with determinant 1 (product of elementary matrices)."""
    M = Matrix.identity(n)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        E = Matrix.identity(n).with_entry(i, j, rng.choice([-2, -1, 1, 2]))
        M = M @ E
    return M


def jordan_matrix(rng: random.Random, sizes_and_values) -> Matrix:
    blocks = []
    for size, w in sizes_and_values:
        B = Matrix.scalar(size, w)
        for i in range(size - 1):
            B = B.with_entry(i, i + 1, 1)
        blocks.append(B)
    return Matrix.block_diag(blocks)


def random_levelt_structure(rng: random.Random, order: int = 8, values=None,
                            max_rank: int = 5) -> EStructure:
    """Residue with integer spectrum (Jordan blocks allowed), rank at most ``max_rank``.

    ``values`` fixes the distinct eigenvalues; by default they are drawn from -4..4.
    """
    if values is None:
        n = rng.randint(2, max_rank)
        values = rng.sample(range(-4, 5), rng.randint(2, n))
    else:
        n = rng.randint(len(values), max_rank)
    sizes = [1] * len(values)
    for _ in range(n - len(values)):
        sizes[rng.randrange(len(values))] += 1
    parts = list(zip(sizes, values))
    J = jordan_matrix(rng, parts)
    S = random_unimodular(rng, n)
    A0 = S @ J @ S.inverse()
    return EStructure(MatrixSeries([A0] + [random_matrix(rng, n, -2, 2) for _ in range(order)]))


def check_decomposition(E: EStructure, N: int = 8):
    dec = block_diagonalize(E, N)
    blocks = dec.blocks
    C = dec.eigen.C
    # constant term of the gauge is the eigen basis change
    assert dec.P[0] == C
    # u^2 nabla-invariance: every transformed coefficient is block diagonal
    assert all(is_block_diagonal(m, blocks) for m in dec.transformed.A.coeffs)
    # the transformed connection is the gauge transform
    assert dec.transformed.A == gauge_transform(dec.P, E.truncate(N)).A
    # residue blocks have single eigenvalues
    for w, sub in dec.block_structures():
        k = sub.rank
        assert ((sub.residue - Matrix.scalar(k, w)) ** k).is_zero()
    # A~_1 keeps the diagonal blocks of C^-1 A_1 C
    A1c = C.inverse() @ E.A[1] @ C
    for idx in blocks:
        assert dec.transformed.A[1].submatrix(idx, idx) == A1c.submatrix(idx, idx)
    # uniqueness: another admissible basis gives P'^-1 P block diagonal
    D = Matrix.block_diag([random_unimodular(random.Random(k), len(idx)).scale(k + 2)
                           for k, idx in enumerate(blocks)])
    other = block_diagonalize(E, N, C=C @ D)
    M = other.P.P.invert() @ dec.P.P
    assert all(is_block_diagonal(m, blocks) for m in M.coeffs)
    return dec


@pytest.fixture
def rng():
    return random.Random(20261018)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
