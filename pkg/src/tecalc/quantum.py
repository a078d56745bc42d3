"""Quantum E-structures ``d/du + mu/u + c1*/u^2`` and the shipped presets."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .connection import EStructure, GaugeSeries, GradingData, Polarization, Splitting
from .levelt import (_projected_basis, diag_part, generalized_eigenblocks, offdiag_part,
                     sylvester_offdiag_solve, system_depth)
from .linalg import InconsistentSystemError, Matrix, solve_sparse_system
from .normalform import NotSemisimple
from .series import MatrixSeries

__all__ = [
    "BadGrading",
    "UnknownPreset",
    "MuPropertyFailed",
    "Obstructed",
    "QuantumData",
    "QuantumEStructure",
    "FlatSection",
    "PRESETS",
    "build_quantum",
    "preset",
    "quantum_structure",
    "eigenframe_data",
    "teleman_rmatrix",
    "flat_sections_ode",
    "gw_splitting",
    "quadric_frame_matrices",
]


class BadGrading(ValueError):
    pass


class UnknownPreset(KeyError):
    pass


class MuPropertyFailed(ArithmeticError):
    """The grading operator has a nonzero diagonal block in an eigenframe of c1*."""


class Obstructed(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuantumData:
    name: str
    labels: tuple[str, ...]
    degrees: tuple[int, ...]
    dim: int
    c1: Matrix
    pairing: Matrix
    mu: Matrix | None = None
    eigenbasis: Matrix | None = None

    @property
    def rank(self) -> int:
        return len(self.labels)

    def expected_mu(self) -> Matrix:
        return Matrix.diag([Fraction(p - self.dim, 2) for p in self.degrees])

    def grading(self) -> Matrix:
        return self.expected_mu() if self.mu is None else self.mu


@dataclass(frozen=True)
class QuantumEStructure:
    E: EStructure
    data: QuantumData

    @property
    def c1(self) -> Matrix:
        return self.E.A[0]

    @property
    def mu(self) -> Matrix:
        return self.data.grading()


def build_quantum(data: QuantumData, order: int = 10, sesquilinear: bool = True) -> QuantumEStructure:
    """Connection with ``A_0 = c1*``, ``A_1 = mu`` and ``A_i = 0`` beyond, plus the pairing."""
    n = data.rank
    if len(data.degrees) != n:
        raise BadGrading("one degree per basis element is required")
    if data.c1.shape != (n, n) or data.pairing.shape != (n, n):
        raise ValueError("c1* and pairing must be square of the basis size")
    if data.mu is not None and data.mu != data.expected_mu():
        raise BadGrading("mu must be diag((p - n)/2) for the basis degrees")
    if not data.pairing.is_invertible():
        raise ValueError("Poincare pairing is degenerate")
    if (data.pairing @ data.c1).T != data.pairing @ data.c1:
        raise ValueError("c1* is not self-adjoint for the pairing")
    mu = data.grading()
    A = MatrixSeries([data.c1, mu], max(order, 1))
    E = EStructure(A, Polarization(data.pairing, sesquilinear), GradingData(mu),
                   label=data.name)
    return QuantumEStructure(E, data)


def _s2() -> QuantumData:
    return QuantumData(
        name="s2",
        labels=("1", "H"),
        degrees=(0, 2),
        dim=1,
        c1=Matrix([[0, 2], [2, 0]]),
        pairing=Matrix([[0, 1], [1, 0]]),
        mu=Matrix.diag([Fraction(-1, 2), Fraction(1, 2)]),
        # v = H - 1, w = 1 + H
        eigenbasis=Matrix([[-1, 1], [1, 1]]),
    )


def _quadric() -> QuantumData:
    return QuantumData(
        name="quadric-intersection-cp5",
        labels=("1", "H", "H^2", "H^3"),
        degrees=(0, 2, 4, 6),
        dim=3,
        c1=Matrix([[0, 8, 0, 32], [2, 0, 16, 0], [0, 2, 0, 8], [0, 0, 2, 0]]),
        pairing=Matrix([[0, 0, 0, 4], [0, 0, 4, 0], [0, 4, 0, 0], [4, 0, 0, 0]]),
        mu=Matrix.diag([Fraction(-3, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2)]),
    )


def _point() -> QuantumData:
    return QuantumData(name="point", labels=("1",), degrees=(0,), dim=0,
                       c1=Matrix([[0]]), pairing=Matrix([[1]]), mu=Matrix([[0]]))


PRESETS = {"s2": _s2, "quadric-intersection-cp5": _quadric, "point": _point}


def preset(name: str) -> QuantumData:
    try:
        return PRESETS[name]()
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def quantum_structure(name: str, order: int = 10) -> QuantumEStructure:
    return build_quantum(preset(name), order)


def quadric_frame_matrices() -> dict[str, Matrix]:
    """Basis change ``P`` to generalized eigenvectors and the connection pieces ``J, M, N``."""
    h = Fraction(1, 2)
    return {
        "P": Matrix([[1, 0, 1, 1],
                     [Fraction(-3, 4), Fraction(2, 3), 0, Fraction(3, 4)],
                     [Fraction(1, 4), 0, Fraction(-1, 12), Fraction(1, 4)],
                     [Fraction(-1, 16), Fraction(-1, 6), 0, Fraction(1, 16)]]),
        "J": Matrix([[-8, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 8]]),
        "M": Matrix([[0, Fraction(2, 3), Fraction(-1, 4), 0],
                     [Fraction(9, 16), 1, 0, Fraction(-9, 16)],
                     [Fraction(-3, 2), 0, -1, Fraction(-3, 2)],
                     [0, Fraction(-2, 3), Fraction(-1, 4), 0]]),
        "N": Matrix.diag([0, h, -h, 0]),
    }


def _eigenframe(Q: QuantumEStructure, eigenbasis: Matrix | None) -> Matrix:
    if eigenbasis is not None:
        return eigenbasis
    if Q.data.eigenbasis is not None:
        return Q.data.eigenbasis
    eig = generalized_eigenblocks(Q.c1)
    for blk in eig.blocks:
        if any(length > 1 for length in blk.chain_lengths):
            raise NotSemisimple(f"c1* is not diagonalizable at eigenvalue {blk.eigenvalue}")
    return eig.C


def eigenframe_data(Q: QuantumEStructure, eigenbasis: Matrix | None = None):
    """``(C, xi, mu)``: an eigenbasis of ``c1*`` and ``c1*``, ``mu`` written in it."""
    C = _eigenframe(Q, eigenbasis)
    Cinv = C.inverse()
    return C, Cinv @ Q.c1 @ C, Cinv @ Q.mu @ C


def teleman_rmatrix(Q: QuantumEStructure, N: int,
                    eigenbasis: Matrix | None = None) -> GaugeSeries:
    """``R`` in an eigenbasis of ``c1*`` with ``[xi, R_{i+1}] + (mu + i) R_i = 0``.

    ``xi`` and ``mu`` are ``c1*`` and the grading written in the eigenbasis
    (columns of ``eigenbasis``; the preset's own eigenbasis by default).  The
    columns of ``eigenbasis @ R`` are then flat: ``u^2 nabla = w``.  Diagonal
    entries are pinned by ``diag(R_i) = -diag(mu R_i^off) / i``.
    """
    C = _eigenframe(Q, eigenbasis)
    Cinv = C.inverse()
    xi = Cinv @ Q.c1 @ C
    if offdiag_part(xi, [[i] for i in range(xi.nrows)]) != Matrix.zeros(xi.nrows):
        raise NotSemisimple("eigenbasis does not diagonalize c1*")
    mu = Cinv @ Q.mu @ C
    n = xi.nrows
    values = [xi[i, i] for i in range(n)]
    groups: dict = {}
    for i, w in enumerate(values):
        groups.setdefault(w, []).append(i)
    blocks = list(groups.values())
    if not offdiag_part(mu, blocks) == mu:
        raise MuPropertyFailed("mu has a nonzero diagonal block in the eigenframe of c1*")
    Rs = [Matrix.identity(n)]
    for i in range(N):
        rhs = -((mu + Matrix.scalar(n, i)) @ Rs[i])
        off = sylvester_offdiag_solve(xi, rhs, blocks)
        dg = diag_part(mu @ off, blocks).scale(Fraction(-1, i + 1))
        Rs.append(off + dg)
    return GaugeSeries(MatrixSeries(Rs), rmatrix=True)


@dataclass(frozen=True)
class FlatSection:
    w: object
    section: MatrixSeries
    kernel_dimension: int = 0


def flat_sections_ode(Q: QuantumEStructure | EStructure, w, seed: Sequence, N: int,
                      lookahead: int = 2) -> FlatSection:
    """Solve ``u^2 nabla v = w v`` with ``v_0 = seed`` to order ``N``.

    Order ``k`` reads ``(A_0 - w) v_k = -(k-1) v_{k-1} - sum_{j>=1} A_j v_{k-j}``;
    orders beyond ``N`` (see :func:`tecalc.levelt.system_depth`) are solved
    together so that components in the kernel of ``A_0 - w`` are fixed by the
    later equations.
    """
    E = Q.E if isinstance(Q, QuantumEStructure) else Q
    seed_col = Matrix.column(seed)
    r = E.rank
    K = system_depth(N, lookahead, E.order)
    A0w = E.A[0] - Matrix.scalar(r, w)
    if not (A0w @ seed_col).is_zero():
        raise Obstructed("seed is not an eigenvector of the residue for w")

    def var(k, i):
        return (k - 1) * r + i

    rows, rhs = [], []
    for k in range(1, K + 1):
        for i in range(r):
            row: dict = {}
            b = Fraction(0)
            for l in range(r):
                if A0w[i, l]:
                    row[var(k, l)] = A0w[i, l]
            # (k-1) v_{k-1} + sum_{j>=1} A_j v_{k-j}
            if k - 1 >= 1:
                row[var(k - 1, i)] = row.get(var(k - 1, i), 0) + (k - 1)
            for j in range(1, k + 1):
                Aj = E.A[j]
                for l in range(r):
                    if not Aj[i, l]:
                        continue
                    if k - j == 0:
                        b -= Aj[i, l] * seed_col[l, 0]
                    else:
                        row[var(k - j, l)] = row.get(var(k - j, l), 0) + Aj[i, l]
            rows.append({c: v for c, v in row.items() if v})
            rhs.append(b)
    try:
        sol, kernel = solve_sparse_system(rows, rhs, K * r)
    except InconsistentSystemError as exc:
        raise Obstructed(f"u^2 nabla v = {w} v has no solution with this seed") from exc
    dim = len(_projected_basis(kernel, N * r))
    coeffs = [seed_col]
    for k in range(1, N + 1):
        coeffs.append(Matrix.column([sol.get(var(k, i), Fraction(0)) for i in range(r)]))
    return FlatSection(w, MatrixSeries(coeffs), dim)


def gw_splitting(Q: QuantumEStructure | EStructure) -> Splitting:
    """The constant splitting ``a -> a``."""
    E = Q.E if isinstance(Q, QuantumEStructure) else Q
    return Splitting.constant(E.rank, E.order)
