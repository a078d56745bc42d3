"""E-structures: formal connections ``d/du + u^-2 (A_0 + A_1 u + ...)``.

Frames are column frames.  If ``P(u)`` is an invertible matrix series whose
columns express new basis sections in the old basis, the connection matrix in
the new frame is ``P^-1 A P + P^-1 dP/du`` (see :func:`gauge_transform`).
Splittings and R-matrices use the same action, so a splitting ``s`` with
matrix ``S`` has connection matrix ``gauge_transform(S, E)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import Matrix
from .scalars import as_scalar
from .series import MatrixSeries, NotAUnit

__all__ = [
    "PoleOrderError",
    "Polarization",
    "GradingData",
    "EStructure",
    "GaugeSeries",
    "Splitting",
    "PolarizationReport",
    "gauge_transform",
    "splitting_change",
    "apply_connection",
    "twist",
    "exponential_structure",
    "check_polarization",
    "euler_te_extension",
    "rmatrix_between_splittings",
    "NotAUnit",
]


class PoleOrderError(ValueError):
    """Connection has a pole of order greater than two."""


@dataclass(frozen=True)
class Polarization:
    """Constant pairing ``G`` on the fibre.

    ``sesquilinear=True`` extends the pairing by ``(f a, g b) = f(u) g(-u) (a, b)``;
    ``False`` uses the plain u-linear extension.
    """

    G: Matrix
    sesquilinear: bool = True

    def __post_init__(self):
        if not self.G.is_square():
            raise ValueError("pairing matrix must be square")
        if self.G.T != self.G:
            raise ValueError("pairing matrix must be symmetric")
        if not self.G.is_invertible():
            raise ValueError("pairing matrix must be nondegenerate")


@dataclass(frozen=True)
class GradingData:
    """Grading operator ``mu`` and the Euler weight attached to a structure."""

    mu: Matrix
    weight: object = 0


@dataclass(frozen=True)
class EStructure:
    """Connection ``d/du + u^-2 sum_i A_i u^i`` known for ``i <= order``."""

    A: MatrixSeries
    polarization: Polarization | None = None
    grading: GradingData | None = None
    label: str = ""

    def __post_init__(self):
        r, c = self.A.shape
        if r != c:
            raise ValueError("connection coefficients must be square")
        if self.polarization is not None and self.polarization.G.nrows != r:
            raise ValueError("pairing rank does not match connection rank")

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, **kw) -> EStructure:
        mats = [c if isinstance(c, Matrix) else Matrix(c) for c in coeffs]
        return cls(MatrixSeries(mats), **kw)

    @classmethod
    def from_laurent(cls, coeffs: Sequence, lowest_power: int = -2, **kw) -> EStructure:
        """Build from coefficients of ``u^lowest_power, u^(lowest_power+1), ...``.

        Pole orders above two are rejected; a lower pole order is padded with zeros.
        """
        mats = [c if isinstance(c, Matrix) else Matrix(c) for c in coeffs]
        if lowest_power < -2:
            lead = -2 - lowest_power
            if any(not m.is_zero() for m in mats[:lead]):
                raise PoleOrderError(f"pole of order {-lowest_power} is not supported; "
                                     "only pole order at most 2 is allowed")
            mats = mats[lead:]
        elif lowest_power > -2:
            n = mats[0].nrows
            mats = [Matrix.zeros(n)] * (lowest_power + 2) + mats
        return cls(MatrixSeries(mats), **kw)

    @property
    def rank(self) -> int:
        return self.A.rank

    @property
    def order(self) -> int:
        return self.A.order

    @property
    def residue(self) -> Matrix:
        return self.A[0]

    def coefficient(self, i: int) -> Matrix:
        return self.A[i]

    def with_A(self, A: MatrixSeries) -> EStructure:
        return EStructure(A, self.polarization, self.grading, self.label)

    def truncate(self, order: int) -> EStructure:
        return self.with_A(self.A.truncate(order))


@dataclass(frozen=True)
class GaugeSeries:
    """Invertible matrix series; ``rmatrix`` marks the normalisation ``P_0 = Id``."""

    P: MatrixSeries
    rmatrix: bool = False

    def __post_init__(self):
        if not self.P[0].is_invertible():
            raise NotAUnit("gauge series needs an invertible constant term")
        if self.rmatrix and self.P[0] != Matrix.identity(self.P.rank):
            raise ValueError("an R-matrix must have constant term equal to the identity")

    @property
    def order(self) -> int:
        return self.P.order

    def __getitem__(self, k: int) -> Matrix:
        return self.P[k]

    def inverse(self) -> GaugeSeries:
        return GaugeSeries(self.P.invert(), self.rmatrix)

    def __matmul__(self, other: GaugeSeries) -> GaugeSeries:
        return GaugeSeries(self.P @ other.P, self.rmatrix and other.rmatrix)


@dataclass(frozen=True)
class Splitting:
    """Matrix series whose columns are the images ``s(e_j)`` of the fibre basis."""

    S: MatrixSeries

    def __post_init__(self):
        if self.S[0] != Matrix.identity(self.S.rank):
            raise ValueError("a splitting must reduce to the identity at u = 0")

    @classmethod
    def constant(cls, rank: int, order: int) -> Splitting:
        return cls(MatrixSeries.identity(rank, order))


def _series(P) -> MatrixSeries:
    if isinstance(P, GaugeSeries):
        return P.P
    if isinstance(P, Splitting):
        return P.S
    return P


def gauge_transform(P, E: EStructure) -> EStructure:
    """Connection in the frame given by the columns of ``P``: ``P^-1 A P + P^-1 P'``.

    The result is known to order ``min(E.order, P.order)``.
    """
    P = _series(P)
    if P.rank != E.rank:
        raise ValueError("gauge rank does not match connection rank")
    n = min(E.order, P.order)
    P = P.truncate(n)
    Pinv = P.invert()
    conj = Pinv @ E.A.truncate(n) @ P
    if n >= 2:
        # u^2 P^-1 P' starts at u^2
        conj = conj + (Pinv.truncate(n - 1) @ P.derivative()).shift(2).truncate(n)
    return EStructure(conj, _transported_polarization(P, E.polarization), E.grading, E.label)


def pulled_back_pairing(P: MatrixSeries, pol: Polarization) -> MatrixSeries:
    """Gram matrix series ``P(u)^T G P(-u)`` (sesquilinear) or ``P(u)^T G P(u)``."""
    other = P.substitute_neg() if pol.sesquilinear else P
    return P.transpose() @ pol.G @ other


def _transported_polarization(P: MatrixSeries, pol: Polarization | None) -> Polarization | None:
    # the pairing survives a frame change only when its Gram matrix stays constant
    if pol is None:
        return None
    gram = pulled_back_pairing(P, pol)
    if any(not m.is_zero() for m in gram.coeffs[1:]):
        return None
    return Polarization(gram[0], pol.sesquilinear)


def splitting_change(R, E: EStructure) -> EStructure:
    """Connection matrix of ``s2`` from that of ``s1``: ``R^-1 A R + R^-1 R'``.

    This is the same frame change as :func:`gauge_transform` with ``P = R``.
    """
    R = _series(R)
    if R[0] != Matrix.identity(R.rank):
        raise ValueError("an R-matrix must have constant term equal to the identity")
    return gauge_transform(R, E)


def apply_connection(E: EStructure, v: MatrixSeries) -> MatrixSeries:
    """``u^2 nabla v = u^2 v' + (sum_i A_i u^i) v`` for a column (or matrix) series ``v``.

    The result is known to order ``min(E.order, v.order)``.
    """
    n = min(E.order, v.order)
    out = E.A.truncate(n) @ v.truncate(n)
    if n >= 2:
        out = out + v.derivative().shift(2).truncate(n)
    return out


def twist(E: EStructure, w) -> EStructure:
    """Tensor with the rank-one structure ``d/du + w/u^2``."""
    w = as_scalar(w)
    cs = list(E.A.coeffs)
    cs[0] = cs[0] + Matrix.scalar(E.rank, w)
    return E.with_A(MatrixSeries(cs))


def exponential_structure(w, order: int) -> EStructure:
    """The rank-one polarized structure ``d/du + w/u^2`` with ``(1, 1) = 1``."""
    A = MatrixSeries([Matrix([[as_scalar(w)]])], order)
    return EStructure(A, Polarization(Matrix.identity(1)), label=f"exp({w})")


@dataclass(frozen=True)
class PolarizationReport:
    passed: bool
    order_checked: int
    first_failure: int | None = None
    residual: Matrix | None = None


def check_polarization(E: EStructure, order: int | None = None) -> PolarizationReport:
    """Check covariant constancy of the pairing order by order.

    For constant sections ``a, b`` the identity reduces to
    ``A_i^T G + s_i G A_i = 0`` with ``s_i = (-1)^(i-1)`` for the sesquilinear
    extension and ``s_i = 1`` for the u-linear one.
    """
    if E.polarization is None:
        raise ValueError("structure carries no polarization")
    G = E.polarization.G
    n = E.order if order is None else min(order, E.order)
    for i in range(n + 1):
        Ai = E.A[i]
        sign = (1 if i % 2 == 1 else -1) if E.polarization.sesquilinear else 1
        res = Ai.T @ G + (G @ Ai).scale(sign)
        if not res.is_zero():
            return PolarizationReport(False, n, i, res)
    return PolarizationReport(True, n)


def euler_te_extension(gr: Matrix, euler_action: Matrix, order: int = 1,
                       polarization: Polarization | None = None) -> EStructure:
    """E-structure with ``nabla_d/du = d/du + Gr/2u - nabla_E/u`` over a point.

    Over a point the Euler field only contributes through the caller-supplied
    action ``-nabla_E = euler_action / u``, so the connection matrix is
    ``u^-2 (euler_action + u Gr/2)``.
    """
    n = gr.nrows
    if euler_action.shape != (n, n):
        raise ValueError("grading and Euler action must have equal size")
    A = MatrixSeries([euler_action, gr.scale(as_scalar(1) / 2)], max(order, 1))
    return EStructure(A, polarization, GradingData(gr.scale(as_scalar(1) / 2)))


def rmatrix_between_splittings(s1: Splitting, s2: Splitting,
                               E: EStructure | None = None) -> GaugeSeries:
    """``R = Phi_s1^-1 Phi_s2``, so that ``s2 = sum_i u^i s1(R_i)``."""
    n = min(s1.S.order, s2.S.order)
    if E is not None:
        if s1.S.rank != E.rank or s2.S.rank != E.rank:
            raise ValueError("splitting rank does not match connection rank")
        n = min(n, E.order)
    return GaugeSeries(s1.S.truncate(n).invert() @ s2.S.truncate(n), rmatrix=True)
