"""Semi-simple normal forms, R-matrices and formal isomorphisms.

Everything here reduces to the frame-change rule of
:func:`tecalc.connection.gauge_transform`.  The R-matrix recursions pin the
otherwise free diagonal blocks of each ``R_k`` by solvability of the next
order, and the isomorphism solver uses one global linear system.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .connection import (EStructure, GaugeSeries, Splitting, gauge_transform,
                         pulled_back_pairing)
from .levelt import (_flat_morphism_system, _projected_basis, _to_series, block_diagonalize,
                     blocks_of, diag_part, generalized_eigenblocks, is_block_diagonal,
                     offdiag_part, sylvester_offdiag_solve, system_depth)
from .linalg import InconsistentSystemError, Matrix, solve_sparse_system
from .series import MatrixSeries

__all__ = [
    "ResidueNotScalar",
    "NonzeroSubleading",
    "NotSemisimple",
    "Inconsistent",
    "NoSolution",
    "NonUnique",
    "FlattenResult",
    "SemisimpleIsomorphism",
    "IsomorphismResult",
    "SplittingFlags",
    "flatten_scalar_block",
    "semisimplify",
    "semisimple_splitting",
    "rmatrix_from_grading",
    "isomorphism_solver",
    "lookahead_stable",
    "check_splitting_kind",
]


class ResidueNotScalar(ValueError):
    pass


class NonzeroSubleading(ValueError):
    """The ``u^-1`` coefficient of a scalar-residue block is not zero."""


class NotSemisimple(ValueError):
    pass


class Inconsistent(ArithmeticError):
    pass


class NoSolution(ArithmeticError):
    pass


class NonUnique(ArithmeticError):
    def __init__(self, dimension: int):
        self.dimension = dimension
        super().__init__(f"solution space has dimension {dimension} after lookahead")


@dataclass(frozen=True)
class FlattenResult:
    Q: GaugeSeries
    w: object
    certificate: bool


def flatten_scalar_block(Ew: EStructure, N: int | None = None) -> FlattenResult:
    """Gauge ``Q = prod_k (Id + u^k T_k)`` taking ``w/u^2 + ...`` to exactly ``w/u^2``.

    Step ``k`` removes the ``u^(k-1)`` coefficient of the connection matrix
    with ``T_k = -A_{k+1} / k``.  ``T_N`` needs ``A_{N+1}``, so one order
    beyond ``N`` is used when the structure provides it; otherwise the top
    coefficient of ``Q`` is left at zero, which still flattens to order ``N``.
    """
    N = Ew.order if N is None else min(N, Ew.order)
    depth = min(N + 1, Ew.order)
    E = Ew.truncate(depth)
    n = E.rank
    A0 = E.residue
    w = A0[0, 0]
    if A0 != Matrix.scalar(n, w):
        raise ResidueNotScalar("residue is not a scalar matrix")
    if depth >= 1 and not E.A[1].is_zero():
        raise NonzeroSubleading("u^-1 coefficient must vanish on a scalar-residue block")
    Q = MatrixSeries.identity(n, depth)
    cur = E
    for k in range(1, depth):
        nxt = cur.A[k + 1]
        if nxt.is_zero():
            continue
        step = MatrixSeries.monomial(nxt.scale(Fraction(-1, k)), k, depth)
        cur = gauge_transform(step, cur)
        Q = Q @ step
    Q = Q.truncate(N)
    target = MatrixSeries.constant(Matrix.scalar(n, w), N)
    cert = gauge_transform(Q, Ew.truncate(N)).A == target
    return FlattenResult(GaugeSeries(Q, rmatrix=True), w, cert)


@dataclass(frozen=True)
class SemisimpleIsomorphism:
    """Gauge ``G`` with ``gauge_transform(G, E) = diag(w_1, ..., w_r) / u^2``."""

    gauge: GaugeSeries
    weights: tuple
    certificate: bool

    def normal_form(self) -> Matrix:
        return Matrix.diag(self.weights)


def semisimplify(E: EStructure, N: int | None = None, field: str | None = None,
                 C: Matrix | None = None) -> SemisimpleIsomorphism:
    """Gauge to the direct sum of rank-one structures ``w/u^2``, checked by re-gauging."""
    N = E.order if N is None else min(N, E.order)
    eig = generalized_eigenblocks(E.residue, field)
    for blk in eig.blocks:
        if any(length > 1 for length in blk.chain_lengths):
            raise NotSemisimple(f"residue is not diagonalizable at eigenvalue {blk.eigenvalue}")
    # one extra order pins the top coefficient of the flat sections
    depth = min(N + 1, E.order)
    dec = block_diagonalize(E, depth, field, C=C)
    qs = []
    weights = []
    for (w, sub), blk in zip(dec.block_structures(), eig.blocks):
        qs.append(flatten_scalar_block(sub, depth).Q.P)
        weights.extend([w] * blk.multiplicity)
    Q = MatrixSeries([Matrix.block_diag([q[k] for q in qs]) for k in range(depth + 1)])
    G = (dec.P.P @ Q).truncate(N)
    cert = gauge_transform(G, E).A == MatrixSeries.constant(Matrix.diag(weights), N)
    return SemisimpleIsomorphism(GaugeSeries(G), tuple(weights), cert)


def semisimple_splitting(E: EStructure, N: int | None = None,
                         C: Matrix | None = None) -> Splitting:
    """The splitting sending each eigenvector of the residue to its flat section."""
    iso = semisimplify(E, N, C=C)
    G = iso.gauge.P
    return Splitting(G @ G[0].inverse())


def rmatrix_from_grading(xi: Matrix, mu: Matrix, N: int) -> GaugeSeries:
    """Unique ``R`` with ``R_0 = Id`` and ``[xi, R_{k+1}] = R_k (mu - k)``.

    ``xi`` must be diagonalizable and already in eigen-grouped form.  The
    diagonal blocks are pinned by ``diag(R_k) = diag(R_k^off mu) / k``,
    which is exactly solvability of the next equation.
    """
    n = xi.nrows
    blocks = blocks_of(xi)
    for idx in blocks:
        sub = xi.submatrix(idx, idx)
        if sub != Matrix.scalar(len(idx), sub[0, 0]):
            raise NotSemisimple("xi must be diagonal on each eigenvalue block")
    if not offdiag_part(mu, blocks) == mu:
        raise Inconsistent("mu has nonzero diagonal blocks, so the k = 0 equation is unsolvable")
    Rs = [Matrix.identity(n)]
    for k in range(N):
        rhs = Rs[k] @ (mu - Matrix.scalar(n, k))
        if not offdiag_part(rhs, blocks) == rhs:
            raise Inconsistent(f"diagonal-block solvability fails at order {k}")
        off = sylvester_offdiag_solve(xi, rhs, blocks)
        dg = diag_part(off @ mu, blocks).scale(Fraction(1, k + 1))
        Rs.append(off + dg)
    return GaugeSeries(MatrixSeries(Rs), rmatrix=True)


@dataclass(frozen=True)
class IsomorphismResult:
    R: GaugeSeries
    kernel_dimension: int
    lookahead: int
    effective_lookahead: int


def isomorphism_solver(E1: EStructure, E2: EStructure, N: int, lookahead: int = 2,
                       allow_nonunique: bool = False) -> IsomorphismResult:
    """R-matrix with ``gauge_transform(R, E1) = E2`` to order ``N``.

    Equivalently ``u^2 R' = R A2 - A1 R``, i.e. ``[A1_0, R_{i+1}] = R_i (A2_1 - i) - A1_1 R_i``
    when only two coefficients are present.  Solved as one global system
    (see :func:`tecalc.levelt.system_depth`) with ``R_0 = Id`` imposed.
    """
    if E1.rank != E2.rank:
        raise ValueError("isomorphism needs equal ranks")
    K = system_depth(N, lookahead, E1.order, E2.order)
    rows, rhs, nvars, var = _flat_morphism_system(E2, E1, K, normalized=True)
    try:
        particular, kernel = solve_sparse_system(rows, rhs, nvars)
    except InconsistentSystemError as exc:
        raise NoSolution("no R-matrix intertwines the two connections") from exc
    r = E1.rank
    limit = (N + 1) * r * r
    dim = len(_projected_basis(kernel, limit))
    if dim and not allow_nonunique:
        raise NonUnique(dim)
    R = _to_series(particular, var, N, r, r)
    return IsomorphismResult(GaugeSeries(R, rmatrix=True), dim, lookahead, K - N - 1)


def lookahead_stable(E1: EStructure, E2: EStructure, N: int, lookahead: int) -> bool:
    """Do lookaheads ``L`` and ``L + 1`` give the same R to order ``N``?"""
    a = isomorphism_solver(E1, E2, N, lookahead)
    b = isomorphism_solver(E1, E2, N, lookahead + 1)
    return a.R.P == b.R.P and a.kernel_dimension == b.kernel_dimension


@dataclass(frozen=True)
class SplittingFlags:
    homogeneous: bool
    p_compatible: bool | None
    omega_compatible: bool | None
    omega_weight: object
    block_preserving: bool


def check_splitting_kind(s: Splitting, E: EStructure, omega=None,
                         N: int | None = None) -> SplittingFlags:
    """Report which of the standard properties the splitting ``s`` has.

    * homogeneous: the connection matrix in the ``s`` frame has ``A_i = 0`` for ``i >= 2``;
    * P-compatible: the Gram matrix of ``s`` is the constant pairing;
    * omega-compatible: ``A_1 omega = r omega`` and ``A_i omega = 0`` for ``i >= 2``;
    * block-preserving: ``s`` maps each generalized eigenspace of the residue into
      the matching summand of the eigenvalue decomposition.
    """
    N = min(E.order, s.S.order) if N is None else min(N, E.order, s.S.order)
    S = s.S.truncate(N)
    Es = gauge_transform(S, E.truncate(N))
    homogeneous = all(Es.A[i].is_zero() for i in range(2, N + 1))

    p_ok = None
    if E.polarization is not None:
        gram = pulled_back_pairing(S, E.polarization)
        p_ok = gram == MatrixSeries.constant(E.polarization.G, N)

    om_ok, weight = None, None
    if omega is not None:
        col = Matrix.column(omega)
        om_ok = all((Es.A[i] @ col).is_zero() for i in range(2, N + 1))
        if N >= 1 and om_ok:
            img = Es.A[1] @ col
            pivot = next(i for i, x in enumerate(col.col(0)) if x)
            weight = img[pivot, 0] / col[pivot, 0]
            om_ok = img == col.scale(weight)
            if not om_ok:
                weight = None

    dec = block_diagonalize(E, N)
    C = dec.eigen.C
    M = dec.P.P.invert() @ S @ C
    block_ok = all(is_block_diagonal(m, dec.blocks) for m in M.coeffs)
    return SplittingFlags(homogeneous, p_ok, om_ok, weight, block_ok)
