"""Eigenvalue block decomposition of E-structures and morphism solvers.

The residue ``A_0`` is brought to block form by a constant matrix ``C`` whose
columns are Jordan chains of ``A_0``.  Higher coefficients are then made
block-diagonal one order at a time with gauges ``Id + u^m T_m``, where each
``T_m`` has zero diagonal blocks and solves a Sylvester equation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from .connection import EStructure, GaugeSeries, gauge_transform
from .linalg import InconsistentSystemError, Matrix, solve_sparse_system
from .scalars import GaussianRational, Scalar, scalar_field
from .series import MatrixSeries

__all__ = [
    "IrrationalSpectrum",
    "InternalSingular",
    "EigenBlock",
    "EigenBlockData",
    "BlockDecomposition",
    "HomSpace",
    "eigenvalues",
    "generalized_eigenblocks",
    "blocks_of",
    "offdiag_part",
    "diag_part",
    "is_block_diagonal",
    "sylvester_offdiag_solve",
    "block_diagonalize",
    "hom_solver",
]


class IrrationalSpectrum(ArithmeticError):
    """Characteristic polynomial does not split over the working field."""


class InternalSingular(ArithmeticError):
    """Sylvester system singular: block spectra are not disjoint."""


def _to_sympy(x: Scalar):
    if isinstance(x, GaussianRational):
        return sympy.Rational(x.re.numerator, x.re.denominator) + sympy.I * sympy.Rational(
            x.im.numerator, x.im.denominator)
    return sympy.Rational(x.numerator, x.denominator)


def _from_sympy(z) -> Scalar:
    re, im = sympy.re(z), sympy.im(z)
    if not (re.is_Rational and im.is_Rational):
        raise IrrationalSpectrum(f"eigenvalue {z} is not in Q(i)")
    re_q = Fraction(int(re.p), int(re.q))
    if im == 0:
        return re_q
    return GaussianRational(re_q, Fraction(int(im.p), int(im.q)))


def _sort_key(z: Scalar):
    if isinstance(z, GaussianRational):
        return (z.re, z.im)
    return (z, Fraction(0))


def eigenvalues(A: Matrix, field: str | None = None) -> list[tuple[Scalar, int]]:
    """Exact eigenvalues with algebraic multiplicities, sorted by (real, imaginary) part.

    ``field`` is ``"Q"`` or ``"Q(i)"``; by default it is the field of the entries.
    """
    if field is None:
        field = scalar_field(A.entries())
    if field not in ("Q", "Q(i)"):
        raise ValueError(f"unknown field {field!r}")
    x = sympy.Symbol("x")
    coeffs = [_to_sympy(c) for c in reversed(A.charpoly())]
    if field == "Q":
        if any(sympy.im(c) != 0 for c in coeffs):
            raise IrrationalSpectrum("matrix has Gaussian entries but field Q was requested")
        poly = sympy.Poly(coeffs, x, domain="QQ")
    else:
        poly = sympy.Poly(coeffs, x, extension=sympy.I)
    _, factors = poly.factor_list()
    out: dict = {}
    for f, mult in factors:
        if f.degree() != 1:
            raise IrrationalSpectrum(
                f"characteristic polynomial has an irreducible factor {f.as_expr()} over {field}")
        a, b = f.all_coeffs()
        root = _from_sympy(sympy.simplify(-b / a))
        out[root] = out.get(root, 0) + mult
    return sorted(out.items(), key=lambda kv: _sort_key(kv[0]))


def _normalize(v: Sequence[Scalar]) -> tuple:
    lead = next(x for x in v if x)
    return tuple(x / lead for x in v)


def _span_rank(vectors: list[tuple]) -> int:
    if not vectors:
        return 0
    return Matrix.from_columns(vectors).rank()


def _jordan_chains(A: Matrix, w: Scalar, mult: int) -> list[list[tuple]]:
    """Jordan chains for eigenvalue ``w``, each listed eigenvector first."""
    n = A.nrows
    Nw = A - Matrix.scalar(n, w)
    kernels = [[]]
    power = Matrix.identity(n)
    while len(kernels[-1]) < mult:
        power = power @ Nw
        kernels.append(power.nullspace())
        if len(kernels) > n + 1:
            raise ArithmeticError("generalized eigenspace computation did not stabilise")
    height = len(kernels) - 1
    chains: list[list[tuple]] = []
    for j in range(height, 0, -1):
        # span of everything already accounted for at level j
        covered = list(kernels[j - 1])
        for chain in chains:
            if len(chain) >= j:
                covered.append(chain[j - 1])
        base = _span_rank(covered)
        for cand in kernels[j]:
            if _span_rank(covered + [cand]) > base:
                top = _normalize(cand)
                chain = [top]
                vec = Matrix.column(top)
                for _ in range(j - 1):
                    vec = Nw @ vec
                    chain.append(vec.col(0))
                chain.reverse()
                chains.append(chain)
                covered.append(top)
                base += 1
    return chains


@dataclass(frozen=True)
class EigenBlock:
    eigenvalue: Scalar
    multiplicity: int
    start: int
    stop: int
    chain_lengths: tuple[int, ...]

    @property
    def indices(self) -> range:
        return range(self.start, self.stop)


@dataclass(frozen=True)
class EigenBlockData:
    blocks: tuple[EigenBlock, ...]
    C: Matrix

    @property
    def eigenvalues(self) -> list[Scalar]:
        return [b.eigenvalue for b in self.blocks]

    @property
    def index_sets(self) -> list[list[int]]:
        return [list(b.indices) for b in self.blocks]


def generalized_eigenblocks(A0: Matrix, field: str | None = None) -> EigenBlockData:
    """Jordan-chain basis ``C`` of ``A0`` grouped by eigenvalue (ascending).

    Chain tops are scaled so their first nonzero entry is 1; within a chain the
    eigenvector comes first, so ``C^-1 A0 C`` is in upper Jordan form.
    """
    columns: list[tuple] = []
    blocks = []
    for w, mult in eigenvalues(A0, field):
        chains = _jordan_chains(A0, w, mult)
        start = len(columns)
        for chain in chains:
            columns.extend(chain)
        blocks.append(EigenBlock(w, mult, start, len(columns), tuple(len(c) for c in chains)))
    return EigenBlockData(tuple(blocks), Matrix.from_columns(columns))


def blocks_of(A0: Matrix) -> list[list[int]]:
    """Index sets of the eigenvalue blocks of a matrix that is already block-diagonal.

    Connected components of the sparsity pattern are grouped by their (single) eigenvalue.
    """
    n = A0.nrows
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(n):
            if A0[i, j]:
                parent[find(i)] = find(j)
    comps: dict[int, list[int]] = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    groups: dict = {}
    for comp in comps.values():
        spec = eigenvalues(A0.submatrix(comp, comp), "Q(i)")
        if len(spec) != 1:
            raise ValueError("matrix is not block-diagonal with single-eigenvalue blocks")
        groups.setdefault(spec[0][0], []).extend(comp)
    return [sorted(groups[w]) for w in sorted(groups, key=_sort_key)]


def _block_labels(blocks: list[list[int]], n: int) -> list[int]:
    label = [0] * n
    for b, idx in enumerate(blocks):
        for i in idx:
            label[i] = b
    return label


def offdiag_part(M: Matrix, blocks: list[list[int]]) -> Matrix:
    lab = _block_labels(blocks, M.nrows)
    return Matrix._raw(tuple(tuple(x if lab[i] != lab[j] else Fraction(0)
                                   for j, x in enumerate(row))
                             for i, row in enumerate(M.rows)), M.ncols)


def diag_part(M: Matrix, blocks: list[list[int]]) -> Matrix:
    return M - offdiag_part(M, blocks)


def is_block_diagonal(M: Matrix, blocks: list[list[int]]) -> bool:
    return offdiag_part(M, blocks).is_zero()


def sylvester_offdiag_solve(A0: Matrix, Cmat: Matrix,
                            blocks: list[list[int]] | None = None) -> Matrix:
    """``T`` with zero diagonal blocks and ``[A0, T] = Cmat`` on off-diagonal blocks.

    Each block pair ``(a, b)`` is the Sylvester equation
    ``A_a T_ab - T_ab A_b = C_ab``, solved exactly through its Kronecker form.
    """
    if blocks is None:
        blocks = blocks_of(A0)
    n = A0.nrows
    T = [[Fraction(0)] * n for _ in range(n)]
    for a, ia in enumerate(blocks):
        Aa = A0.submatrix(ia, ia)
        for b, ib in enumerate(blocks):
            if a == b:
                continue
            Cab = Cmat.submatrix(ia, ib)
            if Cab.is_zero():
                continue
            Ab = A0.submatrix(ib, ib)
            p, q = len(ia), len(ib)
            # unknown t[i][j] -> index i*q + j
            rows = []
            rhs = []
            for i in range(p):
                for j in range(q):
                    row = {}
                    for k in range(p):
                        if Aa[i, k]:
                            row[k * q + j] = row.get(k * q + j, 0) + Aa[i, k]
                    for k in range(q):
                        if Ab[k, j]:
                            row[i * q + k] = row.get(i * q + k, 0) - Ab[k, j]
                    rows.append(row)
                    rhs.append(Cab[i, j])
            try:
                sol, kernel = solve_sparse_system(rows, rhs, p * q)
            except InconsistentSystemError as exc:
                raise InternalSingular("Sylvester system inconsistent") from exc
            if kernel:
                raise InternalSingular("block spectra overlap: Sylvester system is singular")
            for i in range(p):
                for j in range(q):
                    T[ia[i]][ib[j]] = sol.get(i * q + j, Fraction(0))
    return Matrix(T)


@dataclass(frozen=True)
class BlockDecomposition:
    P: GaugeSeries
    transformed: EStructure
    eigen: EigenBlockData
    T: tuple[Matrix, ...]

    @property
    def blocks(self) -> list[list[int]]:
        return self.eigen.index_sets

    def block_structures(self) -> list[tuple[Scalar, EStructure]]:
        out = []
        for blk in self.eigen.blocks:
            idx = list(blk.indices)
            A = MatrixSeries([m.submatrix(idx, idx) for m in self.transformed.A.coeffs])
            out.append((blk.eigenvalue, EStructure(A, label=f"block {blk.eigenvalue}")))
        return out


def block_diagonalize(E: EStructure, N: int | None = None, field: str | None = None,
                      C: Matrix | None = None) -> BlockDecomposition:
    """Gauge ``P = C (Id + u T_1)(Id + u^2 T_2)...`` making every ``A_i`` block-diagonal.

    ``C`` may be supplied (its columns must span the generalized eigenspaces in
    ascending eigenvalue order); otherwise the Jordan-chain basis is used.
    """
    N = E.order if N is None else min(N, E.order)
    E = E.truncate(N)
    eig = generalized_eigenblocks(E.residue, field)
    if C is not None:
        eig = EigenBlockData(eig.blocks, C)
    blocks = eig.index_sets
    P = MatrixSeries.constant(eig.C, N)
    cur = gauge_transform(P, E)
    Ts = []
    for m in range(1, N + 1):
        off = offdiag_part(cur.A[m], blocks)
        T = sylvester_offdiag_solve(cur.residue, -off, blocks)
        Ts.append(T)
        if T.is_zero():
            continue
        step = MatrixSeries.monomial(T, m, N)
        cur = gauge_transform(step, cur)
        P = P @ step
    return BlockDecomposition(GaugeSeries(P), cur, eig, tuple(Ts))


@dataclass(frozen=True)
class HomSpace:
    """Basis of flat morphisms ``F`` (to order ``order``) between two structures."""

    basis: tuple[MatrixSeries, ...]
    order: int
    lookahead: int
    effective_lookahead: int

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _flat_morphism_system(E1: EStructure, E2: EStructure, K: int, normalized: bool = False):
    """Linear system for ``u^2 F' = F A1 - A2 F`` on ``F_0..F_K`` (rows x cols of E2 x E1).

    Coefficient of ``u^k``: ``(k-1) F_{k-1} - sum_j (F_j A1_{k-j} - A2_{k-j} F_j) = 0``.
    With ``normalized`` the constraint ``F_0 = Id`` is appended.
    """
    r2, r1 = E2.rank, E1.rank
    size = r2 * r1

    def var(k, i, j):
        return k * size + i * r1 + j

    rows, rhs = [], []
    for k in range(K + 1):
        for i in range(r2):
            for j in range(r1):
                row: dict = {}

                def add(key, val):
                    nv = row.get(key, 0) + val
                    if nv:
                        row[key] = nv
                    else:
                        row.pop(key, None)

                if k >= 1 and k - 1 >= 0:
                    add(var(k - 1, i, j), k - 1)
                for jj in range(k + 1):
                    A1 = E1.A[k - jj]
                    A2 = E2.A[k - jj]
                    # -(F_jj A1)_{ij} = -sum_l F_jj[i,l] A1[l,j]
                    for l in range(r1):
                        if A1[l, j]:
                            add(var(jj, i, l), -A1[l, j])
                    # +(A2 F_jj)_{ij}
                    for l in range(r2):
                        if A2[i, l]:
                            add(var(jj, l, j), A2[i, l])
                rows.append(row)
                rhs.append(Fraction(0))
    if normalized:
        for i in range(r2):
            for j in range(r1):
                rows.append({var(0, i, j): Fraction(1)})
                rhs.append(Fraction(1 if i == j else 0))
    return rows, rhs, (K + 1) * size, var


def _to_series(vec: dict, var, K: int, r2: int, r1: int) -> MatrixSeries:
    mats = []
    for k in range(K + 1):
        mats.append(Matrix([[vec.get(var(k, i, j), Fraction(0)) for j in range(r1)]
                            for i in range(r2)]))
    return MatrixSeries(mats)


def _projected_basis(kernel: list[dict], limit: int) -> list[dict]:
    """Independent projections of kernel vectors onto variables ``< limit``."""
    proj = [{k: v for k, v in vec.items() if k < limit} for vec in kernel]
    proj = [p for p in proj if p]
    if not proj:
        return []
    cols = sorted({k for p in proj for k in p})
    M = Matrix([[p.get(c, Fraction(0)) for c in cols] for p in proj])
    red, pivots = M.rref()
    out = []
    for r in range(len(pivots)):
        out.append({c: red.rows[r][idx] for idx, c in enumerate(cols) if red.rows[r][idx]})
    return out


def system_depth(N: int, lookahead: int, *orders: int) -> int:
    """Highest order ``K`` of the global systems used by the solvers.

    With lookahead ``L`` the unknowns of orders ``N+1 .. N+L`` are solved
    together with orders ``<= N``, and in addition the equation of order
    ``N+L+1`` must be solvable, so ``K = N + L + 1``.  The extra order adds no
    new constraint on order ``N+L+1`` itself; it only asks that the truncated
    solution extends one step further.  ``K`` is capped by the orders to which
    the structures are known.
    """
    if lookahead < 0:
        raise ValueError("lookahead must be non-negative")
    K = min((N + lookahead + 1,) + tuple(orders))
    if K < N:
        raise ValueError(f"structures known only to order {min(orders)} < {N}")
    return K


def hom_solver(E1: EStructure, E2: EStructure, N: int, lookahead: int = 2) -> HomSpace:
    """All ``F`` with ``F nabla_1 = nabla_2 F`` to order ``N``.

    One global exact system (see :func:`system_depth`) is solved and its
    solution space projected to orders ``<= N``; later orders pin directions
    that a staged solve would leave free.  Only orders known for both
    structures can be used, so the lookahead actually applied is reported
    separately.
    """
    K = system_depth(N, lookahead, E1.order, E2.order)
    rows, rhs, nvars, var = _flat_morphism_system(E1, E2, K)
    _, kernel = solve_sparse_system(rows, rhs, nvars)
    limit = (N + 1) * E1.rank * E2.rank
    basis = [_to_series(v, var, N, E2.rank, E1.rank) for v in _projected_basis(kernel, limit)]
    return HomSpace(tuple(basis), N, lookahead, K - N - 1)
