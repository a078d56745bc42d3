"""Finite-dimensional curved A-infinity algebras over a supercommutative ring.

The module is free on a finite basis; basis element ``0`` is always the strict
unit ``e``.  An element of the module is a dict ``{(monomial, basis_index):
Fraction}`` with the ring coefficient written on the left.  Operations are
sparse tables ``ops[k][word] -> element`` on basis words and are extended
multilinearly with the Koszul rule for the shifted degrees ``|a|' = |a| - 1``::

    m_k(a_1, ..., r a_i, ...) = (-1)^{|r| (|a_1|' + ... + |a_{i-1}|' + 1)} r m_k(a_1, ...)
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

from ..linalg import InconsistentSystemError, Matrix, solve_sparse_system
from .ring import ONE, BaseRing, Derivation

__all__ = [
    "AInftyAlgebra",
    "EulerGrading",
    "MissingGrading",
    "AInftyReport",
    "basis_elem",
    "add_elem",
    "scale_elem",
    "apply_multilinear",
    "verify_ainfty",
    "verify_unit",
    "verify_cyclic",
    "verify_euler_grading",
    "find_cyclic_pairing",
]


class MissingGrading(ValueError):
    """The operation needs an Euler grading and the algebra has none."""


def basis_elem(b: int, c=1, mono=ONE) -> dict:
    return {(mono, b): Fraction(c)}


def add_elem(acc: dict, x: dict, c=1) -> dict:
    for k, v in x.items():
        acc[k] = acc.get(k, 0) + c * v
    return acc


def scale_elem(x: dict, c) -> dict:
    return {k: c * v for k, v in x.items() if c * v}


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


@dataclass(eq=False)
class EulerGrading:
    """``Gr = deg + 2E``: an R-linear even map ``deg`` on the basis plus an Euler field.

    ``Gr(r a) = 2 E(r) a + r deg(a)`` for a ring coefficient ``r`` and basis element ``a``.
    """

    deg: dict
    E: Derivation

    def gr(self, ring: BaseRing, x: dict) -> dict:
        out: dict = {}
        for (mono, b), c in x.items():
            for m2, c2 in self.E.on_mono(mono).items():
                out[(m2, b)] = out.get((m2, b), 0) + 2 * c * c2
            for (m3, b3), c3 in self.deg.get(b, {}).items():
                mm = ring.mul(mono, m3)
                if mm is not None:
                    out[(mm, b3)] = out.get((mm, b3), 0) + c * c3
        return _clean(out)


@dataclass(eq=False)
class AInftyAlgebra:
    """Strictly unital curved A-infinity algebra with optional cyclic pairing.

    ``pairing`` maps basis pairs to ring elements; ``dimension`` is the parity
    ``n`` of the pairing.  ``unit_vector`` records the unit in the coordinates
    of the algebra this one was derived from (``(-1, 0, ...)`` after taking the
    opposite algebra, for instance).
    """

    name: str
    basis: tuple
    degrees: tuple
    ring: BaseRing
    ops: dict
    pairing: dict | None = None
    dimension: int = 0
    grading: EulerGrading | None = None
    unit_vector: tuple | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.basis = tuple(self.basis)
        self.degrees = tuple(int(d) & 1 for d in self.degrees)
        if len(self.basis) != len(self.degrees):
            raise ValueError("one degree per basis element is required")
        if self.degrees[0] != 0:
            raise ValueError("the unit (basis element 0) must be even")
        if self.unit_vector is None:
            self.unit_vector = (1,) + (0,) * (self.dim - 1)
        self.ops = {k: {tuple(w): _clean(v) for w, v in tab.items() if _clean(v)}
                    for k, tab in self.ops.items()}
        self.sdeg = tuple((d + 1) & 1 for d in self.degrees)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def unit(self) -> int:
        return 0

    @property
    def max_arity(self) -> int:
        arities = [k for k, tab in self.ops.items() if tab]
        return max(arities) if arities else 0

    def nonunit(self) -> range:
        return range(1, self.dim)

    def m(self, word: tuple) -> dict:
        return self.ops.get(len(word), {}).get(word, {})

    def term_parity(self, mono, b) -> int:
        return self.ring.parity(mono) ^ self.degrees[b]

    def elem_parity(self, x: dict):
        ps = {self.term_parity(m, b) for (m, b) in x}
        if len(ps) > 1:
            raise ValueError("element is not homogeneous")
        return ps.pop() if ps else None

    # ------------------------------------------------------------------ curvature
    def curvature(self) -> dict:
        return dict(self.ops.get(0, {}).get((), {}))

    def weak_curvature(self) -> tuple:
        """Split ``m_0 = w e + rest``; ``w`` is the coefficient of ``e`` with no ring factor."""
        m0 = self.curvature()
        w = m0.pop((ONE, 0), Fraction(0))
        return w, m0

    def is_weakly_curved(self) -> bool:
        return not self.weak_curvature()[1]

    # ------------------------------------------------------------------ pairing
    def pair(self, x: dict, y: dict) -> dict:
        """``<x, y>`` with ``<r a, b> = r <a, b>`` and ``<a, r b> = (-1)^{|r||a|'} r <a, b>``."""
        if self.pairing is None:
            raise ValueError(f"algebra {self.name!r} carries no cyclic pairing")
        out: dict = {}
        for (m1, b1), c1 in x.items():
            for (m2, b2), c2 in y.items():
                g = self.pairing.get((b1, b2))
                if not g:
                    continue
                sign = -1 if (self.ring.parity(m2) & self.sdeg[b1]) else 1
                mm = self.ring.mul(m1, m2)
                if mm is None:
                    continue
                for mg, cg in g.items():
                    mmm = self.ring.mul(mm, mg)
                    if mmm is not None:
                        out[mmm] = out.get(mmm, 0) + sign * c1 * c2 * cg
        return _clean(out)

    def pairing_matrix(self) -> Matrix:
        """Constant part of the pairing as a matrix over K."""
        n = self.dim
        return Matrix([[self.pairing.get((i, j), {}).get(ONE, 0) if self.pairing else 0
                        for j in range(n)] for i in range(n)])

    def copy_with(self, **kw) -> AInftyAlgebra:
        kw.setdefault("_cache", {})
        return replace(self, **kw)


def apply_multilinear(alg: AInftyAlgebra, f: Callable[[tuple], dict], fparity: int,
                      elems: Sequence[dict]) -> dict:
    """Evaluate a multilinear map of shifted parity ``fparity`` on module elements.

    ``f`` is given on basis words; ring coefficients are pulled to the front
    with the sign ``(-1)^{|r| (sum of earlier |a_j|' + fparity)}``.
    """
    ring, sd = alg.ring, alg.sdeg
    partial = [(ONE, (), 0, Fraction(1), 0)]
    for x in elems:
        nxt = []
        for mono, word, sg, c, acc in partial:
            for (m, b), cx in x.items():
                mm = ring.mul(mono, m)
                if mm is None:
                    continue
                s2 = sg ^ (ring.parity(m) & ((acc + fparity) & 1))
                nxt.append((mm, word + (b,), s2, c * cx, acc + sd[b]))
        partial = nxt
    out: dict = {}
    for mono, word, sg, c, _ in partial:
        val = f(word)
        if not val:
            continue
        if sg:
            c = -c
        for (m, b), cv in val.items():
            mm = ring.mul(mono, m)
            if mm is None:
                continue
            out[(mm, b)] = out.get((mm, b), 0) + c * cv
    return _clean(out)


@dataclass(frozen=True)
class AInftyReport:
    passed: bool
    checked: int
    witness: tuple | None = None
    residual: dict | None = None
    relation: str = "ainfty"


def _words(n: int, k: int, letters=None):
    letters = range(n) if letters is None else letters
    return itertools.product(letters, repeat=k)


def verify_ainfty(alg: AInftyAlgebra, max_arity: int | None = None) -> AInftyReport:
    """Check ``sum (-1)^{eps_1} m(a^(1), m(a^(2)), a^(3)) = 0`` on all basis words.

    The default arity bound ``2K - 1`` (``K`` the largest stored arity) covers
    every relation in which two stored operations are composed.
    """
    K = alg.max_arity
    if max_arity is None:
        max_arity = max(2 * K - 1, 1)
    checked = 0
    sd = alg.sdeg
    for k in range(max_arity + 1):
        for word in _words(alg.dim, k):
            checked += 1
            total: dict = {}
            eps = [0]
            for b in word:
                eps.append(eps[-1] + sd[b])
            for i in range(k + 1):
                for j in range(i, k + 1):
                    inner = alg.m(word[i:j])
                    if not inner:
                        continue
                    elems = ([basis_elem(b) for b in word[:i]] + [inner]
                             + [basis_elem(b) for b in word[j:]])
                    val = apply_multilinear(alg, alg.m, 1, elems)
                    add_elem(total, val, -1 if eps[i] & 1 else 1)
            total = _clean(total)
            if total:
                return AInftyReport(False, checked, word, total)
    return AInftyReport(True, checked)


def verify_unit(alg: AInftyAlgebra) -> AInftyReport:
    """Strict unit laws: ``m_k(.., e, ..) = 0`` for ``k != 0, 2`` and ``m_2(e, a) = a = (-1)^{|a|} m_2(a, e)``."""
    checked = 0
    for k, tab in alg.ops.items():
        if k in (0, 2):
            continue
        for word in tab:
            checked += 1
            if 0 in word:
                return AInftyReport(False, checked, word, tab[word], "unit")
    for b in range(alg.dim):
        checked += 1
        left = alg.m((0, b))
        right = alg.m((b, 0))
        if left != basis_elem(b):
            return AInftyReport(False, checked, (0, b), left, "unit")
        if right != basis_elem(b, -1 if alg.degrees[b] else 1):
            return AInftyReport(False, checked, (b, 0), right, "unit")
    return AInftyReport(True, checked, relation="unit")


def verify_cyclic(alg: AInftyAlgebra) -> AInftyReport:
    """Graded antisymmetry and cyclicity of the pairing on basis words (arity >= 1)."""
    if alg.pairing is None:
        return AInftyReport(False, 0, None, None, "cyclic")
    sd = alg.sdeg
    checked = 0
    for a in range(alg.dim):
        for b in range(alg.dim):
            checked += 1
            lhs = alg.pair(basis_elem(a), basis_elem(b))
            rhs = alg.pair(basis_elem(b), basis_elem(a))
            sign = -1 if ((sd[a] * sd[b] + 1) & 1) else 1
            if _clean(add_elem(dict(lhs), rhs, -sign)):
                return AInftyReport(False, checked, (a, b), None, "antisymmetry")
    for k in range(1, alg.max_arity + 1):
        for word in _words(alg.dim, k):
            eps = sum(sd[x] for x in word)
            for beta in range(alg.dim):
                checked += 1
                lhs = alg.pair(alg.m(word), basis_elem(beta))
                rhs = alg.pair(alg.m((beta,) + word[:-1]), basis_elem(word[-1]))
                sign = -1 if (sd[beta] * eps) & 1 else 1
                res = _clean(add_elem(dict(lhs), rhs, -sign))
                if res:
                    return AInftyReport(False, checked, word + (beta,), res, "cyclic")
    return AInftyReport(True, checked, relation="cyclic")


def verify_euler_grading(alg: AInftyAlgebra, max_arity: int | None = None) -> AInftyReport:
    """``Gr m_k = sum_i m_k(.., Gr a_i, ..) + (2 - k) m_k`` on basis words and ``Gr(e) = 0``."""
    if alg.grading is None:
        raise MissingGrading(f"algebra {alg.name!r} has no Euler grading")
    g = alg.grading
    if g.gr(alg.ring, basis_elem(0)):
        return AInftyReport(False, 0, (0,), None, "euler")
    K = alg.max_arity if max_arity is None else max_arity
    checked = 0
    for k in range(K + 1):
        for word in _words(alg.dim, k):
            checked += 1
            lhs = g.gr(alg.ring, alg.m(word))
            rhs = scale_elem(alg.m(word), 2 - k)
            for i in range(k):
                elems = ([basis_elem(b) for b in word[:i]] + [g.deg.get(word[i], {})]
                         + [basis_elem(b) for b in word[i + 1:]])
                add_elem(rhs, apply_multilinear(alg, alg.m, 1, elems))
            res = _clean(add_elem(dict(lhs), rhs, -1))
            if res:
                return AInftyReport(False, checked, word, res, "euler")
    return AInftyReport(True, checked, relation="euler")


def find_cyclic_pairing(alg: AInftyAlgebra, parities: Sequence[int] = (0, 1)):
    """A constant nondegenerate cyclic pairing, found by a linear solve.

    For each candidate parity ``n`` the unknowns are the entries ``<a, b>``
    with ``|a| + |b| = n``; antisymmetry and cyclicity on basis words give one
    linear equation per ring monomial.  Returns ``(pairing, n)`` or ``None``.
    """
    sd = alg.sdeg
    dim = alg.dim
    for n in parities:
        pairs = [(a, b) for a in range(dim) for b in range(dim)
                 if (alg.degrees[a] + alg.degrees[b]) % 2 == n]
        index = {p: i for i, p in enumerate(pairs)}
        rows: list = []

        def add_row(row):
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)

        for (a, b) in pairs:
            sign = -1 if ((sd[a] * sd[b] + 1) & 1) else 1
            add_row({index[(a, b)]: 1, index[(b, a)]: -sign} if (a, b) != (b, a)
                    else {index[(a, b)]: 1 - sign})
        for k in range(1, alg.max_arity + 1):
            for word in _words(dim, k):
                eps = sum(sd[x] for x in word)
                for beta in range(dim):
                    sign = -1 if (sd[beta] * eps) & 1 else 1
                    eqs: dict = {}
                    for (m, x), c in alg.m(word).items():
                        if (x, beta) in index:
                            r = eqs.setdefault(m, {})
                            r[index[(x, beta)]] = r.get(index[(x, beta)], 0) + c
                    for (m, x), c in alg.m((beta,) + word[:-1]).items():
                        if (x, word[-1]) in index:
                            r = eqs.setdefault(m, {})
                            j = index[(x, word[-1])]
                            r[j] = r.get(j, 0) - sign * c
                    for r in eqs.values():
                        add_row(r)
        try:
            _, kernel = solve_sparse_system(rows, [0] * len(rows), len(pairs))
        except InconsistentSystemError:  # pragma: no cover - homogeneous system
            continue
        if not kernel:
            continue
        for weights in _candidate_weights(len(kernel)):
            vals = [sum(w * vec.get(i, 0) for w, vec in zip(weights, kernel))
                    for i in range(len(pairs))]
            G = Matrix([[vals[index[(a, b)]] if (a, b) in index else 0 for b in range(dim)]
                        for a in range(dim)])
            if G.is_invertible():
                pairing = {(a, b): {ONE: Fraction(vals[index[(a, b)]])}
                           for (a, b) in pairs if vals[index[(a, b)]]}
                return pairing, n
    return None


def _candidate_weights(k: int):
    yield (1,) * k
    for i in range(k):
        yield tuple(1 if j == i else 0 for j in range(k))
    yield tuple(j + 1 for j in range(k))
