"""Sample algebras and the standard constructions on them.

Associative products ``a b`` enter as ``m_2(a, b) = (-1)^{|a|} a b``; with this
translation the A-infinity relations reduce to associativity and the strict
unit laws take the form ``m_2(e, a) = a = (-1)^{|a|} m_2(a, e)``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from ..linalg import Matrix
from .algebra import (AInftyAlgebra, EulerGrading, _clean, add_elem, apply_multilinear,
                      basis_elem, find_cyclic_pairing, verify_cyclic)
from .ring import ONE, BaseRing, euler_e, euler_s

__all__ = [
    "OddParityViolation",
    "from_associative",
    "field_algebra",
    "matrix_algebra",
    "exterior_algebra",
    "clifford_algebra",
    "with_curvature",
    "weakly_curved",
    "uncurved",
    "basis_change_family",
    "square_deformation",
    "odd_curved_exterior",
    "opposite",
    "negative",
    "negative_opposite",
    "s_deformation",
    "e_deformation",
    "restrict_algebra",
    "is_strict_morphism",
    "sample_zoo",
]


class OddParityViolation(ValueError):
    """A table entry breaks the parity bookkeeping needed by a deformation."""


def from_associative(name, basis, degrees, product, ring=None, pairing=True) -> AInftyAlgebra:
    """Wrap structure constants ``product[(i, j)] = {k: c}`` of an associative algebra."""
    ring = ring or BaseRing()
    deg = tuple(int(d) & 1 for d in degrees)
    m2 = {}
    for (i, j), val in product.items():
        sign = -1 if deg[i] else 1
        m2[(i, j)] = {(ONE, k): sign * Fraction(c) for k, c in val.items() if c}
    alg = AInftyAlgebra(name, basis, deg, ring, {2: m2})
    if pairing:
        found = find_cyclic_pairing(alg)
        if found is not None:
            alg.pairing, alg.dimension = found
    return alg


def field_algebra(w=0) -> AInftyAlgebra:
    alg = from_associative("field", ("e",), (0,), {(0, 0): {0: 1}})
    return weakly_curved(alg, w) if w else alg


def matrix_algebra(w=0) -> AInftyAlgebra:
    """2x2 matrices in the basis ``e = Id, E12, E21, H = E11 - E22``."""
    mats = [Matrix([[1, 0], [0, 1]]), Matrix([[0, 1], [0, 0]]),
            Matrix([[0, 0], [1, 0]]), Matrix([[1, 0], [0, -1]])]

    def coords(M):
        h = Fraction(1, 2)
        return {0: (M[0, 0] + M[1, 1]) * h, 1: M[0, 1], 2: M[1, 0], 3: (M[0, 0] - M[1, 1]) * h}

    prod = {(i, j): coords(mats[i] @ mats[j]) for i in range(4) for j in range(4)}
    alg = from_associative("matrix2", ("e", "E12", "E21", "H"), (0, 0, 0, 0), prod)
    return weakly_curved(alg, w) if w else alg


def exterior_algebra(w=0) -> AInftyAlgebra:
    """``Lambda[x]`` with ``|x|`` odd."""
    prod = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    alg = from_associative("exterior", ("e", "x"), (0, 1), prod)
    return weakly_curved(alg, w) if w else alg


def clifford_algebra(w=0) -> AInftyAlgebra:
    """``K[x]/(x^2 = 1)`` with ``|x|`` odd."""
    prod = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: 1}}
    alg = from_associative("clifford", ("e", "x"), (0, 1), prod)
    return weakly_curved(alg, w) if w else alg


def _with_ops(alg: AInftyAlgebra, ops: dict, **kw) -> AInftyAlgebra:
    return alg.copy_with(ops={k: dict(v) for k, v in ops.items()}, **kw)


def with_curvature(alg: AInftyAlgebra, m0: dict, name: str | None = None) -> AInftyAlgebra:
    ops = {k: dict(v) for k, v in alg.ops.items()}
    ops[0] = {(): dict(m0)} if m0 else {}
    return _with_ops(alg, ops, name=name or alg.name)


def weakly_curved(alg: AInftyAlgebra, w) -> AInftyAlgebra:
    """Same operations with ``m_0 = w e``."""
    return with_curvature(alg, basis_elem(0, w) if w else {}, name=f"{alg.name}+w{w}")


def uncurved(alg: AInftyAlgebra) -> AInftyAlgebra:
    """Drop the ``w e`` part of ``m_0`` (for a weakly curved algebra this is ``m_0 = 0``)."""
    _, rest = alg.weak_curvature()
    return with_curvature(alg, rest, name=f"{alg.name}-bar")


def _truncated_inverse_powers(X: Matrix, order: int):
    # B^-1 = sum_n (-t X)^n, truncated at t^order
    powers = [Matrix.identity(X.nrows)]
    for _ in range(1, order):
        powers.append(powers[-1] @ X)
    return powers


def basis_change_family(alg: AInftyAlgebra, X: Matrix, t_order: int = 3,
                        name: str | None = None) -> AInftyAlgebra:
    """Transport the structure along ``b_i -> b_i + t X b_i`` (``t`` even, ``t^t_order = 0``).

    The family is isomorphic to the constant one, yet its structure constants
    depend on ``t``, which exercises the base-direction machinery.  ``X`` must
    kill the unit and preserve degrees.  The pairing is transported as well.
    """
    n = alg.dim
    if any(X[i, 0] for i in range(n)):
        raise ValueError("X must kill the unit")
    for i in range(n):
        for j in range(n):
            if X[i, j] and alg.degrees[i] != alg.degrees[j]:
                raise ValueError("X must preserve degrees")
    ring = BaseRing(0, t_order, alg.ring.has_s, alg.ring.has_e)
    base = alg.copy_with(ring=ring)

    def B(b):  # image of a new basis vector in old coordinates
        out = basis_elem(b)
        for i in range(n):
            if X[i, b]:
                out[((1, 0, 0), i)] = Fraction(X[i, b])
        return out

    powers = _truncated_inverse_powers(X, t_order)

    def Binv(x: dict) -> dict:
        out: dict = {}
        for (mono, b), c in x.items():
            for k, P in enumerate(powers):
                for i in range(n):
                    if not P[i, b]:
                        continue
                    mm = ring.mul(mono, (k, 0, 0))
                    if mm is None:
                        continue
                    out[(mm, i)] = out.get((mm, i), 0) + c * (-1) ** k * P[i, b]
        return _clean(out)

    images = [B(b) for b in range(n)]
    ops = {}
    for k, tab in alg.ops.items():
        if not tab:
            continue
        new = {}
        for word in itertools.product(range(n), repeat=k):
            val = apply_multilinear(base, base.m, 1, [images[b] for b in word])
            val = Binv(val)
            if val:
                new[word] = val
        ops[k] = new
    pairing = None
    if alg.pairing is not None:
        pairing = {}
        for a in range(n):
            for b in range(n):
                g = base.pair(images[a], images[b])
                if g:
                    pairing[(a, b)] = g
    return AInftyAlgebra(name or f"{alg.name}~t", alg.basis, alg.degrees, ring, ops,
                         pairing, alg.dimension)


def square_deformation(alg: AInftyAlgebra, c0, t_order: int = 3,
                       name: str | None = None) -> AInftyAlgebra:
    """For ``K[x]``-type algebras on ``(e, x)``: the family ``x^2 = (c0 + t) e``."""
    if alg.dim != 2:
        raise ValueError("square deformation needs a basis (e, x)")
    ring = BaseRing(0, t_order)
    sign = -1 if alg.degrees[1] else 1
    ops = {k: dict(v) for k, v in alg.ops.items()}
    m2 = dict(ops.get(2, {}))
    val = {}
    if c0:
        val[(ONE, 0)] = sign * Fraction(c0)
    val[((1, 0, 0), 0)] = Fraction(sign)
    m2[(1, 1)] = val
    ops[2] = m2
    out = AInftyAlgebra(name or f"{alg.name}~x2=({c0}+t)", alg.basis, alg.degrees, ring, ops)
    found = find_cyclic_pairing(out)
    if found is not None:
        out.pairing, out.dimension = found
    return out


def odd_curved_exterior() -> AInftyAlgebra:
    """``Lambda[x]`` over ``K[t]/(t^2)`` with ``t`` odd and curvature ``m_0 = t x``."""
    base = exterior_algebra()
    ring = BaseRing(1, 2)
    ops = {k: dict(v) for k, v in base.ops.items()}
    ops[0] = {(): {((1, 0, 0), 1): Fraction(1)}}
    return AInftyAlgebra("exterior+tx", base.basis, base.degrees, ring, ops,
                         base.pairing, base.dimension)


def _negate_unit(alg: AInftyAlgebra, ops: dict, pairing, name, unit_vector) -> AInftyAlgebra:
    # new basis vector 0 is minus the old one
    new_ops = {}
    for k, tab in ops.items():
        new = {}
        for word, val in tab.items():
            sign = (-1) ** sum(1 for b in word if b == 0)
            out = {}
            for (mono, b), c in val.items():
                out[(mono, b)] = sign * (-c if b == 0 else c)
            new[word] = out
        new_ops[k] = new
    new_pair = None
    if pairing is not None:
        new_pair = {}
        for (a, b), g in pairing.items():
            sign = (-1) ** ((a == 0) + (b == 0))
            new_pair[(a, b)] = {m: sign * c for m, c in g.items()}
    return AInftyAlgebra(name, alg.basis, alg.degrees, alg.ring, new_ops, new_pair,
                         alg.dimension, None, unit_vector)


def _flip(vec):
    return (-vec[0],) + tuple(vec[1:])


def _opposite_ops(alg: AInftyAlgebra) -> dict:
    sd = alg.sdeg
    ops = {}
    for k, tab in alg.ops.items():
        new = {}
        for word in itertools.product(range(alg.dim), repeat=k):
            val = tab.get(tuple(reversed(word)))
            if not val:
                continue
            dag = sum(sd[word[i]] * sd[word[j]] for i in range(k) for j in range(i + 1, k))
            new[word] = {key: (-c if dag & 1 else c) for key, c in val.items()}
        ops[k] = new
    return ops


def opposite(alg: AInftyAlgebra) -> AInftyAlgebra:
    """``m_k^op(a_1..a_k) = (-1)^{dagger} m_k(a_k..a_1)``; the unit is ``-e``.

    To keep the unit as basis element 0 the result uses the basis
    ``(-e, a_1, ...)``; ``unit_vector`` records this.
    """
    return _negate_unit(alg, _opposite_ops(alg), alg.pairing, f"{alg.name}^op",
                        _flip(alg.unit_vector))


def _negative_ops(alg: AInftyAlgebra) -> dict:
    return {k: {w: {key: (c if k % 2 == 1 else -c) for key, c in v.items()}
                for w, v in tab.items()} for k, tab in alg.ops.items()}


def negative(alg: AInftyAlgebra) -> AInftyAlgebra:
    """``m_k^- = (-1)^{k-1} m_k``; the unit is ``-e``, recorded as for :func:`opposite`."""
    return _negate_unit(alg, _negative_ops(alg), alg.pairing, f"{alg.name}^-",
                        _flip(alg.unit_vector))


def negative_opposite(alg: AInftyAlgebra) -> AInftyAlgebra:
    """``(A^op)^-``, strictly unital with the original unit ``e``."""
    op = AInftyAlgebra("tmp", alg.basis, alg.degrees, alg.ring, _opposite_ops(alg))
    ops = _negative_ops(op)
    return AInftyAlgebra(f"{alg.name}^-op", alg.basis, alg.degrees, alg.ring, ops,
                         alg.pairing, alg.dimension, None, alg.unit_vector)


def is_strict_morphism(F: Matrix, A: AInftyAlgebra, B: AInftyAlgebra,
                       max_arity: int | None = None) -> bool:
    """Is the linear map ``F`` (columns = images of basis vectors) a strict A-infinity morphism?

    Checks ``F(m_k^A(a)) = m_k^B(F a_1, ..., F a_k)`` on basis words; ``F`` has constant entries.
    """
    n = A.dim
    K = max(A.max_arity, B.max_arity) if max_arity is None else max_arity

    def apply_F(x):
        out: dict = {}
        for (mono, b), c in x.items():
            for i in range(n):
                if F[i, b]:
                    out[(mono, i)] = out.get((mono, i), 0) + c * F[i, b]
        return _clean(out)

    images = [apply_F(basis_elem(b)) for b in range(n)]
    for k in range(K + 1):
        for word in itertools.product(range(n), repeat=k):
            lhs = apply_F(A.m(word))
            rhs = apply_multilinear(B, B.m, 1, [images[b] for b in word])
            if _clean(add_elem(dict(lhs), rhs, -1)):
                return False
    return True


def s_deformation(alg: AInftyAlgebra) -> AInftyAlgebra:
    """``C^s``: ``m_k^s = s^{2-k} m_k`` over ``R[s, 1/s]`` with ``E = (s/2) d/ds``.

    ``s`` is taken even here (an odd invertible element cannot exist in a
    supercommutative ring); the grading is ``Gr(s^k a) = k s^k a``.
    """
    ring = alg.ring.with_variables(s=True)
    ops = {}
    for k, tab in alg.ops.items():
        ops[k] = {w: {((m[0], m[1] + 2 - k, m[2]), b): c for (m, b), c in v.items()}
                  for w, v in tab.items()}
    grading = EulerGrading({}, euler_s())
    out = AInftyAlgebra(f"{alg.name}^s", alg.basis, alg.degrees, ring, ops, alg.pairing,
                        alg.dimension, grading, alg.unit_vector)
    if out.pairing is not None and not verify_cyclic(out).passed:
        out.pairing = None
    return out


def e_deformation(alg: AInftyAlgebra) -> AInftyAlgebra:
    """``C^e``: ``m_k^e(a) = e^{(2 - k - |m_k(a)| + sum |a_i|)/2} m_k(a)`` with ``E = e d/de``.

    The grading is ``Gr(e^k a) = (2k + |a|) e^k a``, i.e. ``deg(a) = |a| a``.
    With an odd ``t`` the rule is only R-linear if every term ``t b`` of the
    tables has the same basis parity ``|b|``; ``t`` then gets Euler weight
    ``1/2 - |b|`` and any mixture raises :class:`OddParityViolation`.
    """
    ring = alg.ring.with_variables(e=True)
    weights = {Fraction(1, 2) - alg.degrees[b]
               for tab in alg.ops.values() for v in tab.values()
               for (m, b) in v if alg.ring.parity(m)}
    if len(weights) > 1:
        raise OddParityViolation("odd ring coefficients multiply basis elements of both "
                                 "parities; no Euler weight for t fits")
    t_weight = weights.pop() if weights else 0
    ops = {}
    for k, tab in alg.ops.items():
        new = {}
        for w, v in tab.items():
            din = sum(alg.degrees[b] for b in w)
            val = {}
            for (m, b), c in v.items():
                num = 2 - k - alg.term_parity(m, b) + din
                if num % 2:
                    raise OddParityViolation(
                        f"m_{k}{w} has a term of the wrong parity; cannot divide by 2")
                val[((m[0], m[1], m[2] + num // 2), b)] = c
            new[w] = val
        ops[k] = new
    deg = {b: basis_elem(b, 1) for b in range(alg.dim) if alg.degrees[b]}
    grading = EulerGrading(deg, euler_e(ring, t_weight))
    out = AInftyAlgebra(f"{alg.name}^e", alg.basis, alg.degrees, ring, ops, alg.pairing,
                        alg.dimension, grading, alg.unit_vector)
    if out.pairing is not None and not verify_cyclic(out).passed:
        out.pairing = None
    return out


def restrict_algebra(alg: AInftyAlgebra, var: str) -> AInftyAlgebra:
    """Set ``s = 1`` or ``e = 1`` in every table entry."""
    idx = {"s": 1, "e": 2}[var]
    ring = alg.ring.with_variables(**{var: False})
    ops = {}
    for k, tab in alg.ops.items():
        new = {}
        for w, v in tab.items():
            val: dict = {}
            for (m, b), c in v.items():
                m2 = tuple(0 if i == idx else x for i, x in enumerate(m))
                val[(m2, b)] = val.get((m2, b), 0) + c
            new[w] = val
        ops[k] = new
    return AInftyAlgebra(alg.name.rsplit("^", 1)[0], alg.basis, alg.degrees, ring, ops,
                         alg.pairing, alg.dimension, None, alg.unit_vector)


def sample_zoo() -> dict:
    """The shipped samples: four base algebras plus curved and t-deformed variants."""
    X = Matrix([[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 1, 0, 0]])
    algs = [
        field_algebra(),
        field_algebra(3),
        matrix_algebra(),
        matrix_algebra(Fraction(-1, 2)),
        basis_change_family(matrix_algebra(), X, 3, "matrix2~t"),
        exterior_algebra(),
        odd_curved_exterior(),
        square_deformation(exterior_algebra(), 0, 3, "exterior~x2=t"),
        clifford_algebra(),
        clifford_algebra(2),
        square_deformation(clifford_algebra(), 1, 3, "clifford~x2=1+t"),
    ]
    return {a.name: a for a in algs}
