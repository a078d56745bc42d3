"""Chain-level operators: ``b``, ``B``, ``L_phi``, ``b^{1,1}``, ``B^{1,1}``, ``i{phi}``,
the length operator, ``Gr^-`` and the two connections.

Each operator is first computed on a basis word (memoised) and then extended
to chains by ``X(r w) = (-1)^{|X||r|} r X(w)``.  :class:`Op` wraps such maps
with their parity so that supercommutators can be formed directly.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .algebra import AInftyAlgebra, MissingGrading, basis_elem
from .chains import Chain, LengthOverflow
from .cochains import (Cochain, derived_cochain, grading_cochain, m_prime,
                       structure_cochain)
from .ring import ONE, Derivation

__all__ = [
    "Op",
    "bracket",
    "hochschild_b",
    "connes_B",
    "lie_derivative",
    "b11",
    "B11",
    "i_op",
    "cap",
    "pairing",
    "length_gamma",
    "u_derivative",
    "apply_derivation",
    "gr_minus",
    "ggm_connection",
    "u_connection",
    "euler_u_connection",
    "op_b",
    "op_B",
    "op_b_plus_uB",
    "op_L",
    "op_i",
    "op_gamma",
    "op_gr_minus",
    "op_ggm",
    "op_u_connection",
    "op_euler_u_connection",
]

_HALF = Fraction(1, 2)


def _prefix(sd, word):
    eps = [0]
    for b in word:
        eps.append(eps[-1] + sd[b])
    return eps


def _acc(out: dict, key, c):
    out[key] = out.get(key, 0) + c


def _lift(alg: AInftyAlgebra, chain: Chain, word_fn: Callable, parity: int,
          max_length: int | None = None) -> Chain:
    ring = alg.ring
    out: dict = {}
    for (p, mono, word), c in chain.terms.items():
        if parity & ring.parity(mono):
            c = -c
        for (dp, m2, w2), c2 in word_fn(word).items():
            mm = ring.mul(mono, m2)
            if mm is None:
                continue
            if max_length is not None and len(w2) - 1 > max_length:
                raise LengthOverflow(f"word of length {len(w2) - 1} exceeds bound {max_length}")
            _acc(out, (p + dp, mm, w2), c * c2)
    return Chain(out)


def _cached(store: dict, key, fn):
    try:
        return store[key]
    except KeyError:
        val = store[key] = {k: v for k, v in fn().items() if v}
        return val


# ---------------------------------------------------------------------------- word level

def _lie_word(alg: AInftyAlgebra, phi: Callable, p: int, word: tuple) -> dict:
    ring, sd = alg.ring, alg.sdeg
    a0, rest = word[0], word[1:]
    k = len(rest)
    eps = _prefix(sd, rest)
    out: dict = {}
    for i in range(k + 1):
        for j in range(i, k + 1):
            e1, e2, e3 = eps[i], eps[j] - eps[i], eps[k] - eps[j]
            val = phi(rest[j:] + (a0,) + rest[:i])
            if val:
                neg = (e3 * (e2 + e1 + sd[a0])) & 1
                tail = rest[i:j]
                for (mono, x), c in val.items():
                    _acc(out, (0, mono, (x,) + tail), -c if neg else c)
            val = phi(rest[i:j])
            if val:
                base = (p * (e1 + sd[a0])) & 1
                head = (a0,) + rest[:i]
                tail = rest[j:]
                for (mono, x), c in val.items():
                    if x == 0:
                        continue
                    neg = base ^ (ring.parity(mono) & (sd[a0] + e1) & 1)
                    _acc(out, (0, mono, head + (x,) + tail), -c if neg else c)
    return out


def _B_word(alg: AInftyAlgebra, word: tuple) -> dict:
    sd = alg.sdeg
    a0, rest = word[0], word[1:]
    if a0 == 0:
        return {}
    k = len(rest)
    eps = _prefix(sd, rest)
    out: dict = {}
    for i in range(k + 1):
        e1, e2 = eps[i], eps[k] - eps[i]
        neg = (e2 * (sd[a0] + e1)) & 1
        _acc(out, (0, ONE, (0,) + rest[i:] + (a0,) + rest[:i]), -1 if neg else 1)
    return out


def _b11_word(alg: AInftyAlgebra, phi: Cochain, word: tuple) -> dict:
    ring, sd = alg.ring, alg.sdeg
    p = phi.parity
    a0, rest = word[0], word[1:]
    k = len(rest)
    eps = _prefix(sd, rest)
    out: dict = {}
    for i3 in range(k + 1):
        for i4 in range(i3, k + 1):
            y = phi(rest[i3:i4])
            if not y:
                continue
            e4 = eps[i4] - eps[i3]
            e5 = eps[k] - eps[i4]
            for i1 in range(i3 + 1):
                for i2 in range(i1, i3 + 1):
                    e1, e2, e3 = eps[i1], eps[i2] - eps[i1], eps[i3] - eps[i2]
                    dag = ((e3 + e4 + e5) * (sd[a0] + e1 + e2) + p * e3) & 1
                    left = rest[i2:i3]
                    right = rest[i4:] + (a0,) + rest[:i1]
                    tail = rest[i1:i2]
                    for (my, yb), cy in y.items():
                        val = alg.m(left + (yb,) + right)
                        if not val:
                            continue
                        neg = dag ^ (ring.parity(my) & (e3 + 1) & 1)
                        for (mo, x), c in val.items():
                            mm = ring.mul(my, mo)
                            if mm is None:
                                continue
                            _acc(out, (0, mm, (x,) + tail), -(cy * c) if neg else cy * c)
    return out


def _B11_word(alg: AInftyAlgebra, phi: Cochain, word: tuple) -> dict:
    ring, sd = alg.ring, alg.sdeg
    p = phi.parity
    a0, rest = word[0], word[1:]
    if a0 == 0:
        return {}
    k = len(rest)
    eps = _prefix(sd, rest)
    out: dict = {}
    for i2 in range(k + 1):
        for i3 in range(i2, k + 1):
            y = phi(rest[i2:i3])
            if not y:
                continue
            for i1 in range(i2 + 1):
                e1, e2 = eps[i1], eps[i2] - eps[i1]
                e3, e4 = eps[i3] - eps[i2], eps[k] - eps[i3]
                base = (p * e2 + (e1 + sd[a0]) * (e2 + e3 + e4)) & 1
                for (my, yb), cy in y.items():
                    if yb == 0:
                        continue
                    neg = base ^ (ring.parity(my) & (1 + e2) & 1)
                    w = (0,) + rest[i1:i2] + (yb,) + rest[i3:] + (a0,) + rest[:i1]
                    _acc(out, (0, my, w), -cy if neg else cy)
    return out


# ---------------------------------------------------------------------------- chain level

def hochschild_b(alg: AInftyAlgebra, chain: Chain, max_length: int | None = None) -> Chain:
    """The Hochschild differential on reduced chains (``L_m``)."""
    store = alg._cache.setdefault("b", {})
    m = structure_cochain(alg)
    return _lift(alg, chain, lambda w: _cached(store, w, lambda: _lie_word(alg, m, 1, w)), 1,
                 max_length)


def connes_B(alg: AInftyAlgebra, chain: Chain) -> Chain:
    """Connes' operator; outputs are unit-headed words."""
    store = alg._cache.setdefault("B", {})
    return _lift(alg, chain, lambda w: _cached(store, w, lambda: _B_word(alg, w)), 1)


def lie_derivative(alg: AInftyAlgebra, phi: Cochain, chain: Chain) -> Chain:
    """``L_phi``; ``L_m = b``."""
    store = phi.op_cache.setdefault("L", {})
    return _lift(alg, chain,
                 lambda w: _cached(store, w, lambda: _lie_word(alg, phi, phi.parity, w)),
                 phi.parity)


def b11(alg: AInftyAlgebra, phi: Cochain, chain: Chain) -> Chain:
    store = phi.op_cache.setdefault("b11", {})
    return _lift(alg, chain, lambda w: _cached(store, w, lambda: _b11_word(alg, phi, w)),
                 phi.parity + 1)


def B11(alg: AInftyAlgebra, phi: Cochain, chain: Chain) -> Chain:
    store = phi.op_cache.setdefault("B11", {})
    return _lift(alg, chain, lambda w: _cached(store, w, lambda: _B11_word(alg, phi, w)),
                 phi.parity + 1)


def i_op(alg: AInftyAlgebra, phi: Cochain, chain: Chain) -> Chain:
    """``i{phi} = b^{1,1}(phi, -) + u B^{1,1}(phi, -)``."""
    return b11(alg, phi, chain) + B11(alg, phi, chain).shift(1)


def cap(alg: AInftyAlgebra, phi: Cochain, chain: Chain) -> Chain:
    """``phi cap alpha = (-1)^{|phi|} b^{1,1}(phi, alpha)``."""
    out = b11(alg, phi, chain)
    return -out if phi.degree else out


def pairing(alg: AInftyAlgebra, phi: Cochain, chain: Chain) -> dict:
    """``(phi, alpha) = (-1)^{|a_0| (eps(a~) + 1)} <phi(a_1..a_k), a_0>``.

    A ring coefficient in front of a word comes out as ``(-1)^{|r||phi|} r``.
    Returns ``{(u power, monomial): value}``.
    """
    ring, sd = alg.ring, alg.sdeg
    out: dict = {}
    for (p, mono, word), c in chain.terms.items():
        a0, rest = word[0], word[1:]
        y = phi(rest)
        if not y:
            continue
        eps = sum(sd[b] for b in rest)
        neg = ((alg.degrees[a0] * (eps + 1)) + ring.parity(mono) * phi.degree) & 1
        for m2, v in alg.pair(y, basis_elem(a0)).items():
            mm = ring.mul(mono, m2)
            if mm is not None:
                _acc(out, (p, mm), -c * v if neg else c * v)
    return {k: v for k, v in out.items() if v}


def length_gamma(alg: AInftyAlgebra, chain: Chain) -> Chain:
    """``Gamma(a_0[a_1|..|a_k]) = -k a_0[a_1|..|a_k]``."""
    return Chain({k: -(len(k[2]) - 1) * v for k, v in chain.terms.items()})


def u_derivative(chain: Chain) -> Chain:
    return Chain({(p - 1, m, w): p * v for (p, m, w), v in chain.terms.items() if p})


def apply_derivation(alg: AInftyAlgebra, v: Derivation, chain: Chain) -> Chain:
    """``v(r w) = v(r) w`` for basis words ``w``."""
    out: dict = {}
    for (p, mono, w), c in chain.terms.items():
        for m2, c2 in v.on_mono(mono).items():
            _acc(out, (p, m2, w), c * c2)
    return Chain(out)


def gr_minus(alg: AInftyAlgebra, chain: Chain) -> Chain:
    """``Gr^- = L_Gr + Gamma + 2u d/du`` with ``L_Gr = L_deg + 2E`` on coefficients."""
    if alg.grading is None:
        raise MissingGrading(f"algebra {alg.name!r} has no Euler grading")
    deg = grading_cochain(alg)
    out = lie_derivative(alg, deg, chain)
    out = out + apply_derivation(alg, alg.grading.E, chain).scale(2)
    out = out + length_gamma(alg, chain)
    return out + Chain({k: 2 * k[0] * v for k, v in chain.terms.items()})


def _vm(alg: AInftyAlgebra, v: Derivation) -> Cochain:
    store = alg._cache.setdefault("v(m)", {})
    if v not in store:
        store[v] = derived_cochain(v, structure_cochain(alg))
    return store[v]


def ggm_connection(alg: AInftyAlgebra, v: Derivation, chain: Chain) -> Chain:
    """``nabla_v(a) = v(a) + (-1)^{|v|+1} u^-1 i{v(m)}(a)``."""
    corr = i_op(alg, _vm(alg, v), chain).shift(-1)
    return apply_derivation(alg, v, chain) + (corr if v.parity else -corr)


def u_connection(alg: AInftyAlgebra, chain: Chain) -> Chain:
    """Canonical ``nabla_{d/du} = d/du + Gamma/2u + i{m'}/2u^2``."""
    out = u_derivative(chain)
    out = out + length_gamma(alg, chain).shift(-1).scale(_HALF)
    return out + i_op(alg, m_prime(alg), chain).shift(-2).scale(_HALF)


def euler_u_connection(alg: AInftyAlgebra, chain: Chain) -> Chain:
    """``Gr^-/2u - u^-1 nabla_E`` for an Euler-graded algebra."""
    if alg.grading is None:
        raise MissingGrading(f"algebra {alg.name!r} has no Euler grading")
    out = gr_minus(alg, chain).shift(-1).scale(_HALF)
    return out - ggm_connection(alg, alg.grading.E, chain).shift(-1)


# ---------------------------------------------------------------------------- operator algebra

class Op:
    """A chain operator with a parity (``None`` for inhomogeneous combinations)."""

    def __init__(self, fn: Callable[[Chain], Chain], parity: int | None, name: str = "X"):
        self.fn = fn
        self.parity = None if parity is None else parity & 1
        self.name = name

    def __call__(self, chain: Chain) -> Chain:
        return self.fn(chain)

    def __matmul__(self, other: Op) -> Op:
        par = None if self.parity is None or other.parity is None else self.parity + other.parity
        return Op(lambda c: self(other(c)), par, f"{self.name}{other.name}")

    def _par(self, other):
        return self.parity if self.parity == other.parity else None

    def __add__(self, other: Op) -> Op:
        return Op(lambda c: self(c) + other(c), self._par(other), f"({self.name}+{other.name})")

    def __sub__(self, other: Op) -> Op:
        return Op(lambda c: self(c) - other(c), self._par(other), f"({self.name}-{other.name})")

    def scale(self, k) -> Op:
        return Op(lambda c: self(c).scale(k), self.parity, f"{k}{self.name}")

    def shift(self, n: int) -> Op:
        return Op(lambda c: self(c).shift(n), self.parity, f"u^{n}{self.name}")

    def __repr__(self):
        return f"Op({self.name}, parity={self.parity})"


def bracket(X: Op, Y: Op) -> Op:
    """Supercommutator ``XY - (-1)^{|X||Y|} YX``."""
    if X.parity is None or Y.parity is None:
        raise ValueError("supercommutator needs homogeneous operators")
    sign = -1 if (X.parity & Y.parity) else 1
    return Op(lambda c: X(Y(c)) - Y(X(c)).scale(sign), X.parity + Y.parity,
              f"[{X.name},{Y.name}]")


def op_b(alg) -> Op:
    return Op(lambda c: hochschild_b(alg, c), 1, "b")


def op_B(alg) -> Op:
    return Op(lambda c: connes_B(alg, c), 1, "B")


def op_b_plus_uB(alg) -> Op:
    return Op(lambda c: hochschild_b(alg, c) + connes_B(alg, c).shift(1), 1, "(b+uB)")


def op_L(alg, phi: Cochain) -> Op:
    return Op(lambda c: lie_derivative(alg, phi, c), phi.parity, f"L_{phi.name}")


def op_i(alg, phi: Cochain) -> Op:
    return Op(lambda c: i_op(alg, phi, c), phi.parity + 1, f"i{{{phi.name}}}")


def op_gamma(alg) -> Op:
    return Op(lambda c: length_gamma(alg, c), 0, "Gamma")


def op_gr_minus(alg) -> Op:
    return Op(lambda c: gr_minus(alg, c), 0, "Gr-")


def op_ggm(alg, v: Derivation) -> Op:
    return Op(lambda c: ggm_connection(alg, v, c), v.parity, f"nabla_{v.name}")


def op_u_connection(alg) -> Op:
    return Op(lambda c: u_connection(alg, c), 0, "nabla_u")


def op_euler_u_connection(alg) -> Op:
    return Op(lambda c: euler_u_connection(alg, c), 0, "nabla~_u")
