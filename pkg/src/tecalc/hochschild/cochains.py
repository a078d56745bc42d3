"""Reduced Hochschild cochains as lazily evaluated multilinear maps.

A cochain is known through its values on basis words; it is extended to
module elements with the R-linearity rule
``phi(a_1, .., r a_i, ..) = (-1)^{|r| (|a_1|' + .. + |a_{i-1}|' + |phi|')} r phi(..)``
(see :func:`tecalc.hochschild.algebra.apply_multilinear`).  ``parity`` is
always the shifted degree ``|phi|'``; ``m`` itself has ``|m|' = 1``.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from ..scalars import as_scalar
from .algebra import AInftyAlgebra, add_elem, apply_multilinear, basis_elem, _clean
from .ring import Derivation

__all__ = [
    "Cochain",
    "TableCochain",
    "structure_cochain",
    "arity_weighted",
    "m_prime",
    "linear_combination",
    "gerstenhaber_product",
    "gerstenhaber",
    "M2",
    "cup",
    "derived_cochain",
    "grading_cochain",
    "random_cochain",
    "random_element",
    "cochains_agree",
]


class Cochain:
    """Multilinear map on basis words with memoised values."""

    def __init__(self, alg: AInftyAlgebra, parity: int, name: str = "phi"):
        self.alg = alg
        self.parity = parity & 1
        self.name = name
        self._memo: dict = {}
        self.op_cache: dict = {}

    def __call__(self, word: tuple) -> dict:
        try:
            return self._memo[word]
        except KeyError:
            val = self._memo[word] = _clean(self._compute(word))
            return val

    def _compute(self, word: tuple) -> dict:
        raise NotImplementedError

    def on(self, elems) -> dict:
        """Value on arbitrary module elements."""
        return apply_multilinear(self.alg, self, self.parity, elems)

    @property
    def degree(self) -> int:
        """Unshifted degree ``|phi| = |phi|' + 1`` modulo 2."""
        return (self.parity + 1) & 1

    def __repr__(self):
        return f"Cochain({self.name}, parity={self.parity})"


class TableCochain(Cochain):
    def __init__(self, alg, parity, table: dict, name="phi"):
        super().__init__(alg, parity, name)
        self.table = {tuple(w): _clean(v) for w, v in table.items() if _clean(v)}

    def _compute(self, word):
        return self.table.get(word, {})


class _Func(Cochain):
    def __init__(self, alg, parity, fn: Callable, name):
        super().__init__(alg, parity, name)
        self.fn = fn

    def _compute(self, word):
        return self.fn(word)


def structure_cochain(alg: AInftyAlgebra) -> Cochain:
    """The cochain ``m = sum_k m_k`` (shared per algebra)."""
    c = alg._cache.get("m")
    if c is None:
        c = alg._cache["m"] = _Func(alg, 1, alg.m, "m")
    return c


def arity_weighted(phi: Cochain, weight: Callable[[int], object], name: str = "") -> Cochain:
    """``sum_k weight(k) phi_k``; ``m' = arity_weighted(m, lambda k: 2 - k)``."""
    def fn(word):
        w = weight(len(word))
        return {k: w * v for k, v in phi(word).items()} if w else {}
    return _Func(phi.alg, phi.parity, fn, name or f"w({phi.name})")


def m_prime(alg: AInftyAlgebra) -> Cochain:
    c = alg._cache.get("m'")
    if c is None:
        c = alg._cache["m'"] = arity_weighted(structure_cochain(alg), lambda k: 2 - k, "m'")
    return c


def linear_combination(terms, name: str = "sum") -> Cochain:
    """``sum c_i phi_i`` for cochains of one parity."""
    terms = [(as_scalar(c), phi) for c, phi in terms]
    parities = {phi.parity for _, phi in terms}
    if len(parities) != 1:
        raise ValueError("linear combinations need cochains of a single parity")
    alg = terms[0][1].alg

    def fn(word):
        out: dict = {}
        for c, phi in terms:
            add_elem(out, phi(word), c)
        return out
    return _Func(alg, parities.pop(), fn, name)


def _prefix(sd, word):
    eps = [0]
    for b in word:
        eps.append(eps[-1] + sd[b])
    return eps


def gerstenhaber_product(phi: Cochain, psi: Cochain) -> Cochain:
    """``phi o psi (a) = sum (-1)^{|psi|' eps_1} phi(a^(1), psi(a^(2)), a^(3))``."""
    alg = phi.alg
    sd = alg.sdeg

    def fn(word):
        k = len(word)
        eps = _prefix(sd, word)
        out: dict = {}
        for i in range(k + 1):
            for j in range(i, k + 1):
                inner = psi(word[i:j])
                if not inner:
                    continue
                elems = ([basis_elem(b) for b in word[:i]] + [inner]
                         + [basis_elem(b) for b in word[j:]])
                val = phi.on(elems)
                add_elem(out, val, -1 if (psi.parity * eps[i]) & 1 else 1)
        return out
    return _Func(alg, phi.parity + psi.parity, fn, f"{phi.name}o{psi.name}")


def gerstenhaber(phi: Cochain, psi: Cochain) -> Cochain:
    """Bracket ``[phi, psi] = phi o psi - (-1)^{|phi|'|psi|'} psi o phi``."""
    a = gerstenhaber_product(phi, psi)
    b = gerstenhaber_product(psi, phi)
    sign = -1 if (phi.parity & psi.parity) else 1

    def fn(word):
        return add_elem(dict(a(word)), b(word), -sign)
    return _Func(phi.alg, phi.parity + psi.parity, fn, f"[{phi.name},{psi.name}]")


def M2(psi: Cochain, phi: Cochain) -> Cochain:
    """``M^2(psi, phi)(a) = sum (-1)^{|psi|' e1 + |phi|'(e1+e2+e3)} m(a1, psi(a2), a3, phi(a4), a5)``."""
    alg = phi.alg
    sd = alg.sdeg
    m = structure_cochain(alg)

    def fn(word):
        k = len(word)
        eps = _prefix(sd, word)
        out: dict = {}
        for i1 in range(k + 1):
            for i2 in range(i1, k + 1):
                x = psi(word[i1:i2])
                if not x:
                    continue
                for i3 in range(i2, k + 1):
                    for i4 in range(i3, k + 1):
                        y = phi(word[i3:i4])
                        if not y:
                            continue
                        e1 = eps[i1]
                        e123 = eps[i3]
                        sign = (psi.parity * e1 + phi.parity * e123) & 1
                        elems = ([basis_elem(b) for b in word[:i1]] + [x]
                                 + [basis_elem(b) for b in word[i2:i3]] + [y]
                                 + [basis_elem(b) for b in word[i4:]])
                        add_elem(out, m.on(elems), -1 if sign else 1)
        return out
    return _Func(alg, psi.parity + phi.parity + 1, fn, f"M2({psi.name},{phi.name})")


def cup(psi: Cochain, phi: Cochain) -> Cochain:
    """``psi u phi = (-1)^{|psi|} M^2(psi, phi)``."""
    mm = M2(psi, phi)
    sign = -1 if psi.degree else 1
    return _Func(psi.alg, mm.parity, lambda w: {k: sign * v for k, v in mm(w).items()},
                 f"{psi.name}u{phi.name}")


def derived_cochain(v: Derivation, phi: Cochain) -> Cochain:
    """``v(phi)``: on basis words ``v(phi)(a) = v(phi(a))``, as basis elements are ``v``-constant."""
    def fn(word):
        out: dict = {}
        for (mono, b), c in phi(word).items():
            for m2, c2 in v.on_mono(mono).items():
                out[(m2, b)] = out.get((m2, b), 0) + c * c2
        return out
    return _Func(phi.alg, phi.parity + v.parity, fn, f"{v.name}({phi.name})")


def grading_cochain(alg: AInftyAlgebra) -> Cochain:
    """The R-linear part ``deg = Gr - 2E`` as a length-one cochain of shifted parity 0."""
    if alg.grading is None:
        from .algebra import MissingGrading
        raise MissingGrading(f"algebra {alg.name!r} has no Euler grading")
    c = alg._cache.get("deg")
    if c is None:
        table = {(b,): v for b, v in alg.grading.deg.items()}
        c = alg._cache["deg"] = TableCochain(alg, 0, table, "deg")
    return c


def random_element(alg: AInftyAlgebra, rng: random.Random, parity: int,
                   nonunit: bool = False, terms: int = 2) -> dict:
    """Random homogeneous module element of the given (unshifted) parity."""
    monos = alg.ring.monomials()
    letters = list(alg.nonunit() if nonunit else range(alg.dim))
    choices = [(m, b) for m in monos for b in letters if alg.term_parity(m, b) == parity]
    out: dict = {}
    if not choices:
        return out
    for _ in range(rng.randint(1, terms)):
        key = rng.choice(choices)
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        out[key] = out.get(key, 0) + c
    return _clean(out)


def random_cochain(alg: AInftyAlgebra, rng: random.Random, parity: int,
                   max_arity: int = 3, density: float = 0.35, name: str = "phi") -> Cochain:
    """Random reduced cochain: values only on words of non-unit basis elements."""
    sd = alg.sdeg
    table: dict = {}
    letters = list(alg.nonunit())
    for k in range(max_arity + 1):
        words = [()] if k == 0 else _all_words(letters, k)
        for w in words:
            if rng.random() >= density:
                continue
            target = (parity + sum(sd[b] for b in w) + 1) & 1
            val = random_element(alg, rng, target)
            if val:
                table[w] = val
    return TableCochain(alg, parity, table, name)


def _all_words(letters, k):
    import itertools
    return list(itertools.product(letters, repeat=k))


def cochains_agree(phi: Cochain, psi: Cochain, max_arity: int, letters=None) -> tuple | None:
    """First basis word (up to ``max_arity``) where the two cochains differ, else ``None``."""
    letters = list(range(phi.alg.dim)) if letters is None else list(letters)
    for k in range(max_arity + 1):
        for w in ([()] if k == 0 else _all_words(letters, k)):
            if _clean(add_elem(dict(phi(w)), psi(w), -1)):
                return w
    return None
