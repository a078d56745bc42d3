"""Reduced negative cyclic chains ``sum u^p r a_0[a_1|...|a_k]``.

A chain is a dict ``{(p, monomial, word): Fraction}`` where ``word`` is a
tuple of basis indices ``(a_0, a_1, ..., a_k)`` and ``p`` is the power of the
even variable ``u`` (negative powers appear in connection outputs).  Slots
``1..k`` never hold the unit: such words are zero in the reduced complex.
All tensor factors sit in shifted degree, so moving a ring coefficient from
slot ``i`` to the front costs ``(-1)^{|r| (|a_0|' + ... + |a_{i-1}|')}``.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .algebra import AInftyAlgebra
from .ring import ONE

__all__ = ["Chain", "LengthOverflow", "random_chain"]


class LengthOverflow(OverflowError):
    """An operator produced a word longer than the configured bound."""


class Chain:
    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def word(cls, word, c=1, mono=ONE, upower: int = 0) -> Chain:
        word = tuple(word)
        if not word:
            raise ValueError("a chain word needs the slot a_0")
        if any(b == 0 for b in word[1:]):
            raise ValueError("the unit cannot sit in a bar slot of a reduced chain")
        return cls({(upower, mono, word): Fraction(c)})

    @classmethod
    def zero(cls) -> Chain:
        return cls()

    def __add__(self, other: Chain) -> Chain:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Chain(out)

    def __sub__(self, other: Chain) -> Chain:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) - v
        return Chain(out)

    def __neg__(self) -> Chain:
        return Chain({k: -v for k, v in self.terms.items()})

    def scale(self, c) -> Chain:
        return Chain({k: c * v for k, v in self.terms.items()})

    def shift(self, n: int) -> Chain:
        """Multiply by ``u^n``."""
        return Chain({(p + n, m, w): v for (p, m, w), v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def max_length(self) -> int:
        return max((len(w) - 1 for (_, _, w) in self.terms), default=-1)

    def upart(self, p: int) -> Chain:
        """Terms with ``u^p`` (kept at that power)."""
        return Chain({k: v for k, v in self.terms.items() if k[0] == p})

    def truncate_t(self, n: int) -> Chain:
        """Drop every term whose coefficient is divisible by ``t^n``."""
        return Chain({k: v for k, v in self.terms.items() if k[1][0] < n})

    def restrict(self, var: str) -> Chain:
        """Set ``s = 1`` or ``e = 1`` in every coefficient."""
        idx = {"s": 1, "e": 2}[var]
        out: dict = {}
        for (p, m, w), v in self.terms.items():
            m2 = tuple(0 if i == idx else x for i, x in enumerate(m))
            out[(p, m2, w)] = out.get((p, m2, w), 0) + v
        return Chain(out)

    def __repr__(self):
        if not self.terms:
            return "Chain(0)"
        parts = [f"{v}*u^{p}*{m}*{w}" for (p, m, w), v in sorted(self.terms.items())]
        return "Chain(" + " + ".join(parts) + ")"

    def render(self, alg: AInftyAlgebra) -> str:
        from .ring import format_mono
        if not self.terms:
            return "0"
        out = []
        for (p, m, w), v in sorted(self.terms.items()):
            names = [alg.basis[b] for b in w]
            word = names[0] + ("[" + "|".join(names[1:]) + "]" if len(names) > 1 else "")
            coeff = str(v) if m == ONE else f"{v}*{format_mono(m)}"
            upow = "" if p == 0 else (f"*u^{p}" if p != 1 else "*u")
            out.append(f"{coeff}{upow}*{word}")
        return " + ".join(out)


def random_chain(alg: AInftyAlgebra, rng: random.Random, maxlen: int = 4,
                 terms: int = 2, max_upower: int = 2) -> Chain:
    """A few random reduced words with random exact coefficients and ring monomials."""
    monos = alg.ring.monomials()
    nonunit = list(alg.nonunit())
    out: dict = {}
    for _ in range(rng.randint(1, terms)):
        k = rng.randint(0, maxlen) if nonunit else 0
        word = (rng.randrange(alg.dim),) + tuple(rng.choice(nonunit) for _ in range(k))
        key = (rng.randint(0, max_upower), rng.choice(monos), word)
        out[key] = out.get(key, 0) + Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 4))
    return Chain(out)
