"""Supercommutative coefficient rings ``K[t]/(t^M)[s, 1/s, e, 1/e]``.

Monomials are exponent triples ``(i, j, l)`` for ``t^i s^j e^l``.  Only ``t``
may be odd; ``s`` and ``e`` are even Laurent variables used by the Euler-graded
deformations.  With a single odd generator there are no reordering signs
between monomials, and an odd ``t`` squares to zero.

Ring elements are plain dicts ``{monomial: Fraction}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "ONE",
    "BaseRing",
    "Derivation",
    "d_dt",
    "euler_s",
    "euler_e",
    "bracket_derivations",
    "format_mono",
]

ONE = (0, 0, 0)


@dataclass(frozen=True)
class BaseRing:
    """``t`` of parity ``t_parity`` with ``t^t_order = 0``; ``t_order = 1`` means no ``t``."""

    t_parity: int = 0
    t_order: int = 1
    has_s: bool = False
    has_e: bool = False

    def __post_init__(self):
        if self.t_parity not in (0, 1):
            raise ValueError("t parity must be 0 or 1")
        if self.t_order < 1:
            raise ValueError("t order must be at least 1")
        if self.t_parity == 1 and self.t_order > 2:
            raise ValueError("an odd t squares to zero, so t_order must be at most 2")

    def parity(self, mono) -> int:
        return (mono[0] * self.t_parity) & 1

    def mul(self, a, b):
        """Product of two monomials, or ``None`` when it vanishes."""
        i = a[0] + b[0]
        if i >= self.t_order:
            return None
        return (i, a[1] + b[1], a[2] + b[2])

    def with_variables(self, s: bool | None = None, e: bool | None = None) -> BaseRing:
        return BaseRing(self.t_parity, self.t_order,
                        self.has_s if s is None else s, self.has_e if e is None else e)

    def monomials(self, s_range: int = 1, e_range: int = 1) -> list:
        """Small sample of monomials used by random generators."""
        js = range(-s_range, s_range + 1) if self.has_s else (0,)
        ls = range(-e_range, e_range + 1) if self.has_e else (0,)
        return [(i, j, l) for i in range(self.t_order) for j in js for l in ls]


def format_mono(mono) -> str:
    parts = []
    for name, k in zip("tse", mono):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts) if parts else "1"


class Derivation:
    """K-linear derivation of the coefficient ring, given on monomials.

    Each derivation here sends a monomial to a combination of monomials; that
    is enough for ``d/dt``, the Euler fields and their supercommutators.
    """

    def __init__(self, parity: int, name: str = "v"):
        self.parity = parity
        self.name = name

    def on_mono(self, mono) -> dict:
        raise NotImplementedError

    def apply(self, elem: dict) -> dict:
        out: dict = {}
        for mono, c in elem.items():
            for m2, c2 in self.on_mono(mono).items():
                out[m2] = out.get(m2, 0) + c * c2
        return {k: v for k, v in out.items() if v}

    def __repr__(self):
        return f"Derivation({self.name})"


class _Diagonal(Derivation):
    # sum of a_t t d/dt + a_s s d/ds + a_e e d/de; always even
    def __init__(self, a_t=0, a_s=0, a_e=0, name="E"):
        super().__init__(0, name)
        self.weights = (Fraction(a_t), Fraction(a_s), Fraction(a_e))

    def on_mono(self, mono):
        w = sum(a * k for a, k in zip(self.weights, mono))
        return {mono: w} if w else {}


class _DT(Derivation):
    def on_mono(self, mono):
        if mono[0] == 0:
            return {}
        return {(mono[0] - 1, mono[1], mono[2]): Fraction(mono[0])}


class _Bracket(Derivation):
    def __init__(self, a: Derivation, b: Derivation, scale=1):
        super().__init__((a.parity + b.parity) & 1, f"[{a.name},{b.name}]")
        self.a, self.b, self.scale = a, b, Fraction(scale)

    def on_mono(self, mono):
        out: dict = {}
        sign = -1 if (self.a.parity & self.b.parity) else 1
        for first, second, c in ((self.a, self.b, 1), (self.b, self.a, -sign)):
            for m1, c1 in second.on_mono(mono).items():
                for m2, c2 in first.on_mono(m1).items():
                    out[m2] = out.get(m2, 0) + c * c1 * c2 * self.scale
        return {k: v for k, v in out.items() if v}


def d_dt(ring: BaseRing) -> Derivation:
    return _DT(ring.t_parity, "d/dt")


def euler_s() -> Derivation:
    """``E = (s/2) d/ds``."""
    return _Diagonal(a_s=Fraction(1, 2), name="s/2 d/ds")


def euler_e(ring: BaseRing, t_weight=0) -> Derivation:
    """``E = e d/de + t_weight t d/dt``.

    ``t_weight`` is only ever non-zero for an odd ``t``, where it is chosen
    by :func:`tecalc.hochschild.samples.e_deformation` so that the grading
    rule ``Gr(e^k a) = (2k + |a|) e^k a`` stays compatible with the operations.
    """
    return _Diagonal(a_t=Fraction(t_weight), a_e=1, name="e d/de")


def bracket_derivations(a: Derivation, b: Derivation, scale=1) -> Derivation:
    """Supercommutator ``scale * [a, b]``."""
    return _Bracket(a, b, scale)
