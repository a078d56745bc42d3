"""Exact scalars over Q and the Gaussian rationals Q(i).

Rationals are plain :class:`fractions.Fraction` values.  Gaussian rationals
use :class:`GaussianRational`, which interoperates with ``Fraction`` and
``int`` in both operand positions.  Every value can be written to and read
back from the string forms ``"p/q"`` and ``"p/q+r/s*i"`` without loss.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

__all__ = [
    "GaussianRational",
    "Scalar",
    "ParseError",
    "as_scalar",
    "parse_scalar",
    "format_scalar",
    "is_zero",
    "conjugate",
    "scalar_field",
    "decimal_display",
]


class ParseError(ValueError):
    """Malformed exact-scalar string or spec file."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (GaussianRational(1) / self) ** (-n)
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, GaussianRational]


def as_scalar(x) -> Scalar:
    """Coerce ints, Fractions, Gaussian rationals and exact strings."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, complex):
        raise TypeError("floating-point complex numbers are not exact scalars")
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


def is_zero(x) -> bool:
    return not x


def conjugate(x: Scalar) -> Scalar:
    if isinstance(x, GaussianRational):
        return x.conjugate()
    return x


def scalar_field(values) -> str:
    """Return ``"Q(i)"`` if any value has a nonzero imaginary part, else ``"Q"``."""
    for v in values:
        if isinstance(v, GaussianRational) and v.im != 0:
            return "Q(i)"
    return "Q"


_RAT = r"[+-]?\d+(?:/\d+)?"
_RAT_RE = re.compile(rf"^{_RAT}$")
_GAUSS_RE = re.compile(rf"^(?:({_RAT})(?=[+-]))?([+-]?(?:\d+(?:/\d+)?)?)\*?i$")


def _parse_rational(text: str, location: str | None) -> Fraction:
    if not _RAT_RE.match(text):
        raise ParseError(f"malformed rational {text!r}", location)
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in {text!r}", location)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def parse_scalar(text: str, location: str | None = None) -> Scalar:
    """Parse ``"p/q"``, ``"p/q+r/s*i"`` or ``"r/s*i"`` exactly.

    >>> parse_scalar("3/2+1/4*i")
    GaussianRational('3/2+1/4*i')
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string scalar, got {type(text).__name__}", location)
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError("empty scalar", location)
    if not s.endswith("i"):
        return _parse_rational(s, location)
    m = _GAUSS_RE.match(s)
    if not m:
        raise ParseError(f"malformed Gaussian rational {text!r}", location)
    re_part = _parse_rational(m.group(1), location) if m.group(1) else Fraction(0)
    im_text = m.group(2)
    if im_text in ("", "+"):
        im_part = Fraction(1)
    elif im_text == "-":
        im_part = Fraction(-1)
    else:
        im_part = _parse_rational(im_text, location)
    return GaussianRational(re_part, im_part)


def _format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Canonical exact string; Gaussian values with zero imaginary part print as rationals
    but keep the ``+0*i`` marker so the type survives a round trip."""
    if isinstance(x, GaussianRational):
        im = _format_rational(x.im)
        sign = "" if im.startswith("-") else "+"
        return f"{_format_rational(x.re)}{sign}{im}*i"
    return _format_rational(Fraction(x))


def decimal_display(x, digits: int = 12) -> str:
    """Display-only decimal rendering.  Never use the result in a comparison."""
    def dec(q: Fraction) -> str:
        return f"{float(q):.{digits}g}"
    if isinstance(x, GaussianRational):
        return f"{dec(x.re)}{'+' if x.im >= 0 else '-'}{dec(abs(x.im))}i"
    return dec(Fraction(x))
