"""Truncated power series in one even variable ``u``.

A series carries its truncation order ``N``: coefficients of ``u^0 .. u^N``
are known exactly and nothing beyond is claimed.  Binary operations return
the minimum of the operand orders and never pad.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .linalg import Matrix, SingularMatrixError
from .scalars import as_scalar, format_scalar

__all__ = ["NotAUnit", "TruncatedSeries", "MatrixSeries"]

_ZERO = Fraction(0)


class NotAUnit(ArithmeticError):
    """Constant term of a series (or matrix series) is not invertible."""


class TruncatedSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence, order: int | None = None):
        cs = [as_scalar(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("truncation order must be non-negative")
            cs = (cs + [_ZERO] * (order + 1))[:order + 1]
        if not cs:
            raise ValueError("a series needs at least one coefficient")
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, order: int) -> TruncatedSeries:
        return cls([c], order)

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError("truncate cannot extend precision")
        return TruncatedSeries(self.coeffs[:order + 1])

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        n = min(self.order, other.order)
        return TruncatedSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)])

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        n = min(self.order, other.order)
        return TruncatedSeries([self.coeffs[k] - other.coeffs[k] for k in range(n + 1)])

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries([-c for c in self.coeffs])

    def scale(self, c) -> TruncatedSeries:
        c = as_scalar(c)
        return TruncatedSeries([c * x for x in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            s = _ZERO
            for i in range(k + 1):
                if a[i] and b[k - i]:
                    s = s + a[i] * b[k - i]
            out.append(s)
        return TruncatedSeries(out)

    def __rmul__(self, c):
        return self.scale(c)

    def invert(self) -> TruncatedSeries:
        a = self.coeffs
        if not a[0]:
            raise NotAUnit("series with zero constant term is not invertible")
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, self.order + 1):
            s = _ZERO
            for i in range(1, k + 1):
                if a[i]:
                    s = s + a[i] * out[k - i]
            out.append(-s * inv0)
        return TruncatedSeries(out)

    def derivative(self) -> TruncatedSeries:
        if self.order == 0:
            raise ValueError("derivative of an order-0 series has no known coefficients")
        return TruncatedSeries([k * self.coeffs[k] for k in range(1, self.order + 1)])

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"TruncatedSeries([{', '.join(format_scalar(c) for c in self.coeffs)}])"


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_invert(a):
    return a.invert()


def series_derivative(a):
    return a.derivative()


class MatrixSeries:
    """Square (or column) matrix-valued truncated series ``sum_k M_k u^k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Matrix], order: int | None = None):
        cs = list(coeffs)
        if not cs:
            raise ValueError("a matrix series needs at least one coefficient")
        shape = cs[0].shape
        for m in cs:
            if m.shape != shape:
                raise ValueError("all coefficients of a matrix series must share a shape")
        if order is not None:
            cs = (cs + [Matrix.zeros(*shape)] * (order + 1))[:order + 1]
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs[0].shape

    @property
    def rank(self) -> int:
        return self.coeffs[0].nrows

    @classmethod
    def constant(cls, m: Matrix, order: int) -> MatrixSeries:
        return cls([m], order)

    @classmethod
    def identity(cls, n: int, order: int) -> MatrixSeries:
        return cls([Matrix.identity(n)], order)

    @classmethod
    def zero(cls, nrows: int, ncols: int, order: int) -> MatrixSeries:
        return cls([Matrix.zeros(nrows, ncols)], order)

    @classmethod
    def monomial(cls, m: Matrix, power: int, order: int) -> MatrixSeries:
        """``m u^power`` with the identity added as constant term: ``Id + u^power m``."""
        n = m.nrows
        cs = [Matrix.identity(n)] + [Matrix.zeros(n)] * order
        if power <= order:
            cs[power] = cs[power] + m
        return cls(cs[:order + 1])

    def __getitem__(self, k: int) -> Matrix:
        return self.coeffs[k]

    def entry(self, i: int, j: int) -> TruncatedSeries:
        return TruncatedSeries([m[i, j] for m in self.coeffs])

    def truncate(self, order: int) -> MatrixSeries:
        if order > self.order:
            raise ValueError("truncate cannot extend precision")
        return MatrixSeries(self.coeffs[:order + 1])

    def __add__(self, other: MatrixSeries) -> MatrixSeries:
        n = min(self.order, other.order)
        return MatrixSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)])

    def __sub__(self, other: MatrixSeries) -> MatrixSeries:
        n = min(self.order, other.order)
        return MatrixSeries([self.coeffs[k] - other.coeffs[k] for k in range(n + 1)])

    def __neg__(self) -> MatrixSeries:
        return MatrixSeries([-m for m in self.coeffs])

    def scale(self, c) -> MatrixSeries:
        return MatrixSeries([m.scale(c) for m in self.coeffs])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return MatrixSeries([m @ other for m in self.coeffs])
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            s = None
            for i in range(k + 1):
                if a[i].is_zero() or b[k - i].is_zero():
                    continue
                term = a[i] @ b[k - i]
                s = term if s is None else s + term
            out.append(s if s is not None else Matrix.zeros(a[0].nrows, b[0].ncols))
        return MatrixSeries(out)

    def __rmatmul__(self, other: Matrix):
        return MatrixSeries([other @ m for m in self.coeffs])

    def shift(self, power: int) -> MatrixSeries:
        """Multiply by ``u^power`` (power >= 0); the order grows by ``power``."""
        z = Matrix.zeros(*self.shape)
        return MatrixSeries([z] * power + list(self.coeffs))

    def invert(self) -> MatrixSeries:
        try:
            inv0 = self.coeffs[0].inverse()
        except SingularMatrixError as exc:
            raise NotAUnit("constant term of the matrix series is singular") from exc
        out = [inv0]
        for k in range(1, self.order + 1):
            s = None
            for i in range(1, k + 1):
                if self.coeffs[i].is_zero():
                    continue
                term = self.coeffs[i] @ out[k - i]
                s = term if s is None else s + term
            out.append(-(inv0 @ s) if s is not None else Matrix.zeros(*self.shape))
        return MatrixSeries(out)

    def derivative(self) -> MatrixSeries:
        if self.order == 0:
            raise ValueError("derivative of an order-0 series has no known coefficients")
        return MatrixSeries([self.coeffs[k].scale(k) for k in range(1, self.order + 1)])

    def transpose(self) -> MatrixSeries:
        return MatrixSeries([m.T for m in self.coeffs])

    def substitute_neg(self) -> MatrixSeries:
        """``M(-u)``."""
        return MatrixSeries([m if k % 2 == 0 else -m for k, m in enumerate(self.coeffs)])

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.coeffs)

    def first_nonzero(self) -> int | None:
        for k, m in enumerate(self.coeffs):
            if not m.is_zero():
                return k
        return None

    def __eq__(self, other):
        if not isinstance(other, MatrixSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"MatrixSeries(order={self.order}, coeffs={list(self.coeffs)!r})"
