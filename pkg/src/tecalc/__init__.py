"""Exact computations with formal connections of pole order two and the
chain-level Hochschild calculus of finite-dimensional A-infinity algebras."""
from __future__ import annotations

from .linalg import Matrix
from .scalars import GaussianRational, ParseError, format_scalar, parse_scalar
from .series import MatrixSeries, NotAUnit, TruncatedSeries

__all__ = [
    "GaussianRational",
    "Matrix",
    "MatrixSeries",
    "NotAUnit",
    "ParseError",
    "TruncatedSeries",
    "format_scalar",
    "parse_scalar",
]
