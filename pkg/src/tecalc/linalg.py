"""Small exact dense matrices and exact linear solvers.

Entries are :data:`~tecalc.scalars.Scalar` values.  Everything here is
plain Gaussian elimination; the matrices in this package are tiny, and the
one large system (the global morphism solve) goes through
:func:`solve_sparse_system`, which keeps rows as dicts.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import GaussianRational, Scalar, as_scalar, format_scalar

__all__ = [
    "Matrix",
    "SingularMatrixError",
    "InconsistentSystemError",
    "solve_sparse_system",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SingularMatrixError(ArithmeticError):
    pass


class InconsistentSystemError(ArithmeticError):
    pass


class Matrix:
    """Immutable exact matrix.

    >>> Matrix([[1, 2], [3, 4]]).det()
    Fraction(-2, 1)
    """

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(as_scalar(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged matrix rows")
        self.rows = data
        self.nrows = len(data)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, ncols: int) -> Matrix:
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        m._hash = None
        return m

    # construction -----------------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> Matrix:
        ncols = nrows if ncols is None else ncols
        return cls._raw(tuple((_ZERO,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls._raw(tuple(tuple(_ONE if i == j else _ZERO for j in range(n))
                              for i in range(n)), n)

    @classmethod
    def scalar(cls, n: int, c) -> Matrix:
        c = as_scalar(c)
        return cls._raw(tuple(tuple(c if i == j else _ZERO for j in range(n))
                              for i in range(n)), n)

    @classmethod
    def diag(cls, values: Sequence) -> Matrix:
        vals = [as_scalar(v) for v in values]
        n = len(vals)
        return cls._raw(tuple(tuple(vals[i] if i == j else _ZERO for j in range(n))
                              for i in range(n)), n)

    @classmethod
    def column(cls, values: Sequence) -> Matrix:
        return cls([[v] for v in values], 1)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> Matrix:
        cols = [[as_scalar(x) for x in c] for c in columns]
        n = len(cols[0]) if cols else 0
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(n)), len(cols))

    @classmethod
    def block_diag(cls, blocks: Sequence[Matrix]) -> Matrix:
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        rows = [[_ZERO] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    rows[r0 + i][c0 + j] = b.rows[i][j]
            r0 += b.nrows
            c0 += b.ncols
        return cls._raw(tuple(tuple(r) for r in rows), m)

    # access -----------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows),
                           len(cols))

    def with_entry(self, i: int, j: int, value) -> Matrix:
        rows = [list(r) for r in self.rows]
        rows[i][j] = as_scalar(value)
        return Matrix._raw(tuple(tuple(r) for r in rows), self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return not any(x for row in self.rows for x in row)

    def entries(self):
        for row in self.rows:
            yield from row

    # arithmetic -------------------------------------------------------------
    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> Matrix:
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def scale(self, c) -> Matrix:
        c = as_scalar(c)
        if not c:
            return Matrix.zeros(self.nrows, self.ncols)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def __mul__(self, c) -> Matrix:
        if isinstance(c, Matrix):
            return self @ c
        return self.scale(c)

    def __rmul__(self, c) -> Matrix:
        return self.scale(c)

    def __matmul__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        out = []
        for row in self.rows:
            nz = [(k, a) for k, a in enumerate(row) if a]
            out_row = []
            for c in cols:
                s = _ZERO
                for k, a in nz:
                    b = c[k]
                    if b:
                        s = s + a * b
                out_row.append(s)
            out.append(tuple(out_row))
        return Matrix._raw(tuple(out), other.ncols)

    def __pow__(self, n: int) -> Matrix:
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        result = Matrix.identity(self.nrows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def commutator(self, other: Matrix) -> Matrix:
        return self @ other - other @ self

    @property
    def T(self) -> Matrix:
        return Matrix._raw(tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def conj(self) -> Matrix:
        return Matrix._raw(tuple(tuple(x.conjugate() if isinstance(x, GaussianRational) else x
                                       for x in r) for r in self.rows), self.ncols)

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.nrows)), _ZERO)

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self.rows))
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(format_scalar(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"

    def to_strings(self) -> list[list[str]]:
        return [[format_scalar(x) for x in r] for r in self.rows]

    # elimination ------------------------------------------------------------
    def rref(self) -> tuple[Matrix, list[int]]:
        """Reduced row echelon form and pivot columns."""
        rows = [list(r) for r in self.rows]
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            p = next((i for i in range(r, self.nrows) if rows[i][c]), None)
            if p is None:
                continue
            rows[r], rows[p] = rows[p], rows[r]
            inv = 1 / rows[r][c]
            rows[r] = [x * inv for x in rows[r]]
            for i in range(self.nrows):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return Matrix._raw(tuple(tuple(x) for x in rows), self.ncols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[tuple]:
        """Basis of the right kernel; each vector has a 1 at its free column."""
        red, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            v = [_ZERO] * self.ncols
            v[f] = _ONE
            for i, p in enumerate(pivots):
                v[p] = -red.rows[i][f]
            basis.append(tuple(v))
        return basis

    def column_space_basis(self) -> list[tuple]:
        _, pivots = self.rref()
        return [self.col(p) for p in pivots]

    def inverse(self) -> Matrix:
        if not self.is_square():
            raise SingularMatrixError("non-square matrix has no inverse")
        n = self.nrows
        aug = Matrix._raw(tuple(self.rows[i] + Matrix.identity(n).rows[i] for i in range(n)),
                          2 * n)
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise SingularMatrixError("matrix is singular")
        return Matrix._raw(tuple(r[n:] for r in red.rows), n)

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.nrows

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        rows = [list(r) for r in self.rows]
        n = self.nrows
        det = _ONE
        for c in range(n):
            p = next((i for i in range(c, n) if rows[i][c]), None)
            if p is None:
                return _ZERO
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                det = -det
            det = det * rows[c][c]
            inv = 1 / rows[c][c]
            for i in range(c + 1, n):
                if rows[i][c]:
                    f = rows[i][c] * inv
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        return det

    def solve(self, rhs: Matrix) -> Matrix:
        """Unique solution X of ``self @ X = rhs``; raises if not unique or inconsistent."""
        n = self.ncols
        aug = Matrix._raw(tuple(self.rows[i] + rhs.rows[i] for i in range(self.nrows)),
                          n + rhs.ncols)
        red, pivots = aug.rref()
        if any(p >= n for p in pivots):
            raise InconsistentSystemError("linear system has no solution")
        if len(pivots) < n:
            raise SingularMatrixError("linear system has no unique solution")
        return Matrix._raw(tuple(red.rows[i][n:] for i in range(n)), rhs.ncols)

    def charpoly(self) -> list:
        """Coefficients ``[c0, c1, ..., 1]`` of det(x - A), by the Faddeev-LeVerrier recursion."""
        n = self.nrows
        coeffs = [_ZERO] * (n + 1)
        coeffs[n] = _ONE
        m = Matrix.zeros(n)
        ident = Matrix.identity(n)
        for k in range(1, n + 1):
            m = self @ m + ident.scale(coeffs[n - k + 1])
            coeffs[n - k] = -(self @ m).trace() / k
        return coeffs


def solve_sparse_system(rows: list[dict[int, Scalar]], rhs: list[Scalar], nvars: int):
    """Solve a sparse exact system ``rows . x = rhs``.

    Returns ``(particular, kernel)`` where ``particular`` is a dict solution
    with free variables set to zero and ``kernel`` is a list of dict vectors
    spanning the homogeneous solutions.  Raises
    :class:`InconsistentSystemError` when there is no solution.
    """
    pivot_rows: dict[int, tuple[dict, Scalar]] = {}
    for row, b in zip(rows, rhs):
        row = {k: as_scalar(v) for k, v in row.items() if v}
        b = as_scalar(b)
        # reduce against existing pivots
        changed = True
        while changed:
            changed = False
            for col in list(row):
                if col in pivot_rows and row.get(col):
                    prow, pb = pivot_rows[col]
                    f = row[col]
                    for k, v in prow.items():
                        nv = row.get(k, _ZERO) - f * v
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
                    b = b - f * pb
                    changed = True
        if not row:
            if b:
                raise InconsistentSystemError("linear system has no solution")
            continue
        col = min(row)
        inv = 1 / row[col]
        row = {k: v * inv for k, v in row.items()}
        b = b * inv
        # back-substitute into existing pivot rows
        for pc, (prow, pb) in list(pivot_rows.items()):
            f = prow.get(col)
            if f:
                for k, v in row.items():
                    nv = prow.get(k, _ZERO) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
                pivot_rows[pc] = (prow, pb - f * b)
        pivot_rows[col] = (row, b)
    particular = {c: b for c, (_, b) in pivot_rows.items() if b}
    free = [c for c in range(nvars) if c not in pivot_rows]
    kernel = []
    for f in free:
        vec = {f: _ONE}
        for c, (prow, _) in pivot_rows.items():
            v = prow.get(f)
            if v:
                vec[c] = -v
        kernel.append(vec)
    return particular, kernel
