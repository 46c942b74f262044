"""Exact linear algebra over Q.

Everything downstream (annihilators, Gram matrices, normal forms) reduces to
row reduction of matrices with Fraction entries, so the conventions here are
pinned down once and for all:

  * ``rref`` returns the reduced row echelon form, which is unique, together
    with the strictly increasing tuple of pivot columns and the rank.
  * ``kernel_basis`` derives its basis from the rref by setting one free
    variable to 1 (free columns taken in increasing order) and the others
    to 0.  Two mathematically equal matrices therefore always produce the
    identical kernel basis.
  * ``solve`` returns the particular solution with all free variables zero,
    or None when the system is inconsistent.

No floats are ever produced; integer inputs are coerced to Fraction.

>>> m = QMatrix.from_rows([[1, 1], [0, 1]])
>>> invert(m).to_rows()
[[Fraction(1, 1), Fraction(-1, 1)], [Fraction(0, 1), Fraction(1, 1)]]
>>> kernel_basis(QMatrix.from_rows([[1, 1, 0]]))
[(Fraction(-1, 1), Fraction(1, 1), Fraction(0, 1)), (Fraction(0, 1), Fraction(0, 1), Fraction(1, 1))]
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import DomainError, SingularMatrix

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise DomainError("float entries are not allowed; use Fraction or int")
    return Fraction(v)


class QMatrix:
    """Immutable dense matrix over Q.

    Stored as a tuple of row tuples.  A matrix may have zero rows (the
    matrix of a map into the zero space); the column count is kept
    explicitly so such matrices still know their domain.
    """

    __slots__ = ("_data", "nrows", "ncols")

    def __init__(self, data: Iterable[Iterable], ncols: Optional[int] = None):
        rows = tuple(tuple(_frac(v) for v in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DomainError("ragged rows")
            if ncols is not None and ncols != width:
                raise DomainError("ncols disagrees with row length")
            ncols = width
        elif ncols is None:
            ncols = 0
        object.__setattr__(self, "_data", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: Optional[int] = None) -> "QMatrix":
        return cls(rows, ncols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "QMatrix":
        return cls([[ZERO] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: Optional[int] = None) -> "QMatrix":
        cols = [list(c) for c in cols]
        if cols:
            nrows = len(cols[0])
            return cls([[cols[j][i] for j in range(len(cols))] for i in range(nrows)])
        return cls([[] for _ in range(nrows or 0)], 0) if nrows else cls([], 0)

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self._data[i]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def to_rows(self) -> List[List[Fraction]]:
        return [list(r) for r in self._data]

    def transpose(self) -> "QMatrix":
        return QMatrix([[self._data[i][j] for i in range(self.nrows)]
                        for j in range(self.ncols)], self.nrows)

    def __eq__(self, other) -> bool:
        return (isinstance(other, QMatrix) and self.ncols == other.ncols
                and self._data == other._data)

    def __hash__(self):
        return hash((self._data, self.ncols))

    def __repr__(self):
        return f"QMatrix({self.nrows}x{self.ncols})"

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise DomainError("shape mismatch in matrix product")
        bt = other.transpose()._data
        return QMatrix([[_dot(r, c) for c in bt] for r in self._data], other.ncols)

    def apply(self, vec: Sequence) -> Tuple[Fraction, ...]:
        """Matrix times column vector."""
        v = [_frac(x) for x in vec]
        if len(v) != self.ncols:
            raise DomainError("vector length mismatch")
        return tuple(_dot(r, v) for r in self._data)

    def is_zero(self) -> bool:
        return all(v == 0 for r in self._data for v in r)


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def _rref_rows(rows: List[List[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    pivots: List[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = ONE / rows[r][c]
        if inv != 1:
            rows[r] = [v * inv for v in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rref(m: QMatrix) -> Tuple[QMatrix, Tuple[int, ...], int]:
    """Reduced row echelon form of m.

    Returns (R, pivot_cols, rank).  R is the unique RREF, pivot_cols is
    strictly increasing, rank == len(pivot_cols).

    >>> r, p, k = rref(QMatrix.from_rows([[1, 2], [2, 4]]))
    >>> (p, k)
    ((0,), 1)
    """
    rows, pivots = _rref_rows(m.to_rows(), m.ncols)
    return QMatrix(rows, m.ncols), tuple(pivots), len(pivots)


def kernel_basis(m: QMatrix) -> List[Tuple[Fraction, ...]]:
    """Canonical basis of the right kernel {v : m v = 0}.

    One basis vector per free column, free columns in increasing order;
    the chosen free variable is set to 1 and every other free variable
    to 0, pivot variables solved from the rref.
    """
    rows, pivots = _rref_rows(m.to_rows(), m.ncols)
    pivot_set = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [ZERO] * m.ncols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        basis.append(tuple(v))
    return basis


def invert(m: QMatrix) -> QMatrix:
    """Inverse of a square matrix; raises SingularMatrix when rank < n."""
    if m.nrows != m.ncols:
        raise DomainError("only square matrices can be inverted")
    n = m.nrows
    aug = [list(m.row(i)) + [ONE if j == i else ZERO for j in range(n)]
           for i in range(n)]
    rows, pivots = _rref_rows(aug, 2 * n)
    if len([p for p in pivots if p < n]) < n:
        raise SingularMatrix(f"matrix of size {n} has rank {len([p for p in pivots if p < n])}")
    return QMatrix([r[n:] for r in rows], n)


def solve(m: QMatrix, b: Sequence) -> Optional[Tuple[Fraction, ...]]:
    """Particular solution of m x = b with free variables zero, or None.

    >>> solve(QMatrix.from_rows([[1, 2], [2, 4]]), [1, 2])
    (Fraction(1, 1), Fraction(0, 1))
    >>> solve(QMatrix.from_rows([[1, 2], [2, 4]]), [1, 3]) is None
    True
    """
    bv = [_frac(x) for x in b]
    if len(bv) != m.nrows:
        raise DomainError("right-hand side length mismatch")
    aug = [list(m.row(i)) + [bv[i]] for i in range(m.nrows)]
    rows, pivots = _rref_rows(aug, m.ncols + 1)
    if m.ncols in pivots:
        return None
    x = [ZERO] * m.ncols
    for i, p in enumerate(pivots):
        x[p] = rows[i][m.ncols]
    return tuple(x)
