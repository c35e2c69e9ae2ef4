"""Exact integer and rational linear algebra.

Everything here works on Python ints (arbitrary precision) and
``fractions.Fraction``; no floating point is ever involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    rows: tuple
    ncols: int

    def __init__(self, rows: Iterable[Iterable[int]], ncols: Optional[int] = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise MatrixError("ragged rows")
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "ncols", ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self.rows), self.nrows) if self.nrows else IntMatrix([], 0)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise MatrixError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        return IntMatrix(
            ([sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows),
            other.ncols,
        )

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.ncols:
            raise MatrixError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.rows)

    def mod2(self) -> "F2Matrix":
        return F2Matrix(((x % 2 for x in r) for r in self.rows), self.ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(([int(i == j) for j in range(n)] for i in range(n)), n)

    @classmethod
    def zeros(cls, n: int, m: int) -> "IntMatrix":
        return cls(([0] * m for _ in range(n)), m)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        if not cols:
            return cls(([] for _ in range(nrows)), 0)
        return cls(zip(*cols), len(cols))


@dataclass(frozen=True)
class F2Matrix:
    rows: tuple
    ncols: int

    def __init__(self, rows: Iterable[Iterable[int]], ncols: Optional[int] = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols or any(x not in (0, 1) for x in r):
                raise MatrixError("F2 matrix entries must be 0 or 1")
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "ncols", ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class SnfResult:
    """``left @ m @ right`` is the rectangular diagonal matrix built from ``diag``."""

    diag: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix

    def torsion(self) -> list[int]:
        return [d for d in self.diag if d > 1]

    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)


def as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m)


def diagonal_embedding(diag: Sequence[int], nrows: int, ncols: int) -> IntMatrix:
    out = [[0] * ncols for _ in range(nrows)]
    for i, d in enumerate(diag):
        out[i][i] = d
    return IntMatrix(out, ncols)


def smith_normal_form(m) -> SnfResult:
    """Smith normal form with unimodular transforms.

    The pivot at each stage is the entry of smallest nonzero absolute value
    in the remaining block, which keeps entries small on sparse inputs.
    """
    m = as_matrix(m)
    n, k = m.shape
    a = m.tolist()
    left = IntMatrix.identity(n).tolist()
    right = IntMatrix.identity(k).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):
        # row[dst] += c * row[src]
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + c * y for x, y in zip(left[dst], left[src])]

    def add_col(src, dst, c):
        for r in a:
            r[dst] += c * r[src]
        for r in right:
            r[dst] += c * r[src]

    diag = []
    for t in range(min(n, k)):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, k):
                    v = a[i][j]
                    if v and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, n):
                q = a[i][t] // p
                if q:
                    add_row(t, i, -q)
                if a[i][t]:
                    clean = False
            for j in range(t + 1, k):
                q = a[t][j] // p
                if q:
                    add_col(t, j, -q)
                if a[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, k) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        diag.append(a[t][t])
        if a[t][t] == 0:
            # remaining block is zero
            diag.extend(0 for _ in range(t + 1, min(n, k)))
            break
    return SnfResult(tuple(diag), IntMatrix(left, n), IntMatrix(right, k))


def determinant(m) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    m = as_matrix(m)
    if not m.is_square():
        raise MatrixError(f"determinant of non-square {m.shape} matrix")
    n = m.nrows
    if n == 0:
        return 1
    a = m.tolist()
    sign = 1
    prev = 1
    for t in range(n - 1):
        if a[t][t] == 0:
            swap = next((i for i in range(t + 1, n) if a[i][t]), None)
            if swap is None:
                return 0
            a[t], a[swap] = a[swap], a[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
        prev = a[t][t]
    return sign * a[n - 1][n - 1]


def is_unimodular(m) -> bool:
    return determinant(m) in (1, -1)


def leading_minors(g) -> list[int]:
    g = as_matrix(g)
    return [determinant([r[:k] for r in g.rows[:k]]) for k in range(1, g.nrows + 1)]


def is_symmetric(g) -> bool:
    g = as_matrix(g)
    return g.is_square() and all(
        g.rows[i][j] == g.rows[j][i] for i in range(g.nrows) for j in range(i)
    )


def is_negative_definite(g) -> bool:
    """Sylvester's criterion: the k-th leading minor has sign (-1)^k."""
    g = as_matrix(g)
    if not is_symmetric(g):
        raise MatrixError("negative definiteness needs a symmetric matrix")
    return all((-1) ** k * d > 0 for k, d in enumerate(leading_minors(g), start=1))


def _f2_rows_as_ints(m: F2Matrix) -> list[int]:
    return [sum(bit << j for j, bit in enumerate(r)) for r in m.rows]


def f2_rank(m) -> int:
    if isinstance(m, IntMatrix):
        m = m.mod2()
    elif not isinstance(m, F2Matrix):
        m = F2Matrix(m)
    rows = _f2_rows_as_ints(m)
    rank = 0
    for bit in range(m.ncols):
        mask = 1 << bit
        pivot = next((i for i in range(rank, len(rows)) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & mask:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def f2_is_isomorphism(m) -> bool:
    if isinstance(m, IntMatrix):
        m = m.mod2()
    elif not isinstance(m, F2Matrix):
        m = F2Matrix(m)
    return m.nrows == m.ncols and f2_rank(m) == m.nrows


def f2_solve(m: F2Matrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Some x with m x = b over F2, or None."""
    n, k = m.nrows, m.ncols
    aug = [list(r) + [b[i] % 2] for i, r in enumerate(m.rows)]
    pivots = []
    row = 0
    for col in range(k):
        p = next((i for i in range(row, n) if aug[i][col]), None)
        if p is None:
            continue
        aug[row], aug[p] = aug[p], aug[row]
        for i in range(n):
            if i != row and aug[i][col]:
                aug[i] = [x ^ y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    if any(aug[i][k] for i in range(row, n)):
        return None
    x = [0] * k
    for i, col in enumerate(pivots):
        x[col] = aug[i][k]
    return tuple(x)


def solve_integer_linear(a, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """An integer solution of ``a x = b`` or None when none exists."""
    a = as_matrix(a)
    if len(b) != a.nrows:
        raise MatrixError("right-hand side length mismatch")
    snf = smith_normal_form(a)
    c = snf.left.apply(b)
    y = [0] * a.ncols
    for i, ci in enumerate(c):
        d = snf.diag[i] if i < len(snf.diag) else 0
        if d == 0:
            if ci != 0:
                return None
        elif ci % d:
            return None
        else:
            y[i] = ci // d
    return snf.right.apply(y)


def integer_kernel(a) -> list[tuple[int, ...]]:
    """A Z-basis of the integer kernel of ``a``."""
    a = as_matrix(a)
    snf = smith_normal_form(a)
    r = snf.rank()
    return [snf.right.column(j) for j in range(r, a.ncols)]


def rational_inverse(m) -> list[list[Fraction]]:
    m = as_matrix(m)
    if not m.is_square():
        raise MatrixError("inverse of non-square matrix")
    n = m.nrows
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(m.rows)]
    for col in range(n):
        p = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if p is None:
            raise MatrixError("singular matrix")
        aug[col], aug[p] = aug[p], aug[col]
        piv = aug[col][col]
        aug[col] = [x / piv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [r[n:] for r in aug]
