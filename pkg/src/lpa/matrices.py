"""Exact integer matrices: arithmetic, Bareiss determinants, Smith normal form.

All entries are arbitrary-precision Python ints; no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple  # row-major

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise MatrixError("negative dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise MatrixError(
                "entry count %d does not match %dx%d"
                % (len(self.entries), self.rows, self.cols)
            )
        for x in self.entries:
            if not isinstance(x, int):
                raise MatrixError("non-integer entry %r" % (x,))

    @staticmethod
    def from_rows(rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise MatrixError("ragged rows")
        return IntMatrix(n, m, tuple(x for r in rows for x in r))

    @staticmethod
    def identity(n):
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zeros(rows, cols):
        return IntMatrix(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def to_rows(self):
        m = self.cols
        return [list(self.entries[i * m:(i + 1) * m]) for i in range(self.rows)]

    def transpose(self):
        return IntMatrix(
            self.cols, self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __add__(self, other):
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols,
                         tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols,
                         tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntMatrix(self.rows, self.cols, tuple(other * a for a in self.entries))
        if self.cols != other.rows:
            raise MatrixError("shape mismatch for product: %dx%d * %dx%d"
                              % (self.rows, self.cols, other.rows, other.cols))
        a, b = self.to_rows(), other.to_rows()
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                out.append(sum(a[i][k] * b[k][j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    __rmul__ = __mul__

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MatrixError("shape mismatch")

    def is_square(self):
        return self.rows == self.cols


def determinant(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not a.is_square():
        raise MatrixError("determinant of non-square %dx%d matrix" % (a.rows, a.cols))
    n = a.rows
    if n == 0:
        return 1
    m = a.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _xgcd(a, b):
    """(g, x, y) with g = gcd(a, b) > 0 and x*a + y*b = g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V = S with U, V unimodular and S diagonal, d1 | d2 | ..."""

    u: IntMatrix
    s: IntMatrix
    v: IntMatrix

    def diagonal(self):
        return [self.s[i, i] for i in range(min(self.s.rows, self.s.cols))]


def smith_normal_form(a: IntMatrix) -> SmithDecomposition:
    """Smith normal form over the integers.

    Diagonal entries are nonnegative and form a divisibility chain with all
    zeros trailing.
    """
    n, m = a.rows, a.cols
    s = a.to_rows()
    u = IntMatrix.identity(n).to_rows()
    v = IntMatrix.identity(m).to_rows()

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row[dst] += c * row[src]
        s[dst] = [x + c * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for row in s:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def combine_rows(t, i):
        # make s[i][t] zero; when the pivot does not divide it, a unimodular
        # 2x2 transform also drops the pivot to the gcd.  Plain elimination
        # in the divisible case keeps row t (and the cleared column) fixed.
        p, q = s[t][t], s[i][t]
        if q % p == 0:
            add_row(i, t, -(q // p))
            return
        g, x, y = _xgcd(p, q)
        pr, qr = p // g, q // g
        rt = [x * a1 + y * b1 for a1, b1 in zip(s[t], s[i])]
        ri = [-qr * a1 + pr * b1 for a1, b1 in zip(s[t], s[i])]
        s[t], s[i] = rt, ri
        rt = [x * a1 + y * b1 for a1, b1 in zip(u[t], u[i])]
        ri = [-qr * a1 + pr * b1 for a1, b1 in zip(u[t], u[i])]
        u[t], u[i] = rt, ri

    def combine_cols(t, j):
        p, q = s[t][t], s[t][j]
        if q % p == 0:
            add_col(j, t, -(q // p))
            return
        g, x, y = _xgcd(p, q)
        pr, qr = p // g, q // g
        for row in s:
            row[t], row[j] = x * row[t] + y * row[j], -qr * row[t] + pr * row[j]
        for row in v:
            row[t], row[j] = x * row[t] + y * row[j], -qr * row[t] + pr * row[j]

    def negate_row(i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(n, m):
        # pick the smallest nonzero entry of the trailing block as pivot
        pivot = None
        for i in range(t, n):
            for j in range(t, m):
                if s[i][j] != 0 and (pivot is None or abs(s[i][j]) < abs(s[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])

        while True:
            for i in range(t + 1, n):
                if s[i][t] != 0:
                    combine_rows(t, i)
            for j in range(t + 1, m):
                if s[t][j] != 0:
                    combine_cols(t, j)
            if any(s[i][t] for i in range(t + 1, n)):
                continue  # column clearing was undone by a column transform
            # force divisibility of the trailing block by the pivot
            offender = None
            for i in range(t + 1, n):
                for j in range(t + 1, m):
                    if s[i][j] % s[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)

        if s[t][t] < 0:
            negate_row(t)
        t += 1

    return SmithDecomposition(
        IntMatrix.from_rows(u), IntMatrix.from_rows(s), IntMatrix.from_rows(v)
    )


def unimodular_inverse(a: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix; exact, raises if not unimodular."""
    if not a.is_square():
        raise MatrixError("inverse of non-square matrix")
    n = a.rows
    work = [[Fraction(x) for x in row] for row in a.to_rows()]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if work[i][k] != 0), None)
        if piv is None:
            raise MatrixError("singular matrix")
        work[k], work[piv] = work[piv], work[k]
        inv[k], inv[piv] = inv[piv], inv[k]
        c = work[k][k]
        work[k] = [x / c for x in work[k]]
        inv[k] = [x / c for x in inv[k]]
        for i in range(n):
            if i != k and work[i][k] != 0:
                f = work[i][k]
                work[i] = [x - f * y for x, y in zip(work[i], work[k])]
                inv[i] = [x - f * y for x, y in zip(inv[i], inv[k])]
    out = []
    for row in inv:
        for x in row:
            if x.denominator != 1:
                raise MatrixError("matrix is not unimodular")
            out.append(int(x))
    return IntMatrix(n, n, tuple(out))
