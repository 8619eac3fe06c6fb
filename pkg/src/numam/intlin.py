"""Exact linear algebra over the integers.

Column Hermite normal form, Smith normal form with unimodular
transforms, integer kernels, canonical sublattices of Z^r, and
invariant factors of lattice quotients.  Entries are arbitrary
precision Python ints, so nothing here ever rounds or overflows.
All values are immutable and every operation is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class SubgroupNotContained(ValueError):
    """An alleged subgroup has a generator outside the ambient lattice."""


class ElementNotInAmbient(ValueError):
    """A vector expected to lie in a lattice does not."""


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = a*x + b*y = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable integer matrix, row-major; 0 x n and n x 0 shapes are legal."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntegerMatrix:
        rows = [tuple(int(x) for x in r) for r in rows]
        if rows:
            cols = len(rows[0])
            if any(len(r) != cols for r in rows):
                raise ValueError("ragged rows")
        elif cols is None:
            cols = 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> IntegerMatrix:
        columns = [tuple(int(x) for x in c) for c in columns]
        if columns:
            rows = len(columns[0])
            if any(len(c) != rows for c in columns):
                raise ValueError("ragged columns")
        elif rows is None:
            rows = 0
        entries = tuple(tuple(c[i] for c in columns) for i in range(rows))
        return cls(rows, len(columns), entries)

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> IntegerMatrix:
        entries = tuple(tuple(row[j] for row in self.entries) for j in range(self.cols))
        return IntegerMatrix(self.cols, self.rows, entries)

    def mul(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        ocols = other.columns()
        entries = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in ocols)
            for row in self.entries
        )
        return IntegerMatrix(self.rows, other.cols, entries)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.entries)

    def __add__(self, other: IntegerMatrix) -> IntegerMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sum")
        return IntegerMatrix(
            self.rows,
            self.cols,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: IntegerMatrix) -> IntegerMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix difference")
        return IntegerMatrix(
            self.rows,
            self.cols,
            tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
        )


def determinant(a: IntegerMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = [list(row) for row in a.entries]
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


def _column_echelon(cols: list[list[int]], nrows: int, u: list[list[int]] | None):
    """Reduce columns in place to canonical column Hermite form.

    Pivot rows strictly increase left to right, pivots are positive, and
    in every pivot row the entries of the earlier columns are reduced
    into [0, pivot).  When ``u`` is given the same column operations are
    applied to it, so ``original_matrix @ U`` has the reduced columns.
    Returns the number of nonzero (pivot) columns; the remaining columns
    are zero.
    """
    n = len(cols)
    c = 0
    for i in range(nrows):
        if c == n:
            break
        for j in range(c + 1, n):
            if cols[j][i] == 0:
                continue
            a, b = cols[c][i], cols[j][i]
            g, x, y = _xgcd(a, b)
            p, q = -(b // g), a // g
            cc, cj = cols[c], cols[j]
            cols[c] = [x * s + y * t for s, t in zip(cc, cj)]
            cols[j] = [p * s + q * t for s, t in zip(cc, cj)]
            if u is not None:
                uc, uj = u[c], u[j]
                u[c] = [x * s + y * t for s, t in zip(uc, uj)]
                u[j] = [p * s + q * t for s, t in zip(uc, uj)]
        piv = cols[c][i]
        if piv == 0:
            continue
        if piv < 0:
            cols[c] = [-s for s in cols[c]]
            if u is not None:
                u[c] = [-s for s in u[c]]
            piv = -piv
        for j in range(c):
            q = cols[j][i] // piv
            if q:
                cols[j] = [s - q * t for s, t in zip(cols[j], cols[c])]
                if u is not None:
                    u[j] = [s - q * t for s, t in zip(u[j], u[c])]
        c += 1
    return c


def hermite_form(a: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix]:
    """Canonical column Hermite form.

    Returns (H, U) with U unimodular, ``a @ U = [H | 0]``: the nonzero
    columns of the reduced matrix form H (zero columns are dropped) and
    H is the canonical basis of the column span of ``a``.
    """
    cols = [list(a.column(j)) for j in range(a.cols)]
    u = [list(r) for r in IntegerMatrix.identity(a.cols).entries]
    # u is tracked column-wise: u[j] is the j-th column of U.
    rank = _column_echelon(cols, a.rows, u)
    h = IntegerMatrix.from_columns(cols[:rank], a.rows)
    umat = IntegerMatrix.from_columns(u, a.cols)
    return h, umat


def unimodular_inverse(a: IntegerMatrix) -> IntegerMatrix:
    """Inverse of a unimodular matrix (canonical HNF of which is the identity)."""
    if a.rows != a.cols:
        raise ValueError("not square")
    h, u = hermite_form(a)
    if h != IntegerMatrix.identity(a.rows):
        raise ValueError("matrix is not unimodular")
    return u


@dataclass(frozen=True)
class Sublattice:
    """A subgroup of Z^ambient_rank held by its canonical Hermite basis.

    Construct through :func:`span` or :func:`kernel_basis`; two values
    are equal as groups if and only if they are equal as dataclasses.
    """

    ambient_rank: int
    basis: IntegerMatrix

    @property
    def rank(self) -> int:
        return self.basis.cols

    def basis_columns(self) -> list[tuple[int, ...]]:
        return self.basis.columns()

    def _solve(self, v: Sequence[int]) -> list[int] | None:
        """Coefficients of v in the basis, or None if v is outside."""
        if len(v) != self.ambient_rank:
            raise ValueError("vector length does not match ambient rank")
        res = list(v)
        coeffs = []
        for j in range(self.basis.cols):
            p = 0
            while self.basis.entries[p][j] == 0:
                p += 1
            piv = self.basis.entries[p][j]
            if res[p] % piv:
                return None
            q = res[p] // piv
            coeffs.append(q)
            if q:
                for i in range(p, self.ambient_rank):
                    res[i] -= q * self.basis.entries[i][j]
        if any(res):
            return None
        return coeffs

    def contains(self, v: Sequence[int]) -> bool:
        return self._solve(v) is not None


def span(vectors: Iterable[Sequence[int]], ambient_rank: int) -> Sublattice:
    """Canonical sublattice generated by the given vectors of Z^ambient_rank."""
    cols = []
    for v in vectors:
        if len(v) != ambient_rank:
            raise ValueError("generator length does not match ambient rank")
        cols.append([int(x) for x in v])
    rank = _column_echelon(cols, ambient_rank, None)
    return Sublattice(ambient_rank, IntegerMatrix.from_columns(cols[:rank], ambient_rank))


def full_sublattice(rank: int) -> Sublattice:
    return Sublattice(rank, IntegerMatrix.identity(rank))


def kernel_basis(a: IntegerMatrix) -> Sublattice:
    """The saturated sublattice {x in Z^cols : a x = 0}."""
    cols = [list(a.column(j)) for j in range(a.cols)]
    u = [list(r) for r in IntegerMatrix.identity(a.cols).entries]
    rank = _column_echelon(cols, a.rows, u)
    return span(u[rank:], a.cols)


def smith_form(a: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Smith normal form with transforms.

    Returns (S, U, V) with U, V unimodular, ``U @ a @ V = S``, S diagonal
    with non-negative entries s_1 | s_2 | ...
    """
    nrows, ncols = a.rows, a.cols
    s = [list(row) for row in a.entries]
    u = [list(row) for row in IntegerMatrix.identity(nrows).entries]
    v = [list(row) for row in IntegerMatrix.identity(ncols).entries]

    def swap_rows(i1, i2):
        s[i1], s[i2] = s[i2], s[i1]
        u[i1], u[i2] = u[i2], u[i1]

    def swap_cols(j1, j2):
        for row in s:
            row[j1], row[j2] = row[j2], row[j1]
        for row in v:
            row[j1], row[j2] = row[j2], row[j1]

    def row_sub(i, t, q):
        s[i] = [e1 - q * e2 for e1, e2 in zip(s[i], s[t])]
        u[i] = [e1 - q * e2 for e1, e2 in zip(u[i], u[t])]

    def col_sub(j, t, q):
        for row in s:
            row[j] -= q * row[t]
        for row in v:
            row[j] -= q * row[t]

    for t in range(min(nrows, ncols)):
        # Pick the entry of least absolute value in the trailing block.
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                e = s[i][j]
                if e and (best is None or abs(e) < best):
                    pivot, best = (i, j), abs(e)
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])
        while True:
            # Reduce the pivot column and row by remainders; any nonzero
            # remainder is smaller than the pivot and gets swapped in, so
            # the pivot strictly shrinks and the loop terminates.
            for i in range(t + 1, nrows):
                if s[i][t]:
                    row_sub(i, t, s[i][t] // s[t][t])
            for j in range(t + 1, ncols):
                if s[t][j]:
                    col_sub(j, t, s[t][j] // s[t][t])
            leftover = None
            for i in range(t + 1, nrows):
                if s[i][t]:
                    leftover = (i, t)
                    break
            if leftover is None:
                for j in range(t + 1, ncols):
                    if s[t][j]:
                        leftover = (t, j)
                        break
            if leftover is not None:
                if leftover[0] != t:
                    swap_rows(t, leftover[0])
                else:
                    swap_cols(t, leftover[1])
                continue
            d = s[t][t]
            culprit = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if s[i][j] % d:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            # Pull the offending row up; the next reduction shrinks the pivot.
            s[t] = [e1 + e2 for e1, e2 in zip(s[t], s[culprit])]
            u[t] = [e1 + e2 for e1, e2 in zip(u[t], u[culprit])]
        if s[t][t] < 0:
            s[t] = [-e for e in s[t]]
            u[t] = [-e for e in u[t]]

    smat = IntegerMatrix.from_rows(s, ncols)
    umat = IntegerMatrix.from_rows(u, nrows)
    vmat = IntegerMatrix.from_rows(v, ncols)
    return smat, umat, vmat


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finitely generated abelian group in invariant factor form.

    ``invariant_factors`` is the chain d_1 | d_2 | ... with every d_i >= 2;
    factors equal to 1 are never stored.  The trivial group is
    ``FiniteAbelianGroup((), 0)``.
    """

    invariant_factors: tuple[int, ...]
    free_rank: int

    def __post_init__(self):
        for i, d in enumerate(self.invariant_factors):
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
            if i and d % self.invariant_factors[i - 1]:
                raise ValueError("invariant factors must form a divisibility chain")
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    def order(self) -> int | None:
        """Group order, or None when the group is infinite."""
        if self.free_rank:
            return None
        return math.prod(self.invariant_factors)


def _coordinates_in(ambient: Sublattice, sub: Sublattice) -> IntegerMatrix:
    if ambient.ambient_rank != sub.ambient_rank:
        raise ValueError("ambient ranks differ")
    coords = []
    for col in sub.basis_columns():
        x = ambient._solve(col)
        if x is None:
            raise SubgroupNotContained(f"generator {col} is not in the ambient lattice")
        coords.append(x)
    return IntegerMatrix.from_columns(coords, ambient.rank)


def quotient(ambient: Sublattice, sub: Sublattice) -> FiniteAbelianGroup:
    """Structure of ambient/sub; requires sub to be a subgroup of ambient."""
    c = _coordinates_in(ambient, sub)
    s, _, _ = smith_form(c)
    diag = [s.entries[i][i] for i in range(min(s.rows, s.cols))]
    factors = tuple(d for d in diag if d >= 2)
    free = ambient.rank - sum(1 for d in diag if d)
    return FiniteAbelianGroup(factors, free)


def element_order_in_quotient(ambient: Sublattice, sub: Sublattice, v: Sequence[int]) -> int | None:
    """Least k >= 1 with k*v in sub, or None when no such k exists."""
    x = ambient._solve(v)
    if x is None:
        raise ElementNotInAmbient(f"{tuple(v)} is not in the ambient lattice")
    c = _coordinates_in(ambient, sub)
    s, u, _ = smith_form(c)
    y = u.apply(x)
    order = 1
    for i in range(ambient.rank):
        d = s.entries[i][i] if i < min(s.rows, s.cols) else 0
        if d == 0:
            if y[i]:
                return None
        elif y[i] % d:
            order = math.lcm(order, d // math.gcd(d, y[i]))
        # y[i] divisible by d contributes order 1
    return order
