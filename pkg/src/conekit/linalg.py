"""Exact arbitrary-precision integer/rational linear algebra.

Vectors are tuples of Python ints, matrices are tuples of such rows.
Everything here is exact; no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DimensionError, SingularMatrixError

IntVec = tuple[int, ...]
IntMat = tuple[IntVec, ...]


def as_vec(entries) -> IntVec:
    return tuple(int(x) for x in entries)


def as_mat(rows) -> IntMat:
    m = tuple(as_vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionError("rows have unequal lengths")
    return m


def identity(n: int) -> IntMat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v, strict=True))


def mat_vec(m, v) -> IntVec:
    return tuple(dot(row, v) for row in m)


def vec_mat(v, m) -> IntVec:
    # row vector times matrix
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


def matmul(a, b) -> IntMat:
    return tuple(vec_mat(row, b) for row in a)


def transpose(m) -> IntMat:
    return tuple(zip(*m)) if m else ()


def content(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v) -> IntVec:
    """Divide a nonzero integer vector by the gcd of its entries."""
    g = content(v)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def determinant(m: IntMat) -> int:
    """Signed determinant by fraction-free (Bareiss) elimination.

    Intermediate entries stay minors of the input, which bounds growth;
    all divisions are exact.
    """
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionError("determinant requires a square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pk - aik * rk[j]) // prev
            ri[k] = 0
        prev = pk
    return sign * a[n - 1][n - 1]


class Echelon:
    """Incremental exact row echelon; tracks a maximal independent subset."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def try_add(self, v) -> bool:
        """Return True (and absorb v) iff v is independent of the rows so far."""
        w = [int(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            if w[p]:
                wp, rp = w[p], row[p]
                w = [wi * rp - ri * wp for wi, ri in zip(w, row)]
        for p in range(self.ncols):
            if w[p]:
                g = content(w)
                if g > 1:
                    w = [x // g for x in w]
                self.rows.append(w)
                self.pivots.append(p)
                return True
        return False


def rank(rows, ncols: int | None = None) -> int:
    rows = as_mat(rows)
    if not rows:
        return 0
    ech = Echelon(ncols or len(rows[0]))
    for r in rows:
        ech.try_add(r)
    return ech.rank


def independent_rows(rows, ncols: int) -> list[int]:
    """Indices of the greedy (first-come) maximal independent subset."""
    ech = Echelon(ncols)
    out = []
    for i, r in enumerate(rows):
        if ech.try_add(r):
            out.append(i)
    return out


def _fraction_solve(a, rhs_cols):
    """Gaussian elimination over Q; returns solution columns or None if singular."""
    n = len(a)
    w = [[Fraction(x) for x in row] + [Fraction(c[i]) for c in rhs_cols]
         for i, row in enumerate(a)]
    for k in range(n):
        piv = next((i for i in range(k, n) if w[i][k]), None)
        if piv is None:
            return None
        w[k], w[piv] = w[piv], w[k]
        pk = w[k][k]
        w[k] = [x / pk for x in w[k]]
        for i in range(n):
            if i != k and w[i][k]:
                f = w[i][k]
                w[i] = [x - f * y for x, y in zip(w[i], w[k])]
    return [[w[i][n + j] for i in range(n)] for j in range(len(rhs_cols))]


def solve_rational(a: IntMat, b) -> tuple[Fraction, ...]:
    """Exact solution x of a·x = b for square nonsingular integer a."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("solve_rational requires a square matrix")
    if len(b) != n:
        raise DimensionError("right-hand side has wrong length")
    sol = _fraction_solve(a, [list(b)])
    if sol is None:
        raise SingularMatrixError("matrix is singular")
    return tuple(sol[0])


def invert_rational(a: IntMat):
    n = len(a)
    cols = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    sol = _fraction_solve(a, cols)
    if sol is None:
        raise SingularMatrixError("matrix is singular")
    # sol[j] is column j of the inverse
    return [[sol[j][i] for j in range(n)] for i in range(n)]


def adjugate(m: IntMat) -> tuple[IntMat, int]:
    """Return (adj, det) with m·adj = adj·m = det·I, all entries integer."""
    d = determinant(m)
    if d == 0:
        raise SingularMatrixError("adjugate of singular matrix")
    inv = invert_rational(m)
    adj = []
    for row in inv:
        out = []
        for x in row:
            y = x * d
            if y.denominator != 1:
                raise SingularMatrixError("adjugate failed exactness check")
            out.append(int(y))
        adj.append(tuple(out))
    return tuple(adj), d


def unimodular_inverse(m: IntMat) -> IntMat:
    adj, d = adjugate(m)
    if abs(d) != 1:
        raise SingularMatrixError("matrix is not unimodular")
    if d == 1:
        return adj
    return tuple(tuple(-x for x in row) for row in adj)


@dataclass(frozen=True)
class SnfResult:
    """Smith normal form u·m·v = diag(d) with u, v unimodular."""

    d: IntVec
    u: IntMat
    v: IntMat


def smith_normal_form(m: IntMat) -> SnfResult:
    """Smith normal form with nonnegative diagonal and divisibility chain.

    Pivoting picks the smallest nonzero absolute value in the remaining
    block, which keeps coefficient growth down and makes output
    deterministic.
    """
    m = as_mat(m)
    nr = len(m)
    nc = len(m[0]) if nr else 0
    a = [list(r) for r in m]
    u = [list(r) for r in identity(nr)]
    v = [list(r) for r in identity(nc)]

    def row_sub(i, k, q):  # row_i -= q * row_k
        a[i] = [x - q * y for x, y in zip(a[i], a[k])]
        u[i] = [x - q * y for x, y in zip(u[i], u[k])]

    def col_sub(j, k, q):  # col_j -= q * col_k
        for row in a:
            row[j] -= q * row[k]
        for row in v:
            row[j] -= q * row[k]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    t = 0
    limit = min(nr, nc)
    while t < limit:
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        row_sub(i, t, q)
                    if a[i][t]:  # remainder became the smaller pivot
                        swap_rows(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        col_sub(j, t, q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
                        break
            if dirty:
                continue
            break
        # enforce the divisibility chain: pivot must divide the whole block
        p = a[t][t]
        fix = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                    if a[i][j] % p), None)
        if fix is not None:
            row_sub(t, fix[0], -1)  # add offending row, then re-clean
            continue
        t += 1

    d = tuple(a[i][i] for i in range(limit))
    return SnfResult(d=d, u=as_mat(u), v=as_mat(v))


def integer_kernel(rows, dim: int) -> IntMat:
    """Basis of the saturated lattice {x in Z^dim : row·x = 0 for all rows}."""
    rows = as_mat(rows)
    if not rows:
        return identity(dim)
    if len(rows[0]) != dim:
        raise DimensionError("constraint rows have wrong arity")
    snf = smith_normal_form(rows)
    rk = sum(1 for x in snf.d if x)
    vt = transpose(snf.v)
    return vt[rk:]


def saturation_basis(rows, dim: int) -> IntMat:
    """Basis of span_Q(rows) ∩ Z^dim (a primitive sublattice)."""
    rows = as_mat(rows)
    if not rows:
        return ()
    if len(rows[0]) != dim:
        raise DimensionError("rows have wrong arity")
    snf = smith_normal_form(rows)
    rk = sum(1 for x in snf.d if x)
    vinv = unimodular_inverse(snf.v)
    return vinv[:rk]
