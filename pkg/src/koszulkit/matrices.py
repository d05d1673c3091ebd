"""Dense matrices over a coefficient domain and exact linear algebra.

The central algorithm diagonalizes a matrix by unimodular row and column
transforms and returns the full witness (U, D, V) with U*A*V == D, a
divisibility chain on the diagonal, and canonical-associate divisors.
Solving, kernel and image bases, and exactness checks are all derived
from that certificate.  Matrices with zero rows or columns are
first-class throughout; empty complexes and vanishing truncations
depend on them.

Pivoting always picks the entry of smallest Euclidean measure (absolute
value over Z, degree over F_p[x]), which keeps entry growth tame at the
scales this library targets.  Determinants use Bareiss fraction-free
elimination so the unimodularity check never divides inexactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import DimensionError, DomainMismatchError, NotAComplexError
from .rings import Ring


class Matrix:
    """Immutable row-major matrix over a fixed ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: Ring, rows: Sequence[Sequence]):
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        data = []
        for row in rows:
            if len(row) != ncols:
                raise DimensionError("ragged rows")
            data.append(tuple(ring.validate(x) for x in row))
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", nrows)
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", tuple(data))

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, ring: Ring, rows: int, cols: int, entries) -> "Matrix":
        m = object.__new__(cls)
        object.__setattr__(m, "ring", ring)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "cols", cols)
        object.__setattr__(m, "entries", tuple(tuple(r) for r in entries))
        return m

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "Matrix":
        z = ring.zero
        return cls._raw(ring, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return cls._raw(ring, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, ring: Ring, diag: Sequence, rows: int | None = None, cols: int | None = None) -> "Matrix":
        n = len(diag)
        rows = n if rows is None else rows
        cols = n if cols is None else cols
        z = ring.zero
        data = [[z] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            data[i][i] = ring.validate(d)
        return cls._raw(ring, rows, cols, data)

    @classmethod
    def column(cls, ring: Ring, values: Sequence) -> "Matrix":
        return cls(ring, [[v] for v in values])

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring.token, self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.ring.token}, {self.rows}x{self.cols}, {list(map(list, self.entries))})"

    def is_zero(self) -> bool:
        is_zero = self.ring.is_zero
        return all(is_zero(x) for row in self.entries for x in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.ring, self.cols, self.rows, zip(*self.entries)) if self.rows and self.cols else Matrix.zeros(self.ring, self.cols, self.rows)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise DomainMismatchError("matrix product across different rings")
        if self.cols != other.rows:
            raise DimensionError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        ring = self.ring
        if self.cols == 0:
            return Matrix.zeros(ring, self.rows, other.cols)
        add, mul, zero = ring.add, ring.mul, ring.zero
        bt = list(zip(*other.entries))
        out = []
        for arow in self.entries:
            orow = []
            for bcol in bt:
                acc = zero
                for x, y in zip(arow, bcol):
                    acc = add(acc, mul(x, y))
                orow.append(acc)
            out.append(orow)
        return Matrix._raw(ring, self.rows, other.cols, out)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        add = self.ring.add
        return Matrix._raw(self.ring, self.rows, self.cols,
                           [[add(x, y) for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        sub = self.ring.sub
        return Matrix._raw(self.ring, self.rows, self.cols,
                           [[sub(x, y) for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        neg = self.ring.neg
        return Matrix._raw(self.ring, self.rows, self.cols, [[neg(x) for x in r] for r in self.entries])

    def scale(self, c) -> "Matrix":
        mul = self.ring.mul
        c = self.ring.validate(c)
        return Matrix._raw(self.ring, self.rows, self.cols, [[mul(c, x) for x in r] for r in self.entries])

    def _same_shape(self, other: "Matrix"):
        if self.ring != other.ring:
            raise DomainMismatchError("mixed-ring matrix arithmetic")
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionError("shape mismatch")

    def take_cols(self, indices: Iterable[int]) -> "Matrix":
        idx = list(indices)
        return Matrix._raw(self.ring, self.rows, len(idx), [[row[j] for j in idx] for row in self.entries])

    def take_rows(self, indices: Iterable[int]) -> "Matrix":
        idx = list(indices)
        return Matrix._raw(self.ring, len(idx), self.cols, [self.entries[i] for i in idx])


def hstack(mats: Sequence[Matrix]) -> Matrix:
    mats = list(mats)
    ring = mats[0].ring
    rows = mats[0].rows
    if any(m.rows != rows or m.ring != ring for m in mats):
        raise DimensionError("hstack shape mismatch")
    data = [sum((list(m.entries[i]) for m in mats), []) for i in range(rows)]
    return Matrix._raw(ring, rows, sum(m.cols for m in mats), data)


def vstack(mats: Sequence[Matrix]) -> Matrix:
    mats = list(mats)
    ring = mats[0].ring
    cols = mats[0].cols
    if any(m.cols != cols or m.ring != ring for m in mats):
        raise DimensionError("vstack shape mismatch")
    data = [row for m in mats for row in m.entries]
    return Matrix._raw(ring, sum(m.rows for m in mats), cols, data)


def block(ring: Ring, grid: Sequence[Sequence[Optional[Matrix]]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> Matrix:
    """Assemble a block matrix; ``None`` cells are zero blocks."""
    rows = []
    for bi, brow in enumerate(grid):
        cells = []
        for bj, cell in enumerate(brow):
            if cell is None:
                cell = Matrix.zeros(ring, row_sizes[bi], col_sizes[bj])
            elif cell.rows != row_sizes[bi] or cell.cols != col_sizes[bj]:
                raise DimensionError("block shape mismatch")
            cells.append(cell)
        rows.append(hstack(cells) if cells else Matrix.zeros(ring, row_sizes[bi], 0))
    return vstack(rows) if rows else Matrix.zeros(ring, 0, sum(col_sizes))


def block_diag(ring: Ring, mats: Sequence[Matrix]) -> Matrix:
    row_sizes = [m.rows for m in mats]
    col_sizes = [m.cols for m in mats]
    grid = [[m if i == j else None for j in range(len(mats))] for i, m in enumerate(mats)]
    if not mats:
        return Matrix.zeros(ring, 0, 0)
    return block(ring, grid, row_sizes, col_sizes)


@dataclass(frozen=True)
class SnfCertificate:
    """Diagonalization witness: U*A*V == D with unimodular U, V.

    ``divisors`` lists the nonzero diagonal of D as canonical associates
    forming a divisibility chain d1 | d2 | ... | dr.
    """

    U: Matrix
    D: Matrix
    V: Matrix
    divisors: tuple

    @property
    def rank(self) -> int:
        return len(self.divisors)

    def verify(self, source: Matrix) -> bool:
        ring = source.ring
        if self.U * source * self.V != self.D:
            return False
        if not (is_unimodular(self.U) and is_unimodular(self.V)):
            return False
        for i, row in enumerate(self.D.entries):
            for j, x in enumerate(row):
                if i != j and not ring.is_zero(x):
                    return False
        diag = [self.D.entries[i][i] for i in range(min(self.D.rows, self.D.cols))]
        if tuple(diag[: len(self.divisors)]) != self.divisors:
            return False
        if any(not ring.is_zero(d) for d in diag[len(self.divisors):]):
            return False
        for d in self.divisors:
            if ring.is_zero(d) or ring.normalize(d)[1] != d:
                return False
        for a, b in zip(self.divisors, self.divisors[1:]):
            if not ring.divides(a, b):
                return False
        return True


def snf(mat: Matrix) -> SnfCertificate:
    """Smith normal form with transform certificate.

    Pivot choice: smallest nonzero measure in the remaining submatrix.
    After diagonalization the divisor chain is repaired with 2x2
    unimodular blocks and every divisor is scaled to its canonical
    associate.
    """
    ring = mat.ring
    m, n = mat.rows, mat.cols
    a = [list(row) for row in mat.entries]
    u = [list(row) for row in Matrix.identity(ring, m).entries]
    v = [list(row) for row in Matrix.identity(ring, n).entries]
    is_zero, measure = ring.is_zero, ring.measure
    add, sub, mul = ring.add, ring.sub, ring.mul

    def row_submul(target: list, i: int, j: int, q):
        # rows[i] -= q * rows[j]
        ri, rj = target[i], target[j]
        target[i] = [sub(x, mul(q, y)) for x, y in zip(ri, rj)]

    def col_submul(target: list, i: int, j: int, q):
        # cols[i] -= q * cols[j]
        for row in target:
            row[i] = sub(row[i], mul(q, row[j]))

    def col_swap(target: list, i: int, j: int):
        for row in target:
            row[i], row[j] = row[j], row[i]

    t = 0
    limit = min(m, n)
    while t < limit:
        best = None
        for i in range(t, m):
            ai = a[i]
            for j in range(t, n):
                x = ai[j]
                if not is_zero(x):
                    w = measure(x)
                    if best is None or w < best[0]:
                        best = (w, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            a[t], a[bi] = a[bi], a[t]
            u[t], u[bi] = u[bi], u[t]
        if bj != t:
            col_swap(a, t, bj)
            col_swap(v, t, bj)
        while True:
            dirty = False
            for i in range(t + 1, m):
                x = a[i][t]
                if is_zero(x):
                    continue
                q, r = ring.divmod(x, a[t][t])
                if not is_zero(q):
                    row_submul(a, i, t, q)
                    row_submul(u, i, t, q)
                if not is_zero(r):
                    a[t], a[i] = a[i], a[t]
                    u[t], u[i] = u[i], u[t]
                    dirty = True
            if dirty:
                continue
            dirty = False
            for j in range(t + 1, n):
                x = a[t][j]
                if is_zero(x):
                    continue
                q, r = ring.divmod(x, a[t][t])
                if not is_zero(q):
                    col_submul(a, j, t, q)
                    col_submul(v, j, t, q)
                if not is_zero(r):
                    col_swap(a, t, j)
                    col_swap(v, t, j)
                    dirty = True
            if dirty:
                continue
            if any(not is_zero(a[i][t]) for i in range(t + 1, m)):
                continue
            break
        t += 1
    r = t

    # Repair the divisibility chain with 2x2 unimodular transforms.
    while True:
        fixed = True
        for i in range(r - 1):
            di, dj = a[i][i], a[i + 1][i + 1]
            if ring.div_exact(dj, di) is not None:
                continue
            fixed = False
            # rows[i] += rows[i+1]; the only nonzero entry added is at column i+1
            a[i][i + 1] = add(a[i][i + 1], dj)
            u[i] = [add(x, y) for x, y in zip(u[i], u[i + 1])]
            g, s, tt = ring.ext_gcd(di, dj)
            aq = ring.div_exact(di, g)
            bq = ring.div_exact(dj, g)
            nbq = ring.neg(bq)
            for target in (a, v):
                for row in target:
                    x, y = row[i], row[i + 1]
                    row[i] = add(mul(s, x), mul(tt, y))
                    row[i + 1] = add(mul(nbq, x), mul(aq, y))
            q = ring.div_exact(a[i + 1][i], a[i][i])
            row_submul(a, i + 1, i, q)
            row_submul(u, i + 1, i, q)
        if fixed:
            break

    for i in range(r):
        unit, canon = ring.normalize(a[i][i])
        if unit != ring.one:
            inv = ring.unit_inverse(unit)
            a[i] = [mul(inv, x) for x in a[i]]
            u[i] = [mul(inv, x) for x in u[i]]

    divisors = tuple(a[i][i] for i in range(r))
    return SnfCertificate(
        U=Matrix._raw(ring, m, m, u),
        D=Matrix._raw(ring, m, n, a),
        V=Matrix._raw(ring, n, n, v),
        divisors=divisors,
    )


def rank(mat: Matrix) -> int:
    return snf(mat).rank


def det(mat: Matrix):
    """Determinant by Bareiss fraction-free elimination (exact division only)."""
    if not mat.is_square():
        raise DimensionError("determinant of a non-square matrix")
    ring = mat.ring
    n = mat.rows
    if n == 0:
        return ring.one
    a = [list(row) for row in mat.entries]
    is_zero = ring.is_zero
    sign = False
    prev = ring.one
    for k in range(n - 1):
        if is_zero(a[k][k]):
            swap = next((i for i in range(k + 1, n) if not is_zero(a[i][k])), None)
            if swap is None:
                return ring.zero
            a[k], a[swap] = a[swap], a[k]
            sign = not sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = ring.sub(ring.mul(a[i][j], a[k][k]), ring.mul(a[i][k], a[k][j]))
                a[i][j] = ring.div_exact(num, prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return ring.neg(d) if sign else d


def is_unimodular(mat: Matrix) -> bool:
    return mat.is_square() and mat.ring.is_unit(det(mat))


def _row_hermite(ring: Ring, rows: list) -> list:
    """Row-echelon reduction by unimodular row operations.

    Pivots become canonical associates, entries above a pivot are
    reduced modulo it, so the output rows span the same lattice with
    controlled entry sizes.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    is_zero = ring.is_zero
    r = 0
    for c in range(n):
        if r >= m:
            break
        piv = next((i for i in range(r, m) if not is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, m):
            if is_zero(rows[i][c]):
                continue
            g, s, t = ring.ext_gcd(rows[r][c], rows[i][c])
            a_div = ring.div_exact(rows[r][c], g)
            b_div = ring.div_exact(rows[i][c], g)
            top = [ring.add(ring.mul(s, x), ring.mul(t, y)) for x, y in zip(rows[r], rows[i])]
            bottom = [ring.sub(ring.mul(a_div, y), ring.mul(b_div, x)) for x, y in zip(rows[r], rows[i])]
            rows[r], rows[i] = top, bottom
        unit, _ = ring.normalize(rows[r][c])
        if unit != ring.one:
            inv = ring.unit_inverse(unit)
            rows[r] = [ring.mul(inv, x) for x in rows[r]]
        for i in range(r):
            q, _ = ring.divmod(rows[i][c], rows[r][c])
            if not is_zero(q):
                rows[i] = [ring.sub(x, ring.mul(q, y)) for x, y in zip(rows[i], rows[r])]
        r += 1
    return rows


def reduce_column_basis(mat: Matrix) -> Matrix:
    """Column-equivalent matrix with Hermite-reduced entries.

    Used on every emitted kernel/image basis: cascaded constructions
    would otherwise compound transform entries exponentially.
    """
    if mat.cols == 0 or mat.rows == 0:
        return mat
    ring = mat.ring
    reduced = _row_hermite(ring, [list(row) for row in zip(*mat.entries)])
    return Matrix._raw(ring, mat.rows, mat.cols, zip(*reduced))


def _reduce_mod_columns(ring: Ring, sol: list, basis: Matrix) -> list:
    """Shrink solution columns modulo a reduced kernel basis."""
    pivots = []
    cols = list(zip(*basis.entries)) if basis.rows else []
    for col in cols:
        row = next((i for i, x in enumerate(col) if not ring.is_zero(x)), None)
        if row is not None:
            pivots.append((row, col))
    for j in range(len(sol[0]) if sol else 0):
        for row, col in pivots:
            q, _ = ring.divmod(sol[row][j], col[row])
            if not ring.is_zero(q):
                for i in range(len(sol)):
                    sol[i][j] = ring.sub(sol[i][j], ring.mul(q, col[i]))
    return sol


def _column_echelon(mat: Matrix):
    """Column echelon form by unimodular column operations.

    Returns (columns, transform columns, pivot rows): the first
    len(pivots) columns form an echelon basis of the column lattice,
    the remaining transform columns span the kernel.  Entry growth is
    kept down by always pivoting on the smallest measure and reducing
    earlier columns against each new pivot, which is what makes the
    stacked linear systems elsewhere in the library tractable.
    """
    ring = mat.ring
    m, n = mat.rows, mat.cols
    is_zero, measure = ring.is_zero, ring.measure
    sub, mul = ring.sub, ring.mul
    cols = [[row[j] for row in mat.entries] for j in range(n)]
    q = [[ring.one if i == j else ring.zero for i in range(n)] for j in range(n)]
    pivots = []
    r = 0
    for i in range(m):
        if r == n:
            break
        placed = False
        while True:
            best = None
            for j in range(r, n):
                x = cols[j][i]
                if not is_zero(x):
                    w = measure(x)
                    if best is None or w < best[0]:
                        best = (w, j)
            if best is None:
                break
            placed = True
            j = best[1]
            if j != r:
                cols[r], cols[j] = cols[j], cols[r]
                q[r], q[j] = q[j], q[r]
            piv = cols[r][i]
            clean = True
            for j in range(r + 1, n):
                x = cols[j][i]
                if is_zero(x):
                    continue
                quo, rem = ring.divmod(x, piv)
                if not is_zero(quo):
                    cj, cr = cols[j], cols[r]
                    cols[j] = [sub(a, mul(quo, b)) for a, b in zip(cj, cr)]
                    qj, qr = q[j], q[r]
                    q[j] = [sub(a, mul(quo, b)) for a, b in zip(qj, qr)]
                if not is_zero(rem):
                    clean = False
            if clean:
                break
        if placed:
            unit, _ = ring.normalize(cols[r][i])
            if unit != ring.one:
                inv = ring.unit_inverse(unit)
                cols[r] = [mul(inv, x) for x in cols[r]]
                q[r] = [mul(inv, x) for x in q[r]]
            piv = cols[r][i]
            for j in range(r):
                quo, _ = ring.divmod(cols[j][i], piv)
                if not is_zero(quo):
                    cj, cr = cols[j], cols[r]
                    cols[j] = [sub(a, mul(quo, b)) for a, b in zip(cj, cr)]
                    qj, qr = q[j], q[r]
                    q[j] = [sub(a, mul(quo, b)) for a, b in zip(qj, qr)]
            pivots.append(i)
            r += 1
    return cols, q, pivots


def solve(mat: Matrix, rhs: Matrix) -> Optional[Matrix]:
    """Solve mat * X == rhs exactly; None iff no solution exists.

    Decided by unimodular column elimination: forward substitution
    along the echelon pivots either divides exactly at every step and
    ends on a zero residual, or there is no solution over the ring.
    The returned solution is reduced modulo the kernel lattice, so
    repeated calls on equal inputs return identical, small output.
    """
    if mat.ring != rhs.ring:
        raise DomainMismatchError("mixed-ring solve")
    if mat.rows != rhs.rows:
        raise DimensionError("right-hand side has wrong height")
    ring = mat.ring
    is_zero = ring.is_zero
    cols, transform, pivots = _column_echelon(mat)
    r = len(pivots)
    residual = [list(row) for row in rhs.entries]
    width = rhs.cols
    y = [[ring.zero] * width for _ in range(mat.cols)]
    for k, pivot_row in enumerate(pivots):
        col = cols[k]
        piv = col[pivot_row]
        for j in range(width):
            quo = ring.div_exact(residual[pivot_row][j], piv)
            if quo is None:
                return None
            if not is_zero(quo):
                y[k][j] = quo
                for i in range(pivot_row, mat.rows):
                    residual[i][j] = ring.sub(residual[i][j], ring.mul(quo, col[i]))
    for row in residual:
        if any(not is_zero(x) for x in row):
            return None
    solution = [[ring.zero] * width for _ in range(mat.cols)]
    for k in range(r):
        trans = transform[k]
        yk = y[k]
        for j in range(width):
            c = yk[j]
            if is_zero(c):
                continue
            for i in range(mat.cols):
                solution[i][j] = ring.add(solution[i][j], ring.mul(c, trans[i]))
    if r == mat.cols or width == 0:
        return Matrix._raw(ring, mat.cols, width, solution)
    kernel = Matrix._raw(ring, mat.cols, mat.cols - r, zip(*transform[r:]))
    reduced = _reduce_mod_columns(ring, solution, kernel)
    return Matrix._raw(ring, mat.cols, width, reduced)


def inverse(mat: Matrix) -> Matrix:
    """Exact inverse of a unimodular matrix: V * D^{-1} * U."""
    if not mat.is_square():
        raise DimensionError("inverse of a non-square matrix")
    ring = mat.ring
    cert = snf(mat)
    if cert.rank != mat.rows or any(not ring.is_unit(d) for d in cert.divisors):
        raise DimensionError("matrix is not unimodular")
    dinv = Matrix.diagonal(ring, [ring.unit_inverse(d) for d in cert.divisors])
    return cert.V * dinv * cert.U


def kernel_basis(mat: Matrix) -> Matrix:
    """Basis of {x : mat*x == 0}; free and saturated over a PID."""
    _, transform, pivots = _column_echelon(mat)
    r = len(pivots)
    kernel = Matrix._raw(mat.ring, mat.cols, mat.cols - r, zip(*transform[r:])) \
        if r < mat.cols else Matrix.zeros(mat.ring, mat.cols, 0)
    return reduce_column_basis(kernel)


def image_basis(mat: Matrix) -> Matrix:
    """Basis of the column-span lattice.

    An injective matrix is returned unchanged, so constructions that
    corestrict an injective map keep their coordinates on the nose.
    """
    cols, _, pivots = _column_echelon(mat)
    r = len(pivots)
    if r == mat.cols:
        return mat
    return Matrix._raw(mat.ring, mat.rows, r, zip(*cols[:r]))


def is_exact_at(first: Matrix, second: Matrix) -> bool:
    """Whether image(first) == kernel(second) as submodules.

    Requires second*first == 0 (raises otherwise); exactness then
    reduces to each kernel-basis column of ``second`` lying in the
    column span of ``first``.
    """
    if second.cols != first.rows:
        raise DimensionError("maps do not compose")
    if not (second * first).is_zero():
        raise NotAComplexError("composite of the two maps is nonzero")
    ker = kernel_basis(second)
    return solve(first, ker) is not None


def in_span(span: Matrix, vectors: Matrix) -> bool:
    """Whether every column of ``vectors`` lies in the column span."""
    return solve(span, vectors) is not None
