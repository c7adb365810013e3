"""Exact dense linear algebra over the rationals and prime fields.

Everything upstream (Hom/Ext spaces, coset membership, endomorphism
algebras) reduces to rank / kernel / solve on small dense matrices, so
plain Gaussian elimination with exact field arithmetic is all we need.
Matrices with zero rows or columns are legal and common (maps in and out
of zero spaces at unsupported vertices).
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_PRIME = 2147483647  # prime below 2**31, used for Monte-Carlo sampling


class FieldMismatchError(ValueError):
    pass


class RationalField:
    """The field of arbitrary-precision rationals."""

    name = "Q"
    characteristic = 0

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into Q")

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def format(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The prime field F_p with residues stored in [0, p)."""

    def __init__(self, p: int):
        if p < 2:
            raise ValueError("modulus must be a prime >= 2")
        self.p = p
        self.name = f"F_{p}"
        self.characteristic = p

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError("denominator divisible by modulus")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def format(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def _check_same_field(*mats):
    field = mats[0].field
    for m in mats[1:]:
        if m.field != field:
            raise FieldMismatchError("field mismatch")
    return field


class Matrix:
    """Immutable dense matrix over QQ or a prime field, row-major entries."""

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, rows, cols, entries, field=QQ):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        entries = [field.coerce(x) for x in entries]
        if len(entries) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(entries))
        object.__setattr__(self, "field", field)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols, field=QQ):
        return cls(rows, cols, [0] * (rows * cols), field)

    @classmethod
    def identity(cls, n, field=QQ):
        ent = [0] * (n * n)
        for i in range(n):
            ent[i * n + i] = 1
        return cls(n, n, ent, field)

    @classmethod
    def from_rows(cls, row_lists, field=QQ, cols=None):
        rows = len(row_lists)
        if rows == 0:
            if cols is None:
                cols = 0
            return cls(0, cols, [], field)
        cols = len(row_lists[0])
        flat = []
        for r in row_lists:
            if len(r) != cols:
                raise ValueError("ragged rows")
            flat.extend(r)
        return cls(rows, cols, flat, field)

    @classmethod
    def unit(cls, rows, cols, r, c, field=QQ):
        """Elementary matrix E(r, c), zero-based indices."""
        ent = [0] * (rows * cols)
        ent[r * cols + c] = 1
        return cls(rows, cols, ent, field)

    @classmethod
    def column(cls, values, field=QQ):
        return cls(len(values), 1, list(values), field)

    # -- access --------------------------------------------------------

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r):
        return list(self.entries[r * self.cols : (r + 1) * self.cols])

    def col(self, c):
        return [self.entries[r * self.cols + c] for r in range(self.rows)]

    def row_lists(self):
        return [self.row(r) for r in range(self.rows)]

    def is_zero(self):
        z = self.field.zero()
        return all(e == z for e in self.entries)

    def is_square(self):
        return self.rows == self.cols

    # -- arithmetic ----------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.field == other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.field, self.entries))

    def __add__(self, other):
        _check_same_field(self, other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        add = self.field.add
        ent = [add(a, b) for a, b in zip(self.entries, other.entries)]
        return Matrix(self.rows, self.cols, ent, self.field)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        neg = self.field.neg
        return Matrix(self.rows, self.cols, [neg(e) for e in self.entries], self.field)

    def scale(self, c):
        c = self.field.coerce(c)
        mul = self.field.mul
        return Matrix(self.rows, self.cols, [mul(c, e) for e in self.entries], self.field)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        _check_same_field(self, other)
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch in product: {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        f = self.field
        n, m, k = self.rows, other.cols, self.cols
        a, b = self.entries, other.entries
        out = [f.zero()] * (n * m)
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            for t in range(k):
                av = arow[t]
                if av == 0:
                    continue
                brow = b[t * m : (t + 1) * m]
                base = i * m
                for j in range(m):
                    bv = brow[j]
                    if bv != 0:
                        out[base + j] = f.add(out[base + j], f.mul(av, bv))
        return Matrix(n, m, out, f)

    def transpose(self):
        ent = [self.entries[r * self.cols + c] for c in range(self.cols) for r in range(self.rows)]
        return Matrix(self.cols, self.rows, ent, self.field)

    def trace(self):
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        t = self.field.zero()
        for i in range(self.rows):
            t = self.field.add(t, self[i, i])
        return t

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in self.row(r)) for r in range(self.rows))
        return f"Matrix({self.rows}x{self.cols} over {self.field.name}: [{body}])"


def hstack(mats):
    mats = [m for m in mats]
    if not mats:
        raise ValueError("hstack of nothing")
    _check_same_field(*mats)
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("row count mismatch in hstack")
    out_rows = []
    for r in range(rows):
        row = []
        for m in mats:
            row.extend(m.row(r))
        out_rows.append(row)
    return Matrix.from_rows(out_rows, mats[0].field, cols=sum(m.cols for m in mats))


def vstack(mats):
    mats = [m for m in mats]
    if not mats:
        raise ValueError("vstack of nothing")
    _check_same_field(*mats)
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("column count mismatch in vstack")
    flat = []
    for m in mats:
        flat.extend(m.entries)
    return Matrix(sum(m.rows for m in mats), cols, flat, mats[0].field)


def block_diag(mats, field=QQ):
    mats = list(mats)
    if not mats:
        return Matrix.zeros(0, 0, field)
    field = _check_same_field(*mats)
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    ent = [field.zero()] * (rows * cols)
    r0 = c0 = 0
    for m in mats:
        for r in range(m.rows):
            for c in range(m.cols):
                ent[(r0 + r) * cols + (c0 + c)] = m[r, c]
        r0 += m.rows
        c0 += m.cols
    return Matrix(rows, cols, ent, field)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product with the A-index-major layout: (A x B)[ap+b, cq+d] = A[a,c]B[b,d]."""
    _check_same_field(a, b)
    f = a.field
    rows, cols = a.rows * b.rows, a.cols * b.cols
    ent = [f.zero()] * (rows * cols)
    for i in range(a.rows):
        for j in range(a.cols):
            v = a[i, j]
            if v == 0:
                continue
            for k in range(b.rows):
                for l in range(b.cols):
                    w = b[k, l]
                    if w != 0:
                        ent[(i * b.rows + k) * cols + (j * b.cols + l)] = f.mul(v, w)
    return Matrix(rows, cols, ent, f)


def _elimination(a: Matrix):
    """Row echelon form; returns (list of rows, pivot column indices)."""
    f = a.field
    rows = [a.row(r) for r in range(a.rows)]
    pivots = []
    pr = 0
    for pc in range(a.cols):
        pivot_row = None
        for r in range(pr, len(rows)):
            if rows[r][pc] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[pr], rows[pivot_row] = rows[pivot_row], rows[pr]
        inv = f.inv(rows[pr][pc])
        rows[pr] = [f.mul(inv, x) for x in rows[pr]]
        for r in range(len(rows)):
            if r != pr and rows[r][pc] != 0:
                factor = rows[r][pc]
                rows[r] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[r], rows[pr])]
        pivots.append(pc)
        pr += 1
        if pr == len(rows):
            break
    return rows, pivots


def rref(a: Matrix):
    rows, pivots = _elimination(a)
    return Matrix.from_rows(rows, a.field, cols=a.cols), pivots


def rank(a: Matrix) -> int:
    _, pivots = _elimination(a)
    return len(pivots)


def kernel_basis(a: Matrix):
    """Basis of the right null space, as a list of column vectors (n x 1 matrices)."""
    f = a.field
    reduced, pivots = _elimination(a)
    pivot_set = set(pivots)
    free = [c for c in range(a.cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [f.zero()] * a.cols
        v[fc] = f.one()
        for pr, pc in enumerate(pivots):
            # reduced row echelon: pivot rows read off the dependency directly
            v[pc] = f.neg(reduced[pr][fc])
        basis.append(Matrix.column(v, f))
    return basis


def solve(a: Matrix, b) -> list | None:
    """Some x with A x = b, or None when the system is inconsistent."""
    if isinstance(b, Matrix):
        if b.cols != 1:
            raise ValueError("right-hand side must be a column vector")
        b = b.col(0)
    if len(b) != a.rows:
        raise ValueError("dimension mismatch in solve")
    f = a.field
    aug = Matrix.from_rows(
        [a.row(r) + [f.coerce(b[r])] for r in range(a.rows)], f, cols=a.cols + 1
    )
    reduced, pivots = _elimination(aug)
    if a.cols in pivots:
        return None
    x = [f.zero()] * a.cols
    for pr, pc in enumerate(pivots):
        x[pc] = reduced[pr][a.cols]
    return x


def column_space_contains(basis_cols: Matrix, v) -> bool:
    return solve(basis_cols, v) is not None


class IncrementalRank:
    """Tracks the row space of added vectors; used for greedy independence tests."""

    def __init__(self, field, dim):
        self.field = field
        self.dim = dim
        self.rows = []  # reduced rows
        self.pivots = []  # pivot column of each row

    def rank(self):
        return len(self.rows)

    def reduce(self, vec):
        f = self.field
        v = [f.coerce(x) for x in vec]
        for row, p in zip(self.rows, self.pivots):
            if v[p] != 0:
                factor = v[p]
                v = [f.sub(x, f.mul(factor, y)) for x, y in zip(v, row)]
        return v

    def add(self, vec) -> bool:
        """Add the vector; returns True when it enlarged the span."""
        f = self.field
        v = self.reduce(vec)
        for p in range(self.dim):
            if v[p] != 0:
                inv = f.inv(v[p])
                v = [f.mul(inv, x) for x in v]
                # keep stored rows mutually reduced so reduce() is order-independent
                for i, row in enumerate(self.rows):
                    if row[p] != 0:
                        factor = row[p]
                        self.rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(row, v)]
                self.rows.append(v)
                self.pivots.append(p)
                return True
        return False

    def contains(self, vec) -> bool:
        return all(x == 0 for x in self.reduce(vec))
