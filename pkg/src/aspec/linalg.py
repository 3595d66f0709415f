"""Dense exact linear algebra over the scalar fields.

Everything downstream (Ext groups, hulls, section algebras) reduces to
rref/kernel/solve/quotient over Q or F_p.  Pivoting is deterministic
(first nonzero entry in column order) so all chosen bases are
reproducible run to run.
"""

from __future__ import annotations

from .errors import DimensionError, ValidationError


class Mat:
    """Immutable-by-convention dense matrix; rows of field scalars."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, data, cols=None):
        self.field = field
        norm = field.normalize
        self.data = [[norm(x) for x in row] for row in data]
        self.rows = len(self.data)
        if self.rows:
            self.cols = len(self.data[0])
            for row in self.data:
                if len(row) != self.cols:
                    raise DimensionError("ragged rows")
        else:
            self.cols = 0 if cols is None else cols

    @classmethod
    def zeros(cls, field, rows, cols):
        z = field.zero
        return cls(field, [[z] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def from_rows(cls, field, rows, cols=None):
        return cls(field, rows, cols=cols)

    def copy(self):
        return Mat(self.field, self.data, cols=self.cols)

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self):
        return f"Mat({self.field}, {self.rows}x{self.cols})"

    def row(self, i):
        return list(self.data[i])

    def col(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def is_zero(self):
        f = self.field
        return all(f.is_zero(x) for row in self.data for x in row)

    def add(self, other):
        self._check_shape(other, same=True)
        f = self.field
        return Mat(f, [[f.add(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.data, other.data)], cols=self.cols)

    def sub(self, other):
        self._check_shape(other, same=True)
        f = self.field
        return Mat(f, [[f.sub(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.data, other.data)], cols=self.cols)

    def scale(self, c):
        f = self.field
        return Mat(f, [[f.mul(c, x) for x in row] for row in self.data], cols=self.cols)

    def mul(self, other):
        self.field.same(other.field)
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        f = self.field
        out = Mat.zeros(f, self.rows, other.cols)
        for i in range(self.rows):
            row = self.data[i]
            orow = out.data[i]
            for k in range(self.cols):
                a = row[k]
                if f.is_zero(a):
                    continue
                brow = other.data[k]
                for j in range(other.cols):
                    orow[j] = f.add(orow[j], f.mul(a, brow[j]))
        return out

    def transpose(self):
        return Mat(self.field, [[self.data[i][j] for i in range(self.rows)]
                                for j in range(self.cols)], cols=self.rows)

    def apply_row(self, v):
        """Row vector times matrix: v (len rows) -> v.M (len cols)."""
        if len(v) != self.rows:
            raise DimensionError("row-vector length mismatch")
        f = self.field
        out = [f.zero] * self.cols
        for i, a in enumerate(v):
            if f.is_zero(a):
                continue
            row = self.data[i]
            for j in range(self.cols):
                out[j] = f.add(out[j], f.mul(a, row[j]))
        return out

    def apply_col(self, v):
        """Matrix times column vector: M.v (len cols) -> (len rows)."""
        if len(v) != self.cols:
            raise DimensionError("column-vector length mismatch")
        f = self.field
        out = []
        for row in self.data:
            s = f.zero
            for a, x in zip(row, v):
                if not f.is_zero(a):
                    s = f.add(s, f.mul(a, x))
            out.append(s)
        return out

    def _check_shape(self, other, same=False):
        self.field.same(other.field)
        if same and (self.rows != other.rows or self.cols != other.cols):
            raise DimensionError("shape mismatch")


def rref(m):
    """Reduced row-echelon form.

    Returns (R, pivot_columns, rank); the row space is preserved and the
    result is idempotent under rref.
    """
    f = m.field
    r = m.copy()
    pivots = []
    piv_row = 0
    for col in range(r.cols):
        sel = None
        for i in range(piv_row, r.rows):
            if not f.is_zero(r.data[i][col]):
                sel = i
                break
        if sel is None:
            continue
        if sel != piv_row:
            r.data[piv_row], r.data[sel] = r.data[sel], r.data[piv_row]
        inv = f.inv(r.data[piv_row][col])
        r.data[piv_row] = [f.mul(inv, x) for x in r.data[piv_row]]
        for i in range(r.rows):
            if i == piv_row:
                continue
            c = r.data[i][col]
            if f.is_zero(c):
                continue
            prow = r.data[piv_row]
            r.data[i] = [f.sub(x, f.mul(c, px)) for x, px in zip(r.data[i], prow)]
        pivots.append(col)
        piv_row += 1
        if piv_row == r.rows:
            break
    return r, pivots, len(pivots)


def rank(m):
    return rref(m)[2]


def kernel_basis(m):
    """Basis of the right null space {v : m.v = 0}; len = cols - rank."""
    f = m.field
    r, pivots, rk = rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for j in free:
        v = [f.zero] * m.cols
        v[j] = f.one
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(r.data[i][j])
        basis.append(v)
    return basis


def solve(m, b):
    """Some x with m.x = b, or None; free variables are set to 0."""
    if len(b) != m.rows:
        raise DimensionError("rhs length mismatch")
    f = m.field
    aug = Mat(f, [list(row) + [bv] for row, bv in zip(m.data, b)], cols=m.cols + 1)
    if m.rows == 0:
        return [f.zero] * m.cols
    r, pivots, rk = rref(aug)
    if m.cols in pivots:
        return None
    x = [f.zero] * m.cols
    for i, pc in enumerate(pivots):
        x[pc] = r.data[i][m.cols]
    return x


def row_space_basis(field, vectors, length=None):
    """Echelonized basis of the span of the given row vectors."""
    if not vectors:
        return []
    mat = Mat(field, vectors, cols=length)
    r, pivots, rk = rref(mat)
    return [r.data[i] for i in range(rk)]


def in_span(field, vectors, v):
    """Is v in the span of vectors (all same length)?"""
    n = len(v)
    base = row_space_basis(field, vectors, length=n)
    if not base:
        return all(field.is_zero(x) for x in v)
    together = row_space_basis(field, base + [list(v)], length=n)
    return len(together) == len(base)


class _Echelon:
    """Incremental echelon structure for building quotient bases."""

    def __init__(self, field, ncols):
        self.field = field
        self.ncols = ncols
        self.rows = []       # echelonized rows
        self.pivots = []     # pivot column per row

    def reduce(self, v):
        f = self.field
        v = list(v)
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if not f.is_zero(c):
                v = [f.sub(x, f.mul(c, rx)) for x, rx in zip(v, row)]
        return v

    def insert(self, v):
        """Reduce and insert; returns pivot column or None if v was in span."""
        f = self.field
        v = self.reduce(v)
        for j in range(self.ncols):
            if not f.is_zero(v[j]):
                inv = f.inv(v[j])
                v = [f.mul(inv, x) for x in v]
                # back-substitute into existing rows
                for idx, row in enumerate(self.rows):
                    c = row[j]
                    if not f.is_zero(c):
                        self.rows[idx] = [f.sub(x, f.mul(c, vx))
                                          for x, vx in zip(row, v)]
                pos = 0
                while pos < len(self.pivots) and self.pivots[pos] < j:
                    pos += 1
                self.rows.insert(pos, v)
                self.pivots.insert(pos, j)
                return j
        return None

    def contains(self, v):
        f = self.field
        return all(f.is_zero(x) for x in self.reduce(v))

    def dim(self):
        return len(self.rows)


def quotient_basis(field, space, sub, length=None):
    """Vectors of `space` mapping to a basis of span(space)/span(sub).

    Raises ValidationError when sub is not contained in span(space).
    Count equals dim span(space) - dim span(sub).
    """
    if length is None:
        if space:
            length = len(space[0])
        elif sub:
            length = len(sub[0])
        else:
            return []
    space_ech = _Echelon(field, length)
    for v in space:
        space_ech.insert(v)
    for v in sub:
        if not space_ech.contains(v):
            raise ValidationError("sub is not contained in span(space)")
    ech = _Echelon(field, length)
    for v in sub:
        ech.insert(v)
    reps = []
    for v in space:
        if ech.insert(v) is not None:
            reps.append(list(v))
    return reps


def intersect_spans(field, a_vectors, b_vectors, length):
    """Basis of span(a) ∩ span(b) via the kernel of the stacked system."""
    if not a_vectors or not b_vectors:
        return []
    f = field
    cols = [list(v) for v in a_vectors] + [[f.neg(x) for x in v] for v in b_vectors]
    m = Mat(f, [[cols[k][i] for k in range(len(cols))] for i in range(length)],
            cols=len(cols))
    out = []
    for ker in kernel_basis(m):
        coeffs = ker[:len(a_vectors)]
        v = [f.zero] * length
        for c, av in zip(coeffs, a_vectors):
            if not f.is_zero(c):
                v = [f.add(x, f.mul(c, y)) for x, y in zip(v, av)]
        if any(not f.is_zero(x) for x in v):
            out.append(v)
    return row_space_basis(field, out, length=length)


def vec_add(field, u, v):
    return [field.add(a, b) for a, b in zip(u, v)]

def vec_sub(field, u, v):
    return [field.sub(a, b) for a, b in zip(u, v)]

def vec_scale(field, c, v):
    return [field.mul(c, x) for x in v]

def vec_is_zero(field, v):
    return all(field.is_zero(x) for x in v)

def zero_vec(field, n):
    return [field.zero] * n

def unit_vec(field, n, i):
    v = [field.zero] * n
    v[i] = field.one
    return v
