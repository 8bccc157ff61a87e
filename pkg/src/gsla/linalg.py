"""Dense exact linear algebra over a gsla field: matrices, RREF, kernels, subspaces.

Subspaces are stored as canonical reduced row echelon bases, so equality of
subspaces is entrywise equality of their basis matrices.
"""

from __future__ import annotations

from .errors import AmbientMismatch, DimensionMismatch
from .fields import Field, same_field


class Matrix:
    """Row-major dense matrix with scalars from one field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise DimensionMismatch("ragged matrix rows")

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero()
        return cls(field, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero(), field.one()
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_cols(cls, field, cols):
        return cls(field, [list(r) for r in zip(*cols)]) if cols else cls(field, [])

    def copy(self):
        return Matrix(self.field, self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, tuple(tuple(r) for r in self.rows)))

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.field.describe()})"

    def transpose(self):
        return Matrix(self.field, [list(r) for r in zip(*self.rows)]) if self.rows else Matrix(self.field, [])

    def mul(self, other: "Matrix"):
        same_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.ncols} cols vs {other.nrows} rows")
        F = self.field
        z = F.zero()
        ot = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in ot:
                acc = z
                for a, b in zip(r, c):
                    if a != z and b != z:
                        acc = F.add(acc, F.mul(a, b))
                row.append(acc)
            out.append(row)
        return Matrix(F, out)

    def mul_vec(self, vec):
        F = self.field
        z = F.zero()
        out = []
        for r in self.rows:
            acc = z
            for a, b in zip(r, vec):
                if a != z and b != z:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return out

    def add(self, other):
        same_field(self.field, other.field)
        F = self.field
        return Matrix(F, [[F.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def sub(self, other):
        same_field(self.field, other.field)
        F = self.field
        return Matrix(F, [[F.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c):
        F = self.field
        return Matrix(F, [[F.mul(c, a) for a in r] for r in self.rows])

    def stack(self, other):
        same_field(self.field, other.field)
        if other.nrows and self.nrows and self.ncols != other.ncols:
            raise DimensionMismatch("stack with differing column counts")
        return Matrix(self.field, self.rows + other.rows)

    def is_zero(self):
        z = self.field.zero()
        return all(a == z for r in self.rows for a in r)

    def rref(self):
        """Canonical reduced row echelon form: (matrix, rank, pivot columns)."""
        F = self.field
        z = F.zero()
        rows = [list(r) for r in self.rows]
        pivots = []
        pr = 0
        for pc in range(self.ncols):
            sel = None
            for i in range(pr, len(rows)):
                if rows[i][pc] != z:
                    sel = i
                    break
            if sel is None:
                continue
            rows[pr], rows[sel] = rows[sel], rows[pr]
            inv = F.inv(rows[pr][pc])
            rows[pr] = [F.mul(inv, a) for a in rows[pr]]
            for i in range(len(rows)):
                if i != pr and rows[i][pc] != z:
                    c = rows[i][pc]
                    rows[i] = [F.sub(a, F.mul(c, b)) for a, b in zip(rows[i], rows[pr])]
            pivots.append(pc)
            pr += 1
            if pr == len(rows):
                break
        return Matrix(F, rows), pr, tuple(pivots)

    def rank(self):
        return self.rref()[1]

    def is_invertible(self):
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self):
        if self.nrows != self.ncols:
            raise DimensionMismatch("inverse of non-square matrix")
        F = self.field
        n = self.nrows
        aug = Matrix(F, [r + irow for r, irow in zip(self.rows, Matrix.identity(F, n).rows)])
        red, rank, _ = aug.rref()
        if rank < n:
            raise DimensionMismatch("matrix is singular")
        return Matrix(F, [r[n:] for r in red.rows])

    def kernel(self):
        """Basis of the right null space, rows in canonical RREF."""
        F = self.field
        z, o = F.zero(), F.one()
        red, rank, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for fc in free:
            v = [z] * self.ncols
            v[fc] = o
            for r, pc in enumerate(pivots):
                v[pc] = F.neg(red.rows[r][fc])
            basis.append(v)
        if not basis:
            return Matrix(F, [])
        return Matrix(F, basis).rref()[0]

    def trace(self):
        F = self.field
        return F.sum(self.rows[i][i] for i in range(min(self.nrows, self.ncols)))


def sparse_kernel(field, rows, ncols):
    """Kernel basis (canonical RREF) of a system given as sparse rows {col: coeff}.

    Intended for structured systems (graded commutation equations) whose rows
    stay short; falls back to nothing clever, just sparse Gaussian elimination
    with a backward reduction pass.
    """
    z = field.zero()
    pivots = {}
    for raw in rows:
        row = {c: v for c, v in raw.items() if v != z}
        while row:
            c = min(row)
            if c in pivots:
                f = row.pop(c)
                for cc, vv in pivots[c].items():
                    if cc == c:
                        continue
                    nv = field.sub(row.get(cc, z), field.mul(f, vv))
                    if nv == z:
                        row.pop(cc, None)
                    else:
                        row[cc] = nv
            else:
                inv = field.inv(row[c])
                pivots[c] = {cc: field.mul(inv, vv) for cc, vv in row.items()}
                break
    # backward pass: reduce pivot rows against later pivots
    for pc in sorted(pivots, reverse=True):
        prow = pivots[pc]
        for qc in sorted(pivots):
            if qc <= pc:
                continue
            f = prow.get(qc)
            if f is None:
                continue
            for cc, vv in pivots[qc].items():
                if cc == qc:
                    prow.pop(qc, None)
                    continue
                nv = field.sub(prow.get(cc, z), field.mul(f, vv))
                if nv == z:
                    prow.pop(cc, None)
                else:
                    prow[cc] = nv
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    o = field.one()
    for fc in free:
        v = [z] * ncols
        v[fc] = o
        for pc, prow in pivots.items():
            coef = prow.get(fc)
            if coef is not None:
                v[pc] = field.neg(coef)
        basis.append(v)
    if not basis:
        return Matrix(field, [])
    return Matrix(field, basis).rref()[0]


def solve_linear(A: Matrix, rhs):
    """One solution x of A x = rhs, or None if inconsistent."""
    F = A.field
    z = F.zero()
    aug = Matrix(F, [row + [b] for row, b in zip(A.rows, rhs)])
    red, rank, pivots = aug.rref()
    if A.ncols in pivots:
        return None
    x = [z] * A.ncols
    for r, pc in enumerate(pivots):
        x[pc] = red.rows[r][A.ncols]
    return x


class Subspace:
    """Subspace of the coordinate space, held as a canonical RREF basis."""

    __slots__ = ("field", "ambient", "mat", "pivots")

    def __init__(self, field, ambient, mat: Matrix, pivots):
        self.field = field
        self.ambient = ambient
        self.mat = mat
        self.pivots = pivots

    @classmethod
    def from_vectors(cls, field, ambient, vectors):
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise AmbientMismatch(f"vector length {len(v)} vs ambient {ambient}")
        if not vectors:
            return cls.zero(field, ambient)
        red, rank, pivots = Matrix(field, vectors).rref()
        return cls(field, ambient, Matrix(field, red.rows[:rank]), pivots)

    @classmethod
    def zero(cls, field, ambient):
        return cls(field, ambient, Matrix(field, []), ())

    @classmethod
    def full(cls, field, ambient):
        return cls(field, ambient, Matrix.identity(field, ambient), tuple(range(ambient)))

    @property
    def dim(self):
        return self.mat.nrows

    def basis(self):
        return [list(r) for r in self.mat.rows]

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.mat == other.mat
        )

    def __hash__(self):
        return hash((self.ambient, self.mat))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient})"

    def is_zero(self):
        return self.dim == 0

    def is_full(self):
        return self.dim == self.ambient

    def contains_vector(self, vec):
        return self.coords_of(vec) is not None

    def coords_of(self, vec):
        """Coefficients of vec in the RREF basis, or None if outside."""
        F = self.field
        z = F.zero()
        residual = list(vec)
        coords = []
        for row, pc in zip(self.mat.rows, self.pivots):
            c = residual[pc]
            coords.append(c)
            if c != z:
                for j in range(self.ambient):
                    residual[j] = F.sub(residual[j], F.mul(c, row[j]))
        if any(a != z for a in residual):
            return None
        return coords

    def contains_subspace(self, other):
        return all(self.contains_vector(v) for v in other.basis())

    def add(self, other: "Subspace"):
        if self.ambient != other.ambient:
            raise AmbientMismatch("sum of subspaces of different ambients")
        return Subspace.from_vectors(self.field, self.ambient, self.basis() + other.basis())

    def intersect(self, other: "Subspace"):
        """Zassenhaus-style: kernel of the stacked bases gives the intersection."""
        if self.ambient != other.ambient:
            raise AmbientMismatch("intersection of subspaces of different ambients")
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.field, self.ambient)
        stacked = self.mat.stack(other.mat).transpose()  # columns are basis vectors
        ker = stacked.kernel()
        vecs = []
        for row in ker.rows:
            coeffs = row[: self.dim]
            vecs.append(_combine(self.field, coeffs, self.mat.rows, self.ambient))
        return Subspace.from_vectors(self.field, self.ambient, vecs)

    def coordinate_slice(self, coords):
        """Intersection with the span of the given coordinate axes."""
        keep = set(coords)
        out = [c for c in range(self.ambient) if c not in keep]
        if not out:
            return self
        cols = Matrix(self.field, [[r[c] for c in out] for r in self.mat.rows])
        if cols.nrows == 0:
            return Subspace.zero(self.field, self.ambient)
        ker = cols.transpose().kernel()
        vecs = [_combine(self.field, row, self.mat.rows, self.ambient) for row in ker.rows]
        return Subspace.from_vectors(self.field, self.ambient, vecs)


def _combine(field, coeffs, rows, ambient):
    z = field.zero()
    out = [z] * ambient
    for c, row in zip(coeffs, rows):
        if c != z:
            for j in range(ambient):
                if row[j] != z:
                    out[j] = field.add(out[j], field.mul(c, row[j]))
    return out
