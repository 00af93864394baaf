"""Dense exact linear algebra over a FieldSpec.

Matrices are immutable (tuples of row tuples), so they hash and compare
literally.  All derived bases come out of reduced row echelon form with a
first-pivot convention, which makes every basis in the package reproducible
across runs.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Optional

from .fields import FieldSpec


@dataclass(frozen=True)
class Matrix:
    field: FieldSpec
    rows: int
    cols: int
    data: tuple  # tuple of row tuples

    # -- constructors ---------------------------------------------------------

    @classmethod
    def build(cls, field: FieldSpec, rows_data: Iterable[Iterable]) -> "Matrix":
        """Build from nested iterables, coercing entries into the field."""
        data = tuple(tuple(field.coerce(v) for v in row) for row in rows_data)
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged rows")
        return cls(field, nrows, ncols, data)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field: FieldSpec, cols: Iterable[Iterable]) -> "Matrix":
        cols = [tuple(field.coerce(v) for v in c) for c in cols]
        if not cols:
            return cls.zeros(field, 0, 0)
        n = len(cols[0])
        return cls(field, n, len(cols), tuple(tuple(c[i] for c in cols) for i in range(n)))

    @classmethod
    def diagonal(cls, field: FieldSpec, entries: Iterable) -> "Matrix":
        entries = [field.coerce(v) for v in entries]
        z = field.zero
        n = len(entries)
        return cls(field, n, n, tuple(tuple(entries[i] if i == j else z for j in range(n)) for i in range(n)))

    # -- basic queries ----------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.data)

    def is_zero(self) -> bool:
        return all(not v for row in self.data for v in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._compat(other, same_shape=True)
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      tuple(tuple(f.add(a, b) for a, b in zip(ra, rb))
                            for ra, rb in zip(self.data, other.data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._compat(other, same_shape=True)
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      tuple(tuple(f.sub(a, b) for a, b in zip(ra, rb))
                            for ra, rb in zip(self.data, other.data)))

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      tuple(tuple(f.neg(a) for a in row) for row in self.data))

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.coerce(c)
        return Matrix(f, self.rows, self.cols,
                      tuple(tuple(f.mul(c, a) for a in row) for row in self.data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._compat(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        p = self.field.characteristic
        bd = other.data
        ncols = other.cols
        out = []
        if p:
            for arow in self.data:
                acc = [0] * ncols
                for k, a in enumerate(arow):
                    if a:
                        brow = bd[k]
                        for j, b in enumerate(brow):
                            if b:
                                acc[j] += a * b
                out.append(tuple(v % p for v in acc))
        else:
            zero = self.field.zero
            for arow in self.data:
                acc = [zero] * ncols
                for k, a in enumerate(arow):
                    if a:
                        brow = bd[k]
                        for j, b in enumerate(brow):
                            if b:
                                acc[j] = acc[j] + a * b
                out.append(tuple(acc))
        return Matrix(self.field, self.rows, ncols, tuple(out))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def hstack(self, other: "Matrix") -> "Matrix":
        self._compat(other)
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        return Matrix(self.field, self.rows, self.cols + other.cols,
                      tuple(ra + rb for ra, rb in zip(self.data, other.data)))

    def vstack(self, other: "Matrix") -> "Matrix":
        self._compat(other)
        if self.cols != other.cols:
            raise ValueError("column count mismatch in vstack")
        return Matrix(self.field, self.rows + other.rows, self.cols, self.data + other.data)

    def submatrix(self, row_range, col_range) -> "Matrix":
        rr = list(row_range)
        cc = list(col_range)
        return Matrix(self.field, len(rr), len(cc),
                      tuple(tuple(self.data[i][j] for j in cc) for i in rr))

    def is_idempotent(self) -> bool:
        return self.is_square() and (self @ self) == self

    def _compat(self, other: "Matrix", same_shape: bool = False):
        if self.field != other.field:
            raise ValueError("field mismatch")
        if same_shape and (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    # -- echelon machinery ---------------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and pivot columns (first-pivot convention)."""
        return _rref(self)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Matrix":
        """Columns spanning the null space, one per free column of the RREF."""
        f = self.field
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [j for j in range(self.cols) if j not in pivot_set]
        cols = []
        for fc in free:
            v = [f.zero] * self.cols
            v[fc] = f.one
            for r, pc in enumerate(pivots):
                v[pc] = f.neg(red.data[r][fc])
            cols.append(v)
        return Matrix.from_columns(f, cols) if cols else Matrix.zeros(f, self.cols, 0)

    def image_basis(self) -> "Matrix":
        """Canonical (column-echelon) basis of the column space."""
        red, pivots = self.transpose().rref()
        rows = [red.data[i] for i in range(len(pivots))]
        if not rows:
            return Matrix.zeros(self.field, self.rows, 0)
        return Matrix(self.field, len(rows), self.rows, tuple(rows)).transpose()

    def solve(self, b: "Matrix") -> Optional["Matrix"]:
        """An exact x with self @ x == b, or None when b leaves the column space.

        Free variables are set to zero, so the solution is deterministic.
        """
        self._compat(b)
        if self.rows != b.rows:
            raise ValueError("row count mismatch in solve")
        f = self.field
        red, pivots = self.hstack(b).rref()
        if any(p >= self.cols for p in pivots):
            return None
        cols = []
        for bj in range(b.cols):
            v = [f.zero] * self.cols
            for r, pc in enumerate(pivots):
                v[pc] = red.data[r][self.cols + bj]
            cols.append(v)
        return Matrix.from_columns(f, cols) if cols else Matrix.zeros(f, self.cols, 0)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        x = self.solve(Matrix.identity(self.field, self.rows))
        if x is None or self.rank() != self.rows:
            raise ValueError("matrix is singular")
        return x

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> list:
        r = self.field.render
        return [[r(v) for v in row] for row in self.data]

    @classmethod
    def from_json(cls, field: FieldSpec, doc: list, rows: int | None = None,
                  cols: int | None = None) -> "Matrix":
        m = cls.build(field, doc)
        if rows is not None and (m.rows, m.cols) != (rows, cols):
            raise ValueError(f"expected {rows}x{cols} matrix, got {m.rows}x{m.cols}")
        return m


@functools.lru_cache(maxsize=4096)
def _rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    f = m.field
    rows = [list(r) for r in m.data]
    pivots = []
    r = 0
    for c in range(m.cols):
        prow = None
        for i in range(r, m.rows):
            if rows[i][c]:
                prow = i
                break
        if prow is None:
            continue
        rows[r], rows[prow] = rows[prow], rows[r]
        inv = f.inv(rows[r][c])
        if inv != f.one:
            rows[r] = [f.mul(inv, v) for v in rows[r]]
        rowr = rows[r]
        for i in range(m.rows):
            if i != r and rows[i][c]:
                mult = rows[i][c]
                rows[i] = [f.sub(v, f.mul(mult, w)) for v, w in zip(rows[i], rowr)]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    red = Matrix(f, m.rows, m.cols, tuple(tuple(row) for row in rows))
    return red, tuple(pivots)


@dataclass(frozen=True)
class Subspace:
    """A subspace of k^ambient_dim presented by an independent column basis."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise ValueError("basis rows do not match ambient dimension")
        if self.basis.rank() != self.basis.cols:
            raise ValueError("basis columns are dependent")

    @classmethod
    def from_span(cls, mat: Matrix) -> "Subspace":
        return cls(mat.rows, mat.image_basis())

    @property
    def dim(self) -> int:
        return self.basis.cols

    def contains(self, vectors: Matrix) -> bool:
        return self.basis.solve(vectors) is not None

    def same_space(self, other: "Subspace") -> bool:
        if self.ambient_dim != other.ambient_dim:
            return False
        return self.basis.image_basis() == other.basis.image_basis()


def rank_kernel_image(m: Matrix) -> tuple[int, Subspace, Subspace]:
    """Rank plus canonical kernel and image subspaces of a matrix."""
    kern = m.kernel_basis()
    img = m.image_basis()
    return img.cols, Subspace(m.cols, kern), Subspace(m.rows, img)


def solve_in_subspace(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Coordinates of b's columns in a's column basis; None when outside."""
    return a.solve(b)
