"""Dense exact matrices over a :class:`~puremin.rings.RingSpec`."""

from __future__ import annotations

from fractions import Fraction

from .rings import RingSpec, ring_from_json


class Matrix:
    """Immutable dense matrix; entries are canonical ring elements.

    ``data`` is a tuple of row tuples.  Shapes with zero rows or zero
    columns are allowed and carry their other dimension explicitly.
    """

    __slots__ = ("ring", "rows", "cols", "data", "_hash")

    def __init__(self, ring: RingSpec, data, rows: int | None = None, cols: int | None = None, *, canonical=False):
        data = [list(r) for r in data]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"ragged or mis-shaped matrix data for shape {rows}x{cols}")
        if canonical:
            self.data = tuple(tuple(r) for r in data)
        else:
            elem = ring.elem
            self.data = tuple(tuple(elem(x) for x in r) for r in data)
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self._hash = None

    # --- constructors ---------------------------------------------------

    @classmethod
    def zeros(cls, ring, rows, cols):
        return cls(ring, [[0] * cols for _ in range(rows)], rows, cols, canonical=True)

    @classmethod
    def identity(cls, ring, n):
        one = ring.one()
        return cls(ring, [[one if i == j else 0 for j in range(n)] for i in range(n)], n, n, canonical=True)

    @classmethod
    def scalar(cls, ring, n, c):
        c = ring.elem(c)
        return cls(ring, [[c if i == j else 0 for j in range(n)] for i in range(n)], n, n, canonical=True)

    @classmethod
    def diagonal(cls, ring, values, rows=None, cols=None):
        values = list(values)
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = ring.elem(v)
        return cls(ring, out, rows, cols, canonical=True)

    @classmethod
    def from_columns(cls, ring, columns, rows):
        columns = list(columns)
        return cls(ring, [[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @classmethod
    def column_vector(cls, ring, values):
        values = list(values)
        return cls(ring, [[v] for v in values], len(values), 1)

    # --- access ---------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def column(self, j):
        return tuple(r[j] for r in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self):
        return [list(r) for r in self.data]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_identity(self) -> bool:
        return self.is_square() and all(
            x == (1 if i == j else 0) for i, r in enumerate(self.data) for j, x in enumerate(r)
        )

    # --- algebra --------------------------------------------------------

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_ring(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        add = self.ring.add
        return Matrix(
            self.ring,
            [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
            self.rows,
            self.cols,
            canonical=True,
        )

    def __neg__(self) -> Matrix:
        neg = self.ring.neg
        return Matrix(self.ring, [[neg(a) for a in r] for r in self.data], self.rows, self.cols, canonical=True)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def scale(self, c) -> Matrix:
        mul = self.ring.mul
        c = self.ring.elem(c)
        return Matrix(self.ring, [[mul(c, a) for a in r] for r in self.data], self.rows, self.cols, canonical=True)

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check_ring(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        elem = self.ring.elem
        ocols = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for r in self.data:
            nz = [(k, a) for k, a in enumerate(r) if a != 0]
            if not nz:
                out.append([0] * other.cols)
                continue
            out.append([elem(sum(a * c[k] for k, a in nz)) for c in ocols])
        return Matrix(self.ring, out, self.rows, other.cols, canonical=True)

    @property
    def T(self) -> Matrix:
        return Matrix(self.ring, [list(c) for c in zip(*self.data)] if self.rows else [[] for _ in range(self.cols)],
                      self.cols, self.rows, canonical=True)

    def submatrix(self, rows=None, cols=None) -> Matrix:
        rows = range(self.rows) if rows is None else list(rows)
        cols = range(self.cols) if cols is None else list(cols)
        return Matrix(self.ring, [[self.data[i][j] for j in cols] for i in rows], len(rows), len(cols), canonical=True)

    def hstack(self, *others: Matrix) -> Matrix:
        mats = (self,) + others
        for m in others:
            self._check_ring(m)
            if m.rows != self.rows:
                raise ValueError("hstack row mismatch")
        data = [sum((m.data[i] for m in mats), ()) for i in range(self.rows)]
        return Matrix(self.ring, data, self.rows, sum(m.cols for m in mats), canonical=True)

    def vstack(self, *others: Matrix) -> Matrix:
        mats = (self,) + others
        for m in others:
            self._check_ring(m)
            if m.cols != self.cols:
                raise ValueError("vstack column mismatch")
        data = [r for m in mats for r in m.data]
        return Matrix(self.ring, data, sum(m.rows for m in mats), self.cols, canonical=True)

    @staticmethod
    def block_diag(ring, *blocks: Matrix) -> Matrix:
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i, r in enumerate(b.data):
                out[r0 + i][c0 : c0 + b.cols] = r
            r0 += b.rows
            c0 += b.cols
        return Matrix(ring, out, rows, cols, canonical=True)

    @staticmethod
    def blocks(ring, grid, row_sizes, col_sizes) -> Matrix:
        """Assemble a block matrix; ``None`` entries of ``grid`` are zero blocks."""
        out = [[0] * sum(col_sizes) for _ in range(sum(row_sizes))]
        r0 = 0
        for bi, rs in enumerate(row_sizes):
            c0 = 0
            for bj, cs in enumerate(col_sizes):
                b = grid[bi][bj]
                if b is not None:
                    if b.shape != (rs, cs):
                        raise ValueError(f"block ({bi},{bj}) has shape {b.shape}, expected {(rs, cs)}")
                    for i, r in enumerate(b.data):
                        out[r0 + i][c0 : c0 + cs] = r
                c0 += cs
            r0 += rs
        return Matrix(ring, out, sum(row_sizes), sum(col_sizes), canonical=True)

    def kron(self, other: Matrix) -> Matrix:
        mul = self.ring.mul
        out = []
        for r in self.data:
            for s in other.data:
                out.append([mul(a, b) for a in r for b in s])
        return Matrix(self.ring, out, self.rows * other.rows, self.cols * other.cols, canonical=True)

    def change_ring(self, ring: RingSpec) -> Matrix:
        return Matrix(ring, self.data, self.rows, self.cols)

    def determinant(self):
        """Determinant computed over Q and mapped back into the ring."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return self.ring.one()
        # IntMod entries are lifted to Z; the determinant commutes with reduction
        m = [[Fraction(x) for x in r] for r in self.data]
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for r in range(c + 1, n):
                f = m[r][c] * inv
                if f:
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return self.ring.elem(det)

    # --- comparison / serialization --------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and self.data == other.data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.ring}, {self.rows}x{self.cols}, {[list(r) for r in self.data]})"

    def to_json(self):
        def enc(x):
            if isinstance(x, Fraction):
                return [x.numerator, x.denominator]
            return x if self.ring.kind in ("Int", "IntMod") else [x, 1]

        return {"rows": self.rows, "cols": self.cols, "entries": [[enc(x) for x in r] for r in self.data]}

    @classmethod
    def from_json(cls, obj, ring: RingSpec) -> Matrix:
        if isinstance(obj, dict) and "ring" in obj and ring is None:
            ring = ring_from_json(obj["ring"])
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        entries = obj.get("entries", [])
        if rows and len(entries) != rows:
            raise ValueError(f"matrix declares {rows} rows but has {len(entries)}")

        def dec(x):
            if isinstance(x, (list, tuple)):
                return Fraction(int(x[0]), int(x[1]))
            if isinstance(x, bool) or not isinstance(x, int):
                raise ValueError(f"matrix entry {x!r} is not an integer or [num, den] pair")
            return x

        return cls(ring, [[dec(x) for x in r] for r in entries] if rows else [], rows, cols)
