"""Small dense matrices of polynomials, with explicit shape so that
0×n and n×0 matrices behave."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .expr import PolyRing, Polynomial


class Matrix:
    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, ring: PolyRing, rows: Sequence[Sequence[Polynomial]], ncols: int = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        z = ring.zero
        return cls(ring, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, ring, n, scalar=None):
        one = ring.one if scalar is None else scalar
        z = ring.zero
        return cls(ring, [[one if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def of(cls, ring, rows, nrows=None, ncols=None):
        """Build from nested lists of polynomials, strings or numbers."""
        rows = [[ring(e) for e in r] for r in rows]
        if not rows and nrows and ncols == 0:
            rows = [[] for _ in range(nrows)]
        if nrows is not None and len(rows) != nrows:
            raise ValueError(f"expected {nrows} rows, got {len(rows)}")
        return cls(ring, rows, ncols if ncols is not None else (len(rows[0]) if rows else 0))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in r) for r in self.rows)
        return f"Matrix{self.shape}[{body}]"

    def tolist(self):
        return [list(r) for r in self.rows]

    def map(self, fn: Callable[[Polynomial], Polynomial]) -> "Matrix":
        return Matrix(self.ring, [[fn(e) for e in r] for r in self.rows], self.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix(self.ring, [[a + b for a, b in zip(r, s)]
                                  for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix(self.ring, [[a - b for a, b in zip(r, s)]
                                  for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "Matrix":
        return self.map(lambda e: -e)

    def scale(self, c) -> "Matrix":
        if isinstance(c, Polynomial):
            return self.map(lambda e: e * c)
        return self.map(lambda e: e.scale(c))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        z = self.ring.zero
        # sparse row-by-row product: only nonzero pairs are multiplied
        other_nz = [[(j, b) for j, b in enumerate(r) if b] for r in other.rows]
        out = []
        for r in self.rows:
            acc = {}
            for k, a in enumerate(r):
                if not a:
                    continue
                for j, b in other_nz[k]:
                    t = a * b
                    acc[j] = acc[j] + t if j in acc else t
            out.append([acc.get(j, z) for j in range(other.ncols)])
        return Matrix(self.ring, out, other.ncols)

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, [[self.rows[i][j] for i in range(self.nrows)]
                                  for j in range(self.ncols)], self.nrows)

    T = property(transpose)

    def is_zero(self) -> bool:
        return all(not e for r in self.rows for e in r)

    def delete(self, row: int, col: int) -> "Matrix":
        rows = [[e for j, e in enumerate(r) if j != col]
                for i, r in enumerate(self.rows) if i != row]
        return Matrix(self.ring, rows, self.ncols - 1)

    def evaluate(self, point):
        zero = Fraction(0)
        return [[e.evaluate(point) if e else zero for e in r] for r in self.rows]


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; the row/column index of ``a`` varies slowest."""
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append([x * y for x in ra for y in rb])
    return Matrix(a.ring, rows, a.ncols * b.ncols)


def block(grid, row_sizes, col_sizes, ring) -> Matrix:
    """Assemble a block matrix; ``None`` entries are zero blocks."""
    z = ring.zero
    rows = []
    for bi, rs in enumerate(row_sizes):
        for i in range(rs):
            row = []
            for bj, cs in enumerate(col_sizes):
                m = grid[bi][bj]
                if m is None:
                    row.extend([z] * cs)
                else:
                    if m.shape != (rs, cs):
                        raise ValueError(f"block ({bi},{bj}) has shape {m.shape}, "
                                         f"expected {(rs, cs)}")
                    row.extend(m.rows[i])
            rows.append(row)
    return Matrix(ring, rows, sum(col_sizes))


def diagonal_blocks(blocks, ring) -> Matrix:
    rs = [b.nrows for b in blocks]
    cs = [b.ncols for b in blocks]
    grid = [[b if i == j else None for j, _ in enumerate(blocks)] for i, b in enumerate(blocks)]
    return block(grid, rs, cs, ring)
