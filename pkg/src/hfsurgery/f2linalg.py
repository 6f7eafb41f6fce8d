"""Dense linear algebra over GF(2) with bit-packed rows.

Each row of a :class:`BitMatrix` is a Python ``int``; bit ``j`` of row ``i``
is the entry ``[i][j]``.  Entry ``[i][j]`` is the coefficient of target basis
element ``i`` in the image of source basis element ``j``.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Raised when matrix shapes are incompatible."""


class BitMatrix:
    """Immutable ``nrows x ncols`` matrix over GF(2)."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[int] | None = None):
        if nrows < 0 or ncols < 0:
            raise DimensionError(f"negative shape ({nrows}, {ncols})")
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            self._rows = (0,) * nrows
        else:
            rows = tuple(rows)
            if len(rows) != nrows:
                raise DimensionError(f"expected {nrows} rows, got {len(rows)}")
            limit = 1 << ncols
            for r in rows:
                if r < 0 or r >= limit:
                    raise DimensionError(f"row value {r} exceeds {ncols} columns")
            self._rows = rows

    # construction

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, (1 << i for i in range(n)))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> BitMatrix:
        """Build from a list of rows of 0/1 integers.

        ``ncols`` is needed only when there are no rows to infer it from.
        """
        entries = [list(row) for row in entries]
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        rows = []
        for i, row in enumerate(entries):
            if len(row) != ncols:
                raise DimensionError(f"row {i} has {len(row)} entries, expected {ncols}")
            value = 0
            for j, x in enumerate(row):
                if x not in (0, 1) or isinstance(x, bool):
                    raise ValueError(f"entry [{i}][{j}] = {x!r} is not 0 or 1")
                if x:
                    value |= 1 << j
            rows.append(value)
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[int]) -> BitMatrix:
        """Build from column bit vectors (bit ``i`` of a column is row ``i``)."""
        return cls(len(columns), nrows, columns).transpose()

    @classmethod
    def block(
        cls,
        row_sizes: Sequence[int],
        col_sizes: Sequence[int],
        blocks: dict[tuple[int, int], BitMatrix],
    ) -> BitMatrix:
        """Assemble a block matrix; ``blocks[(I, J)]`` sits at block row I, block column J.

        Blocks sharing a position are not allowed; missing blocks are zero.
        """
        row_off = [0]
        for s in row_sizes:
            row_off.append(row_off[-1] + s)
        col_off = [0]
        for s in col_sizes:
            col_off.append(col_off[-1] + s)
        rows = [0] * row_off[-1]
        for (bi, bj), m in blocks.items():
            if m.nrows != row_sizes[bi] or m.ncols != col_sizes[bj]:
                raise DimensionError(
                    f"block ({bi}, {bj}) has shape {m.shape}, "
                    f"expected ({row_sizes[bi]}, {col_sizes[bj]})"
                )
            shift = col_off[bj]
            base = row_off[bi]
            for i, r in enumerate(m._rows):
                rows[base + i] ^= r << shift
        return cls(row_off[-1], col_off[-1], rows)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(index)
        return (self._rows[i] >> j) & 1

    def column(self, j: int) -> int:
        """Column ``j`` as a bit vector indexed by row."""
        out = 0
        for i, r in enumerate(self._rows):
            if (r >> j) & 1:
                out |= 1 << i
        return out

    def columns(self) -> list[int]:
        return list(self.transpose()._rows)

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self._rows]

    def nonzero(self) -> Iterable[tuple[int, int]]:
        """Yield ``(row, col)`` of every unit entry in row-major order."""
        for i, r in enumerate(self._rows):
            while r:
                low = r & -r
                yield i, low.bit_length() - 1
                r ^= low

    def is_zero(self) -> bool:
        return not any(self._rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> BitMatrix:
        out = []
        for i in rows:
            r = self._rows[i]
            v = 0
            for k, j in enumerate(cols):
                if (r >> j) & 1:
                    v |= 1 << k
            out.append(v)
        return BitMatrix(len(rows), len(cols), out)

    def transpose(self) -> BitMatrix:
        cols = [0] * self.ncols
        for i, r in enumerate(self._rows):
            bit = 1 << i
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= bit
                r ^= low
        return BitMatrix(self.ncols, self.nrows, cols)

    @property
    def T(self) -> BitMatrix:
        return self.transpose()

    # arithmetic

    def __add__(self, other: BitMatrix) -> BitMatrix:
        return add(self, other)

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return multiply(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, self._rows))

    def __repr__(self) -> str:
        if self.nrows * self.ncols <= 64:
            return f"BitMatrix({self.to_lists()!r}, shape={self.shape})"
        return f"BitMatrix(shape={self.shape})"

    def __str__(self) -> str:
        return "\n".join(
            "".join("1" if (r >> j) & 1 else "." for j in range(self.ncols)) for r in self._rows
        )


def add(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    return BitMatrix(a.nrows, a.ncols, (x ^ y for x, y in zip(a._rows, b._rows)))


def multiply(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.ncols != b.nrows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    brows = b._rows
    out = []
    for r in a._rows:
        acc = 0
        while r:
            low = r & -r
            acc ^= brows[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return BitMatrix(a.nrows, b.ncols, out)


def kron(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Kronecker product; row ``(i, k)`` sits at ``i * b.nrows + k``."""
    out = []
    for ra in a._rows:
        for rb in b._rows:
            acc = 0
            r = ra
            while r:
                low = r & -r
                acc |= rb << ((low.bit_length() - 1) * b.ncols)
                r ^= low
            out.append(acc)
    return BitMatrix(a.nrows * b.nrows, a.ncols * b.ncols, out)


def is_zero(a: BitMatrix) -> bool:
    return a.is_zero()


def transpose(a: BitMatrix) -> BitMatrix:
    return a.transpose()


def rank(m: BitMatrix) -> int:
    # keyed by lowest set bit, so every stored row has a distinct leading bit
    pivots: dict[int, int] = {}
    for r in m._rows:
        while r:
            low = r & -r
            p = pivots.get(low)
            if p is None:
                pivots[low] = r
                break
            r ^= p
    return len(pivots)


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int], BitMatrix]:
    """Reduced row-echelon form.

    Returns ``(reduced, pivots, transform)`` with ``transform @ m == reduced``.
    Pivots are chosen leftmost column first, topmost available row first.
    """
    n, c = m.nrows, m.ncols
    mask = (1 << c) - 1
    # transform rows ride along in the high bits
    work = [r | (1 << (c + i)) for i, r in enumerate(m._rows)]
    pivots = []
    top = 0
    for col in range(c):
        if top == n:
            break
        bit = 1 << col
        for i in range(top, n):
            if work[i] & bit:
                break
        else:
            continue
        work[top], work[i] = work[i], work[top]
        prow = work[top]
        for k in range(n):
            if k != top and work[k] & bit:
                work[k] ^= prow
        pivots.append(col)
        top += 1
    reduced = BitMatrix(n, c, (w & mask for w in work))
    transform = BitMatrix(n, n, (w >> c for w in work))
    return reduced, pivots, transform


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """A ``ncols x k`` matrix whose columns form a basis of ``ker m``."""
    reduced, pivots, _ = rref(m)
    pivot_set = set(pivots)
    vectors = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        v = 1 << free
        for row, pc in enumerate(pivots):
            if (reduced._rows[row] >> free) & 1:
                v |= 1 << pc
        vectors.append(v)
    return BitMatrix.from_columns(m.ncols, vectors)


def column_space_equal(a: BitMatrix, b: BitMatrix) -> bool:
    if a.nrows != b.nrows:
        raise DimensionError(f"column spaces live in different dimensions: {a.nrows} vs {b.nrows}")
    ra = rank(a)
    if ra != rank(b):
        return False
    joined = BitMatrix.block([a.nrows], [a.ncols, b.ncols], {(0, 0): a, (0, 1): b})
    return rank(joined) == ra


def inverse(m: BitMatrix) -> BitMatrix:
    if m.nrows != m.ncols:
        raise DimensionError(f"cannot invert non-square {m.shape}")
    reduced, _, transform = rref(m)
    if reduced != BitMatrix.identity(m.nrows):
        raise ValueError("matrix is singular over GF(2)")
    return transform
