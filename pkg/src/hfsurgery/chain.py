"""Finite chain complexes over GF(2).

Graded complexes carry a differential of degree -1, ``d_k: C_k -> C_{k-1}``.
Ungraded complexes carry a single square differential ``D`` with ``D @ D == 0``.
Generators are addressed by string labels, unique within a complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .f2linalg import BitMatrix, DimensionError, add, kron, multiply, rank


class InvalidComplexError(ValueError):
    """d^2 != 0.  ``witness`` names a generator whose image under d^2 is nonzero."""

    def __init__(self, message: str, witness: str | None = None):
        super().__init__(message)
        self.witness = witness


class IllegalCancellationError(ValueError):
    pass


class NotAChainMapError(ValueError):
    pass


def _check_labels(labels: Iterable[str]) -> None:
    seen = set()
    for lab in labels:
        if lab in seen:
            raise ValueError(f"duplicate generator label {lab!r}")
        seen.add(lab)


@dataclass(frozen=True)
class GradedSpace:
    """Basis labels per integer grade; empty grades are dropped."""

    labels: Mapping[int, tuple[str, ...]]

    def __post_init__(self):
        clean = {int(k): tuple(v) for k, v in sorted(self.labels.items()) if len(v)}
        _check_labels(lab for labs in clean.values() for lab in labs)
        object.__setattr__(self, "labels", clean)

    @classmethod
    def from_dims(cls, dims: Mapping[int, int], prefix: str = "g") -> GradedSpace:
        return cls({k: tuple(f"{prefix}{k}_{i}" for i in range(n)) for k, n in dims.items()})

    def dim(self, k: int) -> int:
        return len(self.labels.get(k, ()))

    @property
    def grades(self) -> list[int]:
        return list(self.labels)

    @property
    def dims(self) -> dict[int, int]:
        return {k: len(v) for k, v in self.labels.items()}

    @property
    def total_dim(self) -> int:
        return sum(len(v) for v in self.labels.values())

    def flat_labels(self) -> list[str]:
        return [lab for k in self.labels for lab in self.labels[k]]


@dataclass(frozen=True)
class ChainComplex:
    space: GradedSpace
    differentials: Mapping[int, BitMatrix] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.space, GradedSpace):
            object.__setattr__(self, "space", GradedSpace(self.space))
        kept = {}
        for k, d in sorted(self.differentials.items()):
            expected = (self.space.dim(k - 1), self.space.dim(k))
            if d.shape != expected:
                raise DimensionError(f"d_{k} has shape {d.shape}, expected {expected}")
            if not d.is_zero():
                kept[k] = d
        object.__setattr__(self, "differentials", kept)

    @classmethod
    def zero(cls, dims: Mapping[int, int], prefix: str = "g") -> ChainComplex:
        return cls(GradedSpace.from_dims(dims, prefix))

    @classmethod
    def from_flat(cls, labels: Sequence[str], grades: Sequence[int], D: BitMatrix) -> ChainComplex:
        """Inverse of :meth:`flatten`; ``grades`` must be non-decreasing.

        Raises DimensionError if ``D`` has an entry that does not lower grade by one.
        """
        if list(grades) != sorted(grades):
            raise ValueError("grades must be non-decreasing")
        c = _unflatten(labels, grades, D)
        if _flatten(c)[2] != D:
            raise DimensionError("differential has entries that do not lower grade by one")
        return c

    def dim(self, k: int) -> int:
        return self.space.dim(k)

    @property
    def dims(self) -> dict[int, int]:
        return self.space.dims

    @property
    def total_dim(self) -> int:
        return self.space.total_dim

    def labels(self, k: int) -> tuple[str, ...]:
        return self.space.labels.get(k, ())

    def d(self, k: int) -> BitMatrix:
        m = self.differentials.get(k)
        if m is None:
            return BitMatrix.zeros(self.dim(k - 1), self.dim(k))
        return m

    def has_zero_differential(self) -> bool:
        return not self.differentials

    def flatten(self) -> UngradedComplex:
        """Forget the grading; generators ordered by ascending grade."""
        labels, grades, D = _flatten(self)
        return UngradedComplex(labels, D)


@dataclass(frozen=True)
class UngradedComplex:
    labels: tuple[str, ...]
    D: BitMatrix

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        _check_labels(self.labels)
        n = len(self.labels)
        if self.D.shape != (n, n):
            raise DimensionError(f"differential has shape {self.D.shape}, expected ({n}, {n})")

    @classmethod
    def zero(cls, labels: Sequence[str]) -> UngradedComplex:
        return cls(tuple(labels), BitMatrix.zeros(len(labels), len(labels)))

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


Complex = Union[ChainComplex, UngradedComplex]


@dataclass(frozen=True)
class ChainMap:
    """Per-grade blocks ``f_k: source_k -> target_{k+shift}``."""

    source: ChainComplex
    target: ChainComplex
    blocks: Mapping[int, BitMatrix] = field(default_factory=dict)
    shift: int = 0

    def __post_init__(self):
        kept = {}
        for k, m in sorted(self.blocks.items()):
            expected = (self.target.dim(k + self.shift), self.source.dim(k))
            if m.shape != expected:
                raise DimensionError(f"block at grade {k} has shape {m.shape}, expected {expected}")
            if not m.is_zero():
                kept[k] = m
        object.__setattr__(self, "blocks", kept)

    @classmethod
    def identity(cls, c: ChainComplex) -> ChainMap:
        return cls(c, c, {k: BitMatrix.identity(n) for k, n in c.dims.items()})

    @classmethod
    def from_total(
        cls, source: ChainComplex, target: ChainComplex, m: BitMatrix, shift: int = 0
    ) -> ChainMap:
        """Split a matrix between flattened bases into per-grade blocks.

        Raises DimensionError if ``m`` has entries that do not shift grades by ``shift``.
        """
        if m.shape != (target.total_dim, source.total_dim):
            raise DimensionError(
                f"map has shape {m.shape}, expected ({target.total_dim}, {source.total_dim})"
            )
        s_off = _offsets(source)
        t_off = _offsets(target)
        blocks = {}
        for k, n in source.dims.items():
            tk = k + shift
            rows = range(t_off[tk], t_off[tk] + target.dim(tk)) if tk in t_off else range(0)
            blocks[k] = m.submatrix(list(rows), list(range(s_off[k], s_off[k] + n)))
        parts = {(k + shift, k): b for k, b in blocks.items()}
        if _assemble_total(target, source, parts) != m:
            raise DimensionError(f"map does not have degree {shift}")
        return cls(source, target, blocks, shift)

    def block(self, k: int) -> BitMatrix:
        m = self.blocks.get(k)
        if m is None:
            return BitMatrix.zeros(self.target.dim(k + self.shift), self.source.dim(k))
        return m

    def total(self) -> BitMatrix:
        """The map as one matrix between flattened bases."""
        return _assemble_total(
            self.target, self.source, {(k + self.shift, k): m for k, m in self.blocks.items()}
        )

    def is_zero(self) -> bool:
        return not self.blocks

    def is_chain_map(self) -> bool:
        return _chain_map_witness(self) is None

    def compose(self, other: ChainMap) -> ChainMap:
        """``self ∘ other``."""
        if other.target != self.source:
            raise DimensionError("maps are not composable")
        blocks = {}
        for k in other.source.dims:
            blocks[k] = multiply(self.block(k + other.shift), other.block(k))
        return ChainMap(other.source, self.target, blocks, self.shift + other.shift)


def _offsets(c: ChainComplex) -> dict[int, int]:
    off = {}
    pos = 0
    for k, n in c.dims.items():
        off[k] = pos
        pos += n
    return off


def _assemble_total(
    target: ChainComplex, source: ChainComplex, parts: Mapping[tuple[int, int], BitMatrix]
) -> BitMatrix:
    tg = list(target.dims)
    sg = list(source.dims)
    ti = {k: i for i, k in enumerate(tg)}
    si = {k: i for i, k in enumerate(sg)}
    blocks = {(ti[a], si[b]): m for (a, b), m in parts.items() if a in ti and b in si}
    return BitMatrix.block([target.dim(k) for k in tg], [source.dim(k) for k in sg], blocks)


def _chain_map_witness(f: ChainMap) -> int | None:
    """First source grade where ``d f != f d``, or None."""
    grades = set(f.source.dims) | {k - f.shift for k in f.target.dims}
    for k in sorted(grades):
        lhs = multiply(f.target.d(k + f.shift), f.block(k))
        rhs = multiply(f.block(k - 1), f.source.d(k))
        if lhs != rhs:
            return k
    return None


def _flatten(c: ChainComplex) -> tuple[list[str], list[int], BitMatrix]:
    labels = c.space.flat_labels()
    grades = [k for k, n in c.dims.items() for _ in range(n)]
    D = _assemble_total(c, c, {(k - 1, k): m for k, m in c.differentials.items()})
    return labels, grades, D


def _unflatten(labels: Sequence[str], grades: Sequence[int], D: BitMatrix) -> ChainComplex:
    by_grade: dict[int, list[int]] = {}
    for i, k in enumerate(grades):
        by_grade.setdefault(k, []).append(i)
    space = GradedSpace({k: tuple(labels[i] for i in idx) for k, idx in by_grade.items()})
    diffs = {}
    for k, idx in by_grade.items():
        if k - 1 in by_grade:
            diffs[k] = D.submatrix(by_grade[k - 1], idx)
    return ChainComplex(space, diffs)


# validation and homology


def _d_squared_witness(c: Complex) -> str | None:
    if isinstance(c, UngradedComplex):
        sq = multiply(c.D, c.D)
        for i, j in sq.nonzero():
            return c.labels[j]
        return None
    for k in c.dims:
        sq = multiply(c.d(k - 1), c.d(k))
        for i, j in sq.nonzero():
            return c.labels(k)[j]
    return None


def validate_complex(c: Complex) -> bool:
    return _d_squared_witness(c) is None


def _require_valid(c: Complex) -> None:
    w = _d_squared_witness(c)
    if w is not None:
        raise InvalidComplexError(f"d^2 is nonzero on generator {w!r}", witness=w)


def homology_dims(c: ChainComplex) -> dict[int, int]:
    """``dim ker d_k - rank d_{k+1}`` for every grade of the space."""
    _require_valid(c)
    ranks = {k: rank(m) for k, m in c.differentials.items()}
    return {k: n - ranks.get(k, 0) - ranks.get(k + 1, 0) for k, n in c.dims.items()}


def total_homology(c: Complex) -> int:
    if isinstance(c, UngradedComplex):
        return ungraded_homology(c)
    return sum(homology_dims(c).values())


def ungraded_homology(c: UngradedComplex) -> int:
    _require_valid(c)
    return c.dim - 2 * rank(c.D)


def differential_ranks(c: Complex) -> dict[int, int] | int:
    if isinstance(c, UngradedComplex):
        return rank(c.D)
    return {k: rank(c.d(k)) for k in sorted(c.dims, reverse=True) if k - 1 in c.dims}


def euler_characteristic(dims: Mapping[int, int]) -> int:
    return sum(n if k % 2 == 0 else -n for k, n in dims.items())


# constructions


def _disjoint_or_prefixed(label_sets: Sequence[Sequence[str]], prefixes: Sequence[str]):
    everything = [lab for labs in label_sets for lab in labs]
    if len(set(everything)) == len(everything):
        return [lambda s: s for _ in label_sets]
    return [lambda s, p=p: f"{p}{s}" for p in prefixes]


def mapping_cone(f: ChainMap, prefixes: tuple[str, str] = ("src:", "tgt:")) -> ChainComplex:
    """Cone of a degree-0 chain map ``f: A -> B``.

    ``A_k`` sits in cone grade ``k + 1``, ``B_k`` in grade ``k``, and the
    differential is ``(a, b) -> (d a, f a + d b)``.  Labels are kept when
    disjoint and otherwise prefixed.
    """
    if f.shift != 0:
        raise ValueError(f"mapping_cone expects a degree-0 map, got shift {f.shift}")
    w = _chain_map_witness(f)
    if w is not None:
        raise NotAChainMapError(f"map does not commute with differentials at grade {w}")
    A, B = f.source, f.target
    ra, rb = _disjoint_or_prefixed([A.space.flat_labels(), B.space.flat_labels()], prefixes)
    grades = sorted({k + 1 for k in A.dims} | set(B.dims))
    labels = {k: tuple(ra(s) for s in A.labels(k - 1)) + tuple(rb(s) for s in B.labels(k)) for k in grades}
    diffs = {}
    for k in grades:
        # columns: A_{k-1}, B_k ; rows: A_{k-2}, B_{k-1}
        diffs[k] = BitMatrix.block(
            [A.dim(k - 2), B.dim(k - 1)],
            [A.dim(k - 1), B.dim(k)],
            {(0, 0): A.d(k - 1), (1, 0): f.block(k - 1), (1, 1): B.d(k)},
        )
    return ChainComplex(GradedSpace(labels), diffs)


def direct_sum(cs: Sequence[ChainComplex]) -> ChainComplex:
    renames = _disjoint_or_prefixed(
        [c.space.flat_labels() for c in cs], [f"{i}:" for i in range(len(cs))]
    )
    grades = sorted({k for c in cs for k in c.dims})
    labels = {k: tuple(r(s) for c, r in zip(cs, renames) for s in c.labels(k)) for k in grades}
    diffs = {}
    for k in grades:
        diffs[k] = BitMatrix.block(
            [c.dim(k - 1) for c in cs],
            [c.dim(k) for c in cs],
            {(i, i): c.d(k) for i, c in enumerate(cs)},
        )
    return ChainComplex(GradedSpace(labels), diffs)


def _tensor_layout(a: ChainComplex, b: ChainComplex) -> dict[int, list[tuple[int, int]]]:
    layout: dict[int, list[tuple[int, int]]] = {}
    for i in a.dims:
        for j in b.dims:
            layout.setdefault(i + j, []).append((i, j))
    return {k: sorted(v) for k, v in sorted(layout.items())}


def tensor(a: Complex, b: Complex) -> Complex:
    """Tensor product with differential ``d⊗1 + 1⊗d``; labels ``"x⊗y"``."""
    if isinstance(a, UngradedComplex) and isinstance(b, UngradedComplex):
        labels = tuple(f"{x}⊗{y}" for x in a.labels for y in b.labels)
        D = add(kron(a.D, BitMatrix.identity(b.dim)), kron(BitMatrix.identity(a.dim), b.D))
        return UngradedComplex(labels, D)
    if isinstance(a, ChainComplex) and isinstance(b, ChainComplex):
        layout = _tensor_layout(a, b)
        labels = {
            k: tuple(f"{x}⊗{y}" for i, j in pairs for x in a.labels(i) for y in b.labels(j))
            for k, pairs in layout.items()
        }
        diffs = {}
        for k, cols in layout.items():
            rows = layout.get(k - 1, [])
            ri = {p: n for n, p in enumerate(rows)}
            blocks = {}
            for cj, (i, j) in enumerate(cols):
                if (i - 1, j) in ri:
                    blocks[(ri[(i - 1, j)], cj)] = kron(a.d(i), BitMatrix.identity(b.dim(j)))
                if (i, j - 1) in ri:
                    blocks[(ri[(i, j - 1)], cj)] = kron(BitMatrix.identity(a.dim(i)), b.d(j))
            diffs[k] = BitMatrix.block(
                [a.dim(i) * b.dim(j) for i, j in rows],
                [a.dim(i) * b.dim(j) for i, j in cols],
                blocks,
            )
        return ChainComplex(GradedSpace(labels), diffs)
    raise TypeError("tensor needs two complexes of the same kind")


def tensor_map(f, g):
    """Tensor product of maps.

    Plain matrices (maps between ungraded complexes) give their Kronecker
    product.  Graded chain maps give a chain map between tensor complexes.
    """
    if isinstance(f, BitMatrix) and isinstance(g, BitMatrix):
        return kron(f, g)
    if isinstance(f, ChainMap) and isinstance(g, ChainMap):
        src = tensor(f.source, g.source)
        tgt = tensor(f.target, g.target)
        s_layout = _tensor_layout(f.source, g.source)
        t_layout = _tensor_layout(f.target, g.target)
        blocks = {}
        for k, pairs in s_layout.items():
            tk = k + f.shift + g.shift
            tpairs = t_layout.get(tk, [])
            ti = {p: n for n, p in enumerate(tpairs)}
            parts = {}
            for cj, (i, j) in enumerate(pairs):
                dest = (i + f.shift, j + g.shift)
                if dest in ti:
                    parts[(ti[dest], cj)] = kron(f.block(i), g.block(j))
            blocks[k] = BitMatrix.block(
                [f.target.dim(i) * g.target.dim(j) for i, j in tpairs],
                [f.source.dim(i) * g.source.dim(j) for i, j in pairs],
                parts,
            )
        return ChainMap(src, tgt, blocks, f.shift + g.shift)
    raise TypeError("tensor_map needs two matrices or two chain maps")


def map_sum(fs):
    """Entrywise XOR of maps sharing source, target and shift."""
    fs = list(fs)
    if not fs:
        raise ValueError("map_sum of nothing")
    first = fs[0]
    if isinstance(first, BitMatrix):
        out = first
        for m in fs[1:]:
            out = add(out, m)
        return out
    for g in fs[1:]:
        if g.source != first.source or g.target != first.target or g.shift != first.shift:
            raise DimensionError("map_sum needs maps with a common source, target and shift")
    grades = {k for g in fs for k in g.blocks}
    blocks = {}
    for k in grades:
        acc = first.block(k)
        for g in fs[1:]:
            acc = add(acc, g.block(k))
        blocks[k] = acc
    return ChainMap(first.source, first.target, blocks, first.shift)


# cancellation


def _delete_two(rows: list[int], a: int, b: int, n: int) -> list[int]:
    """Drop rows a, b and bits a, b (a < b) from a square bit matrix of size n."""
    lo_mask = (1 << a) - 1
    mid_mask = (1 << (b - a - 1)) - 1
    out = []
    for i, r in enumerate(rows):
        if i == a or i == b:
            continue
        out.append((r & lo_mask) | (((r >> (a + 1)) & mid_mask) << a) | ((r >> (b + 1)) << (b - 1)))
    return out


def _cancel_flat(rows: list[int], x: int, y: int) -> list[int]:
    """Cancel the unit entry ``D[y][x]`` in the square matrix ``rows``."""
    ry = rows[y]
    bit = 1 << x
    out = [r ^ ry if r & bit else r for r in rows]
    a, b = sorted((x, y))
    return _delete_two(out, a, b, len(rows))


def cancel_pair(c: Complex, x: str, y: str) -> Complex:
    """Remove generators x != y where ``<d x, y> = 1`` and fold in the zig-zag term.

    For every remaining ``a``: ``d'(a) = d(a) + <d a, y> d(x)``, restricted
    away from x and y.  This is the quotient by the acyclic subcomplex
    spanned by ``x`` and ``d x``.
    """
    if isinstance(c, UngradedComplex):
        labels, grades, D = list(c.labels), None, c.D
    else:
        labels, grades, D = _flatten(c)
    try:
        xi, yi = labels.index(x), labels.index(y)
    except ValueError:
        raise IllegalCancellationError(f"unknown generator in pair ({x!r}, {y!r})") from None
    if xi == yi:
        raise IllegalCancellationError(f"cannot cancel {x!r} against itself")
    if not D[yi, xi]:
        raise IllegalCancellationError(f"d({x}) does not contain {y}")
    rows = _cancel_flat(list(D.rows), xi, yi)
    keep = [i for i in range(len(labels)) if i not in (xi, yi)]
    new_labels = [labels[i] for i in keep]
    newD = BitMatrix(len(keep), len(keep), rows)
    if grades is None:
        return UngradedComplex(tuple(new_labels), newD)
    return _unflatten(new_labels, [grades[i] for i in keep], newD)


def reduce_with_trace(c: Complex) -> tuple[Complex, list[tuple[str, str]]]:
    """Cancel unit entries until the differential vanishes.

    The pair cancelled at each step is the first off-diagonal nonzero entry
    ``D[y][x]`` in row-major order of the current flattened basis.  Diagonal
    entries can occur in ungraded complexes; they vanish once nothing else is
    left, since a diagonal D with D^2 = 0 is zero.  Returns the reduced
    complex and the list of ``(x, y)`` pairs cancelled.
    """
    _require_valid(c)
    if isinstance(c, UngradedComplex):
        labels, grades, D = list(c.labels), None, c.D
    else:
        labels, grades, D = _flatten(c)
    rows = list(D.rows)
    trace = []
    while True:
        for y, r in enumerate(rows):
            r &= ~(1 << y)
            if r:
                x = (r & -r).bit_length() - 1
                break
        else:
            break
        trace.append((labels[x], labels[y]))
        rows = _cancel_flat(rows, x, y)
        a, b = sorted((x, y))
        del labels[b], labels[a]
        if grades is not None:
            del grades[b], grades[a]
    n = len(labels)
    newD = BitMatrix(n, n, rows)
    if grades is None:
        return UngradedComplex(tuple(labels), newD), trace
    return _unflatten(labels, grades, newD), trace


def reduce(c: Complex) -> Complex:
    return reduce_with_trace(c)[0]
