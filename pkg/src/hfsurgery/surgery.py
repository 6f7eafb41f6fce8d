"""Surgery complexes built from a knot system.

* ``build_rational``: q copies of H_inf (grade 2), p+q copies of H_1 (grade 1)
  and p copies of H_0 (grade 0) with the four families of maps between them.
* ``build_zigzag``: the two-row complex for integer surgery.
* ``build_splice``: the glued complex (L1⊗L2) ⊕ (M1⊗M2) of two bordered systems.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import gcd
from typing import Any

from .chain import (
    ChainComplex,
    GradedSpace,
    InvalidComplexError,
    UngradedComplex,
    homology_dims,
    reduce_with_trace,
    tensor,
    ungraded_homology,
)
from .f2linalg import BitMatrix, add, kron, multiply, rank
from .knotsys import BorderedSystem, KnotSystem, ValidationFailed, bordered_from_knotsys, validate
from .lensmodel import build_model

NOTE_PSIBAR = "H1(j) -> H0(j) family uses psibar (phibar has domain H_inf, not H1)"
NOTE_ARROWS = "zig-zag second row: H_inf is the source of both phi and phibar"
NOTE_HOMOLOGY_LEVEL = "inputs treated as homology groups with zero differential"


@dataclass(frozen=True)
class SurgerySlope:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError(f"slope needs positive p, q; got p={self.p}, q={self.q}")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"p={self.p} and q={self.q} are not coprime")


def _require_homology_level(ks: KnotSystem) -> None:
    report = validate(ks)
    if not report.passed:
        raise ValidationFailed(report)
    if not ks.is_homology_level():
        raise ValueError(
            f"knot system {ks.name!r} has nonzero differentials; use the splice method instead"
        )


def build_rational(ks: KnotSystem, slope: SurgerySlope) -> ChainComplex:
    _require_homology_level(ks)
    p, q = slope.p, slope.q
    phi, phibar = ks.matrix("phi"), ks.matrix("phibar")
    psi, psibar = ks.matrix("psi"), ks.matrix("psibar")
    h_inf, h_one, h_zero = ks.dims
    inf_labels = ks.c_inf.space.flat_labels()
    one_labels = ks.c_one.space.flat_labels()
    zero_labels = ks.c_zero.space.flat_labels()
    # copies are numbered from 1
    labels = {
        2: tuple(f"inf({i}):{s}" for i in range(1, q + 1) for s in inf_labels),
        1: tuple(f"one({i}):{s}" for i in range(1, p + q + 1) for s in one_labels),
        0: tuple(f"zero({j}):{s}" for j in range(1, p + 1) for s in zero_labels),
    }
    d2 = {}
    for i in range(q):
        d2[(i, i)] = phi
        d2[(i + p, i)] = phibar
    d1 = {}
    for j in range(p):
        d1[(j, j + q)] = psi
        d1[(j, j)] = psibar
    diffs = {
        2: BitMatrix.block([h_one] * (p + q), [h_inf] * q, d2),
        1: BitMatrix.block([h_zero] * p, [h_one] * (p + q), d1),
    }
    return ChainComplex(GradedSpace(labels), diffs)


def build_zigzag(ks: KnotSystem, n: int) -> ChainComplex:
    """Integer surgery complex, assembled from its diagram.

    Top row, left to right: H0, H1, H0, ..., H0 (2n - 1 terms); each H1 maps
    by psi to its left neighbour and by psibar to its right one.  Bottom row:
    H1 <-phi- H_inf -phibar-> H1, the left H1 mapping by psibar to the first
    H0 and the right H1 by psi to the last H0.
    """
    if n < 1:
        raise ValueError(f"zig-zag needs n >= 1, got {n}")
    _require_homology_level(ks)
    spaces = {"inf": ks.c_inf, "one": ks.c_one, "zero": ks.c_zero}
    grade = {"inf": 2, "one": 1, "zero": 0}
    maps = {key: ks.matrix(key) for key in ("phi", "phibar", "psi", "psibar")}

    nodes: list[tuple[str, str]] = []  # (node name, space)
    for t in range(2 * n - 1):
        nodes.append((f"top{t}", "zero" if t % 2 == 0 else "one"))
    nodes += [("bottom.left", "one"), ("bottom.mid", "inf"), ("bottom.right", "one")]

    edges = []  # (source node, target node, map name)
    for t in range(1, 2 * n - 1, 2):
        edges.append((f"top{t}", f"top{t - 1}", "psi"))
        edges.append((f"top{t}", f"top{t + 1}", "psibar"))
    edges += [
        ("bottom.mid", "bottom.left", "phi"),
        ("bottom.mid", "bottom.right", "phibar"),
        ("bottom.left", "top0", "psibar"),
        ("bottom.right", f"top{2 * n - 2}", "psi"),
    ]
    return _assemble_diagram(nodes, edges, spaces, grade, maps)


def _assemble_diagram(nodes, edges, spaces, grade, maps) -> ChainComplex:
    by_grade: dict[int, list[str]] = {}
    kind = dict(nodes)
    for node, space in nodes:
        by_grade.setdefault(grade[space], []).append(node)
    labels = {
        k: tuple(f"{node}:{s}" for node in members for s in spaces[kind[node]].space.flat_labels())
        for k, members in by_grade.items()
    }
    diffs = {}
    for k, members in by_grade.items():
        below = by_grade.get(k - 1, [])
        col = {node: i for i, node in enumerate(members)}
        row = {node: i for i, node in enumerate(below)}
        blocks = {}
        for src, tgt, name in edges:
            if src in col and tgt in row:
                key = (row[tgt], col[src])
                blocks[key] = add(blocks[key], maps[name]) if key in blocks else maps[name]
        diffs[k] = BitMatrix.block(
            [spaces[kind[node]].total_dim for node in below],
            [spaces[kind[node]].total_dim for node in members],
            blocks,
        )
    return ChainComplex(GradedSpace(labels), diffs)


def build_splice(b1: BorderedSystem, b2: BorderedSystem) -> UngradedComplex:
    """Glue two bordered systems.

    The space is (L1⊗L2) ⊕ (M1⊗M2) with differential
    ``d + Phi1⊗Phi2 + (Psi1_1⊗Psi2_2 + Psi1_2⊗Psi2_1 + Psi1_3⊗Psi2_3)``.
    d^2 = 0 is checked; failure raises InvalidComplexError with a witness.
    """
    for tag, b in (("first", b1), ("second", b2)):
        problems = b.failures()
        if problems:
            raise ValueError(f"{tag} bordered system is invalid: {problems}")
    L = tensor(b1.L, b2.L)
    M = tensor(b1.M, b2.M)
    phibar = kron(b1.phi, b2.phi)
    psibar = add(
        add(kron(b1.psi1, b2.psi2), kron(b1.psi2, b2.psi1)),
        kron(b1.psi3, b2.psi3),
    )
    D = BitMatrix.block(
        [L.dim, M.dim],
        [L.dim, M.dim],
        {(0, 0): L.D, (0, 1): phibar, (1, 0): psibar, (1, 1): M.D},
    )
    labels = tuple(f"L:{s}" for s in L.labels) + tuple(f"M:{s}" for s in M.labels)
    c = UngradedComplex(labels, D)
    sq = multiply(D, D)
    for _, j in sq.nonzero():
        raise InvalidComplexError(f"splice differential squares to nonzero on {labels[j]!r}", witness=labels[j])
    return c


# reports


@dataclass
class HomologyReport:
    method: str
    input: str
    p: int | None = None
    q: int | None = None
    n: int | None = None
    space_dims: dict[int, int] = field(default_factory=dict)
    homology_dims: dict[int, int] = field(default_factory=dict)
    total: int = 0
    ranks: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        # elapsed is left out so identical runs serialize identically
        out = {
            "input": self.input,
            "method": self.method,
            "p": self.p,
            "q": self.q,
            "space_dims": {str(k): v for k, v in sorted(self.space_dims.items(), reverse=True)},
            "homology_dims": {str(k): v for k, v in sorted(self.homology_dims.items(), reverse=True)},
            "total": self.total,
            "ranks": list(self.ranks),
            "notes": list(self.notes),
        }
        if self.n is not None:
            out["n"] = self.n
        return out


def _graded_report(method, ks, c: ChainComplex, p, q, n, notes, start) -> HomologyReport:
    tiers = (2, 1, 0)
    h = homology_dims(c)
    return HomologyReport(
        method=method,
        input=ks.name,
        p=p,
        q=q,
        n=n,
        space_dims={k: c.dim(k) for k in tiers},
        homology_dims={k: h.get(k, 0) for k in tiers},
        total=sum(h.values()),
        ranks=[rank(c.d(2)), rank(c.d(1))],
        notes=notes,
        elapsed=time.perf_counter() - start,
    )


def surgery_report(ks: KnotSystem, slope: SurgerySlope, method: str = "rational") -> HomologyReport:
    start = time.perf_counter()
    if method == "rational":
        c = build_rational(ks, slope)
        return _graded_report(method, ks, c, slope.p, slope.q, None, [NOTE_PSIBAR, NOTE_HOMOLOGY_LEVEL], start)
    if method == "zigzag":
        if slope.q != 1:
            raise ValueError("zigzag method needs q = 1")
        c = build_zigzag(ks, slope.p)
        return _graded_report(
            method, ks, c, slope.p, slope.q, slope.p, [NOTE_ARROWS, NOTE_HOMOLOGY_LEVEL], start
        )
    if method == "splice":
        if slope.q != 1:
            raise ValueError("splice method needs q = 1")
        c = build_splice(bordered_from_knotsys(ks), build_model(slope.p).bordered)
        r = rank(c.D)
        return HomologyReport(
            method=method,
            input=ks.name,
            p=slope.p,
            q=slope.q,
            n=slope.p,
            space_dims={0: c.dim},
            homology_dims={0: c.dim - 2 * r},
            total=c.dim - 2 * r,
            ranks=[r],
            notes=["splice complex is ungraded; all dimensions reported under grade 0"],
            elapsed=time.perf_counter() - start,
        )
    raise ValueError(f"unknown method {method!r}")


@dataclass
class Comparison:
    input: str
    n: int
    rational_total: int
    splice_total: int
    rational_trace: list[tuple[str, str]]
    splice_trace: list[tuple[str, str]]

    @property
    def difference(self) -> int:
        return self.splice_total - self.rational_total

    @property
    def agree(self) -> bool:
        return self.difference == 0

    def to_dict(self, traces: bool = True) -> dict[str, Any]:
        out = {
            "input": self.input,
            "n": self.n,
            "rational_total": self.rational_total,
            "splice_total": self.splice_total,
            "difference": self.difference,
        }
        if traces:
            out["rational_trace"] = [list(t) for t in self.rational_trace]
            out["splice_trace"] = [list(t) for t in self.splice_trace]
        return out


def compare_methods(ks: KnotSystem, n: int) -> Comparison:
    """Integer n-surgery computed by the rational formula (q = 1) and by splicing
    with model(n).  Agreement is recorded, not enforced.
    """
    rational = build_rational(ks, SurgerySlope(n, 1))
    splice = build_splice(bordered_from_knotsys(ks), build_model(n).bordered)
    r_reduced, r_trace = reduce_with_trace(rational)
    s_reduced, s_trace = reduce_with_trace(splice)
    r_total = sum(homology_dims(rational).values())
    s_total = ungraded_homology(splice)
    if r_reduced.total_dim != r_total or s_reduced.dim != s_total:
        raise RuntimeError("cancellation and rank computations disagree")
    return Comparison(ks.name, n, r_total, s_total, r_trace, s_trace)
