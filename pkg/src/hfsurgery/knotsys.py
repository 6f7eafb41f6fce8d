"""Knot systems: three complexes ``C_inf, C_1, C_0`` with maps
``phi, phibar: C_inf -> C_1`` and ``psi, psibar: C_1 -> C_0``.

Also the bordered record ``(L, M, Psi1, Psi2, Psi3, Phi)`` consumed by the
splice construction, and the JSON file format for knot systems.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from .chain import (
    ChainComplex,
    ChainMap,
    UngradedComplex,
    homology_dims,
    mapping_cone,
    validate_complex,
)
from .f2linalg import (
    BitMatrix,
    DimensionError,
    column_space_equal,
    inverse,
    kernel_basis,
    multiply,
    rank,
)

SPACE_KEYS = ("h_inf", "h_one", "h_zero")
MAP_KEYS = ("phi", "phibar", "psi", "psibar")
LABEL_PREFIX = {"h_inf": "inf", "h_one": "one", "h_zero": "zero"}


class ParseError(ValueError):
    """Malformed knot-system file; the message names the offending field."""


class ShapeError(DimensionError):
    """Well-formed input whose matrix shapes or degrees are inconsistent."""


class ValidationFailed(ValueError):
    def __init__(self, report: ValidationReport):
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        super().__init__(f"knot system {report.name!r} fails: {failed}")
        self.report = report


@dataclass(frozen=True)
class KnotSystem:
    name: str
    c_inf: ChainComplex
    c_one: ChainComplex
    c_zero: ChainComplex
    phi: ChainMap
    phibar: ChainMap
    psi: ChainMap
    psibar: ChainMap

    def __post_init__(self):
        for key in ("phi", "phibar"):
            f = getattr(self, key)
            if f.source != self.c_inf or f.target != self.c_one or f.shift:
                raise ShapeError(f"{key} must be a degree-0 map c_inf -> c_one")
        for key in ("psi", "psibar"):
            f = getattr(self, key)
            if f.source != self.c_one or f.target != self.c_zero or f.shift:
                raise ShapeError(f"{key} must be a degree-0 map c_one -> c_zero")

    @classmethod
    def from_matrices(
        cls,
        name: str,
        dims: Sequence[int],
        maps: Mapping[str, Any],
        differentials: Mapping[str, Any] | None = None,
        gradings: Mapping[str, Sequence[int]] | None = None,
    ) -> KnotSystem:
        """Build from total matrices in the file convention.

        ``maps`` and ``differentials`` values may be BitMatrix or nested lists.
        ``gradings`` gives a non-decreasing grade per generator (default all 0).
        """
        differentials = differentials or {}
        gradings = gradings or {}
        spaces = {}
        for key, n in zip(SPACE_KEYS, dims):
            if n < 0:
                raise ShapeError(f"spaces.{key} is negative")
            grades = list(gradings.get(key, [0] * n))
            if len(grades) != n:
                raise ShapeError(f"gradings.{key} has {len(grades)} entries, expected {n}")
            if grades != sorted(grades):
                raise ShapeError(f"gradings.{key} must be non-decreasing")
            labels = [f"{LABEL_PREFIX[key]}{i}" for i in range(n)]
            d = _as_matrix(differentials.get(key), n, n, f"differentials.{key}")
            try:
                spaces[key] = ChainComplex.from_flat(labels, grades, d)
            except DimensionError as exc:
                raise ShapeError(f"differentials.{key}: {exc}") from None
        src_tgt = {
            "phi": ("h_inf", "h_one"),
            "phibar": ("h_inf", "h_one"),
            "psi": ("h_one", "h_zero"),
            "psibar": ("h_one", "h_zero"),
        }
        built = {}
        for key, (s, t) in src_tgt.items():
            if key not in maps:
                raise ShapeError(f"maps.{key} is missing")
            m = _as_matrix(maps[key], spaces[t].total_dim, spaces[s].total_dim, f"maps.{key}")
            try:
                built[key] = ChainMap.from_total(spaces[s], spaces[t], m)
            except DimensionError as exc:
                raise ShapeError(f"maps.{key}: {exc}") from None
        return cls(name, spaces["h_inf"], spaces["h_one"], spaces["h_zero"], **built)

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.c_inf.total_dim, self.c_one.total_dim, self.c_zero.total_dim)

    def is_homology_level(self) -> bool:
        return all(c.has_zero_differential() for c in (self.c_inf, self.c_one, self.c_zero))

    def matrix(self, key: str) -> BitMatrix:
        return getattr(self, key).total()


def _as_matrix(value, nrows: int, ncols: int, where: str) -> BitMatrix:
    if value is None:
        return BitMatrix.zeros(nrows, ncols)
    m = value if isinstance(value, BitMatrix) else BitMatrix.from_lists(value, ncols if not value else None)
    if m.shape != (nrows, ncols):
        raise ShapeError(f"{where} has shape {m.shape}, expected ({nrows}, {ncols})")
    return m


# validation


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class ValidationReport:
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _cone_total(f: ChainMap) -> int:
    return sum(homology_dims(mapping_cone(f)).values())


def validate(ks: KnotSystem) -> ValidationReport:
    """Run every hypothesis check on a knot system; failures are reported, not raised."""
    report = ValidationReport(ks.name)
    add = report.checks.append

    complexes_ok = True
    for key in ("c_inf", "c_one", "c_zero"):
        ok = validate_complex(getattr(ks, key))
        complexes_ok &= ok
        add(Check(f"{key}_d_squared_zero", ok))
    maps_ok = True
    for key in MAP_KEYS:
        ok = getattr(ks, key).is_chain_map()
        maps_ok &= ok
        add(Check(f"{key}_is_chain_map", ok))

    for name, outer, inner in (("psibar_phi_zero", "psibar", "phi"), ("psi_phibar_zero", "psi", "phibar")):
        comp = multiply(ks.matrix(outer), ks.matrix(inner))
        add(Check(name, comp.is_zero(), None if comp.is_zero() else comp.to_lists()))

    if ks.is_homology_level():
        for name, first, second in (("exact_phi_psibar", "phi", "psibar"), ("exact_phibar_psi", "phibar", "psi")):
            image = ks.matrix(first)
            ker = kernel_basis(ks.matrix(second))
            ok = column_space_equal(image, ker)
            witness = None if ok else {"rank_image": rank(image), "dim_kernel": ker.ncols}
            add(Check(name, ok, witness))

    if complexes_ok and maps_ok:
        h_inf = sum(homology_dims(ks.c_inf).values())
        h_zero = sum(homology_dims(ks.c_zero).values())
        for key, expected in (("phi", h_zero), ("phibar", h_zero), ("psi", h_inf), ("psibar", h_inf)):
            got = _cone_total(getattr(ks, key))
            add(Check(f"cone_{key}_dim", got == expected, None if got == expected else [got, expected]))
    return report


# bordered systems


@dataclass(frozen=True)
class BorderedSystem:
    """``Psi1, Psi2, Psi3: L -> M`` and ``Phi: M -> L`` on ungraded complexes.

    Graded complexes and chain maps are accepted and flattened.
    """

    L: UngradedComplex
    M: UngradedComplex
    psi1: BitMatrix
    psi2: BitMatrix
    psi3: BitMatrix
    phi: BitMatrix

    def __post_init__(self):
        for key in ("L", "M"):
            c = getattr(self, key)
            if isinstance(c, ChainComplex):
                object.__setattr__(self, key, c.flatten())
        for key in ("psi1", "psi2", "psi3", "phi"):
            f = getattr(self, key)
            if isinstance(f, ChainMap):
                object.__setattr__(self, key, f.total())
        for key in ("psi1", "psi2", "psi3"):
            if getattr(self, key).shape != (self.M.dim, self.L.dim):
                raise ShapeError(f"{key} must have shape ({self.M.dim}, {self.L.dim})")
        if self.phi.shape != (self.L.dim, self.M.dim):
            raise ShapeError(f"phi must have shape ({self.L.dim}, {self.M.dim})")

    def failures(self) -> list[str]:
        out = []
        if not validate_complex(self.L):
            out.append("L: d^2 != 0")
        if not validate_complex(self.M):
            out.append("M: d^2 != 0")
        dL, dM = self.L.D, self.M.D
        for key in ("psi1", "psi2", "psi3"):
            f = getattr(self, key)
            if multiply(dM, f) != multiply(f, dL):
                out.append(f"{key} is not a chain map")
        if multiply(dL, self.phi) != multiply(self.phi, dM):
            out.append("phi is not a chain map")
        if multiply(self.psi2, multiply(self.phi, self.psi1)) != self.psi3:
            out.append("psi2 . phi . psi1 != psi3")
        return out

    def is_valid(self) -> bool:
        return not self.failures()


def bordered_from_knotsys(ks: KnotSystem) -> BorderedSystem:
    """``L = cone(phi)``, ``M = cone(psi)``; Phi is the identity on the C_1 parts,
    Psi1 is phibar out of the C_inf part of L, Psi2 is psibar out of the C_1
    part of L, and Psi3 = Psi2 . Phi . Psi1.
    """
    report = validate(ks)
    if not report.passed:
        raise ValidationFailed(report)
    L = mapping_cone(ks.phi).flatten()
    M = mapping_cone(ks.psi).flatten()
    li = {lab: i for i, lab in enumerate(L.labels)}
    mi = {lab: i for i, lab in enumerate(M.labels)}
    inf_labels = ks.c_inf.space.flat_labels()
    one_labels = ks.c_one.space.flat_labels()
    zero_labels = ks.c_zero.space.flat_labels()

    def embed(m: BitMatrix, rows, row_labels, cols, col_labels, nrows, ncols) -> BitMatrix:
        out = [0] * nrows
        for i, j in m.nonzero():
            out[rows[row_labels[i]]] |= 1 << cols[col_labels[j]]
        return BitMatrix(nrows, ncols, out)

    eye = BitMatrix.identity(len(one_labels))
    phi = embed(eye, li, one_labels, mi, one_labels, L.dim, M.dim)
    psi1 = embed(ks.matrix("phibar"), mi, one_labels, li, inf_labels, M.dim, L.dim)
    psi2 = embed(ks.matrix("psibar"), mi, zero_labels, li, one_labels, M.dim, L.dim)
    psi3 = multiply(psi2, multiply(phi, psi1))
    b = BorderedSystem(L, M, psi1, psi2, psi3, phi)
    problems = b.failures()
    if problems:
        raise ValueError(f"derived bordered system is inconsistent: {problems}")
    return b


# serialization


def to_dict(ks: KnotSystem) -> dict:
    out: dict[str, Any] = {
        "name": ks.name,
        "spaces": dict(zip(SPACE_KEYS, ks.dims)),
        "maps": {key: ks.matrix(key).to_lists() for key in MAP_KEYS},
    }
    complexes = dict(zip(SPACE_KEYS, (ks.c_inf, ks.c_one, ks.c_zero)))
    if not ks.is_homology_level():
        out["differentials"] = {k: c.flatten().D.to_lists() for k, c in complexes.items()}
    gradings = {k: [g for g, n in c.dims.items() for _ in range(n)] for k, c in complexes.items()}
    if any(any(v) for v in gradings.values()):
        out["gradings"] = gradings
    return out


def _parse_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an integer, got {value!r}")
    return value


def _parse_matrix(value, where: str) -> list[list[int]]:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected a list of rows")
    width = None
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise ParseError(f"{where}[{i}]: expected a list of 0/1 entries")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"{where}[{i}]: row has {len(row)} entries, row 0 has {width}")
        for j, x in enumerate(row):
            if isinstance(x, bool) or x not in (0, 1):
                raise ParseError(f"{where}[{i}][{j}]: entry {x!r} is not 0 or 1")
    return value


def from_dict(data: Any) -> KnotSystem:
    if not isinstance(data, dict):
        raise ParseError("top level: expected a JSON object")
    name = data.get("name")
    if not isinstance(name, str):
        raise ParseError("name: expected a string")
    spaces = data.get("spaces")
    if not isinstance(spaces, dict):
        raise ParseError("spaces: expected an object")
    dims = []
    for key in SPACE_KEYS:
        if key not in spaces:
            raise ParseError(f"spaces.{key}: missing")
        dims.append(_parse_int(spaces[key], f"spaces.{key}"))
    maps = data.get("maps")
    if not isinstance(maps, dict):
        raise ParseError("maps: expected an object")
    parsed_maps = {}
    for key in MAP_KEYS:
        if key not in maps:
            raise ParseError(f"maps.{key}: missing")
        parsed_maps[key] = _parse_matrix(maps[key], f"maps.{key}")
    differentials = {}
    for key, value in (data.get("differentials") or {}).items():
        if key not in SPACE_KEYS:
            raise ParseError(f"differentials.{key}: unknown space")
        differentials[key] = _parse_matrix(value, f"differentials.{key}")
    gradings = {}
    for key, value in (data.get("gradings") or {}).items():
        if key not in SPACE_KEYS or not isinstance(value, list):
            raise ParseError(f"gradings.{key}: expected a list of integers for a known space")
        gradings[key] = [_parse_int(g, f"gradings.{key}[{i}]") for i, g in enumerate(value)]
    return KnotSystem.from_matrices(name, dims, parsed_maps, differentials, gradings)


def dumps(ks: KnotSystem) -> str:
    return json.dumps(to_dict(ks), indent=2, sort_keys=True) + "\n"


def save(ks: KnotSystem, path) -> None:
    Path(path).write_text(dumps(ks), encoding="utf-8")


def loads(text: str, source: str = "<string>") -> KnotSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return from_dict(data)
    except ParseError as exc:
        raise ParseError(f"{source}: {exc}") from None


def load(path) -> KnotSystem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 ({exc.reason})") from None
    return loads(text, str(path))


# datasets


def _unknot_a() -> KnotSystem:
    return KnotSystem.from_matrices(
        "unknot-A",
        (1, 1, 0),
        {"phi": [[1]], "phibar": [[1]], "psi": BitMatrix.zeros(0, 1), "psibar": BitMatrix.zeros(0, 1)},
    )


def _unknot_b() -> KnotSystem:
    return KnotSystem.from_matrices(
        "unknot-B",
        (1, 1, 2),
        {"phi": [[0]], "phibar": [[0]], "psi": [[1], [0]], "psibar": [[0], [1]]},
    )


BUILTINS = {"unknot-A": _unknot_a, "unknot-B": _unknot_b}


def builtin(name: str) -> KnotSystem:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ValueError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None


def feasible_rank(dims: Sequence[int]) -> int:
    """Common rank of phi and phibar forced by exactness and the cone conditions.

    Raises ValueError naming the violated constraint when no system exists.
    """
    a, b, c = dims
    if min(a, b, c) < 0:
        raise ValueError(f"dims must be non-negative, got {tuple(dims)}")
    if (a + b - c) % 2:
        raise ValueError(f"a + b - c = {a + b - c} must be even")
    r = (a + b - c) // 2
    if r < 0:
        raise ValueError(f"r = (a + b - c)/2 = {r} must be >= 0")
    if r > min(a, b):
        raise ValueError(f"r = {r} must be <= min(a, b) = {min(a, b)}")
    return r


def random_invertible(n: int, rng: random.Random) -> BitMatrix:
    while True:
        m = BitMatrix(n, n, (rng.getrandbits(n) if n else 0 for _ in range(n)))
        if rank(m) == n:
            return m


def _random_exact_pair(a: int, b: int, c: int, r: int, rng: random.Random) -> tuple[BitMatrix, BitMatrix]:
    # normal form: f includes the first r coordinates, g kills exactly those
    f0 = BitMatrix(b, a, [(1 << i) if i < r else 0 for i in range(b)])
    g0 = BitMatrix(c, b, [(1 << (r + k)) if k < b - r else 0 for k in range(c)])
    A = random_invertible(a, rng)
    B = random_invertible(b, rng)
    C = random_invertible(c, rng)
    f = multiply(B, multiply(f0, A))
    g = multiply(C, multiply(g0, inverse(B)))
    return f, g


def random_valid(seed: int, dims: Sequence[int], name: str | None = None) -> KnotSystem:
    """Random homology-level knot system with the given ``(h_inf, h_one, h_zero)``."""
    a, b, c = dims
    r = feasible_rank(dims)
    rng = random.Random(seed)
    phi, psibar = _random_exact_pair(a, b, c, r, rng)
    phibar, psi = _random_exact_pair(a, b, c, r, rng)
    return KnotSystem.from_matrices(
        name or f"random-{seed}-{a},{b},{c}",
        dims,
        {"phi": phi, "phibar": phibar, "psi": psi, "psibar": psibar},
    )


def feasible_dims(limit: int) -> list[tuple[int, int, int]]:
    out = []
    for a in range(limit + 1):
        for b in range(limit + 1):
            for c in range(limit + 1):
                try:
                    feasible_rank((a, b, c))
                except ValueError:
                    continue
                out.append((a, b, c))
    return out
