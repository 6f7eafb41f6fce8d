"""The solid-torus model complexes L(n), M(n) and their four maps.

L(n) has generators r_1..r_{n-1}, s_1..s_{n-1}, p with
``l(s_{i+1}) = r_i`` (i = 1..n-2) and ``l(p) = r_{n-1}``.
M(n) has generators x_1..x_{n-1}, y_1..y_{n-1}, z_1..z_n with
``m(z_{i+1}) = y_i`` (i = 1..n-1).

Maps (zero on unlisted generators):
    Psi1: s_i -> x_i, p -> z_1
    Psi2: s_i -> z_i, r_i -> y_i, p -> z_n
    Psi3: s_i -> y_i
    Phi:  x_i -> r_i

For n = 1 only p and z_1 exist and l(p) has no target, so it is zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain import UngradedComplex, ungraded_homology
from .f2linalg import BitMatrix
from .knotsys import BorderedSystem


def l_labels(n: int) -> list[str]:
    return [f"r{i}" for i in range(1, n)] + [f"s{i}" for i in range(1, n)] + ["p"]


def m_labels(n: int) -> list[str]:
    return [f"x{i}" for i in range(1, n)] + [f"y{i}" for i in range(1, n)] + [f"z{i}" for i in range(1, n + 1)]


def _matrix(arrows, source: list[str], target: list[str]) -> BitMatrix:
    si = {lab: j for j, lab in enumerate(source)}
    ti = {lab: i for i, lab in enumerate(target)}
    rows = [0] * len(target)
    for a, b in arrows:
        rows[ti[b]] ^= 1 << si[a]
    return BitMatrix(len(target), len(source), rows)


@dataclass(frozen=True)
class ModelSystem:
    n: int
    bordered: BorderedSystem

    @property
    def L(self) -> UngradedComplex:
        return self.bordered.L

    @property
    def M(self) -> UngradedComplex:
        return self.bordered.M


def build_model(n: int) -> ModelSystem:
    if n < 1:
        raise ValueError(f"model needs n >= 1, got {n}")
    Lg, Mg = l_labels(n), m_labels(n)
    ell = [(f"s{i + 1}", f"r{i}") for i in range(1, n - 1)]
    if n > 1:
        ell.append(("p", f"r{n - 1}"))
    m = [(f"z{i + 1}", f"y{i}") for i in range(1, n)]
    idx = range(1, n)
    psi1 = [(f"s{i}", f"x{i}") for i in idx] + [("p", "z1")]
    psi2 = [(f"s{i}", f"z{i}") for i in idx] + [(f"r{i}", f"y{i}") for i in idx] + [("p", f"z{n}")]
    psi3 = [(f"s{i}", f"y{i}") for i in idx]
    phi = [(f"x{i}", f"r{i}") for i in idx]
    b = BorderedSystem(
        UngradedComplex(tuple(Lg), _matrix(ell, Lg, Lg)),
        UngradedComplex(tuple(Mg), _matrix(m, Mg, Mg)),
        _matrix(psi1, Lg, Mg),
        _matrix(psi2, Lg, Mg),
        _matrix(psi3, Lg, Mg),
        _matrix(phi, Mg, Lg),
    )
    return ModelSystem(n, b)


def model_homology(n: int) -> tuple[int, int]:
    model = build_model(n)
    return ungraded_homology(model.L), ungraded_homology(model.M)


def dump(model: ModelSystem) -> dict:
    """Generators and matrices in the knot-system file convention."""
    b = model.bordered
    return {
        "n": model.n,
        "L": {"generators": list(b.L.labels), "differential": b.L.D.to_lists()},
        "M": {"generators": list(b.M.labels), "differential": b.M.D.to_lists()},
        "maps": {
            "psi1": b.psi1.to_lists(),
            "psi2": b.psi2.to_lists(),
            "psi3": b.psi3.to_lists(),
            "phi": b.phi.to_lists(),
        },
    }
