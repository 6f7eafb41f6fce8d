"""Acceptance criteria 1-8, each under its runtime limit.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per
criterion (and the rational-vs-splice comparison table).
"""

import itertools
import json
import random
import time
from contextlib import contextmanager
from math import gcd

from hfsurgery.chain import (
    ChainComplex,
    homology_dims,
    reduce,
    ungraded_homology,
    validate_complex,
)
from hfsurgery.cli import main
from hfsurgery.f2linalg import BitMatrix, is_zero, kernel_basis, multiply, rank
from hfsurgery.knotsys import BUILTINS, builtin, bordered_from_knotsys, dumps, load, loads, save, validate
from hfsurgery.lensmodel import build_model
from hfsurgery.surgery import SurgerySlope, build_rational, build_splice, build_zigzag, compare_methods

from fuzz import as_array, knot_corpus, random_graded_complex, random_matrix, random_ungraded_complex
from oracles import naive_rank, np_rank


@contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = limit is None or elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        bound = f" / {limit:.0f}s" if limit else ""
        print(f"\ncriterion {number} {status}: {title} ({elapsed:.2f}s{bound})")
    if limit is not None:
        assert elapsed < limit, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


def test_criterion_1_linear_algebra():
    with criterion(1, "GF(2) rank vs naive oracle, rank-nullity", 5):
        for nrows in range(5):
            for ncols in range(5):
                row_mask = (1 << ncols) - 1
                for bits in range(1 << (nrows * ncols)):
                    rows = [(bits >> (i * ncols)) & row_mask for i in range(nrows)]
                    entries = [[(row >> j) & 1 for j in range(ncols)] for row in rows]
                    m = BitMatrix(nrows, ncols, rows)
                    r = rank(m)
                    assert r == naive_rank(entries)
                    assert kernel_basis(m).ncols == ncols - r
        rng = random.Random(1)
        for _ in range(1000):
            m = random_matrix(rng, rng.randint(0, 64), rng.randint(0, 64), rng.choice([0.05, 0.5, 0.9]))
            r = rank(m)
            assert r == np_rank(as_array(m))
            k = kernel_basis(m)
            assert k.ncols == m.ncols - r and is_zero(multiply(m, k))


def test_criterion_2_models():
    with criterion(2, "model complexes n <= 50", 5):
        for n in range(1, 51):
            b = build_model(n).bordered
            assert b.L.dim == 2 * n - 1 and b.M.dim == 3 * n - 2
            assert is_zero(multiply(b.L.D, b.L.D)) and is_zero(multiply(b.M.D, b.M.D))
            assert (ungraded_homology(b.L), ungraded_homology(b.M)) == (1, n)
            assert b.failures() == []
            assert multiply(b.psi2, multiply(b.phi, b.psi1)) == b.psi3


def test_criterion_3_reduction():
    with criterion(3, "reduce preserves homology on 400 fuzzed complexes", 10):
        for seed in range(200):
            c, expected = random_graded_complex(seed)
            assert validate_complex(c)
            r = reduce(c)
            assert isinstance(r, ChainComplex) and r.has_zero_differential()
            assert {k: v for k, v in r.dims.items() if v} == {k: v for k, v in expected.items() if v}
            assert {k: v for k, v in homology_dims(c).items() if v} == r.dims
        for seed in range(200):
            u, expected = random_ungraded_complex(seed)
            r = reduce(u)
            assert r.D.is_zero() and r.dim == expected == ungraded_homology(u)


def test_criterion_4_rational_builder():
    corpus = knot_corpus(100)
    slopes = [(p, q) for p in range(1, 9) for q in range(1, 9) if gcd(p, q) == 1]
    with criterion(4, f"rational builder on {len(corpus)} systems x {len(slopes)} slopes", 30):
        for ks in corpus:
            a, b, c0 = ks.dims
            for p, q in slopes:
                c = build_rational(ks, SurgerySlope(p, q))
                assert (c.dim(2), c.dim(1), c.dim(0)) == (q * a, (p + q) * b, p * c0)
                assert validate_complex(c)
                assert sum(homology_dims(c).values()) % 2 == c.total_dim % 2


def test_criterion_5_zigzag_equals_rational():
    corpus = knot_corpus(100)
    with criterion(5, "zig-zag vs rational(n, 1), n <= 10", 30):
        for ks in corpus:
            for n in range(1, 11):
                assert homology_dims(build_zigzag(ks, n)) == homology_dims(build_rational(ks, SurgerySlope(n, 1)))


def test_criterion_6_unknot_closed_forms():
    with criterion(6, "unknot closed forms, p, q <= 12", 5):
        a, b = builtin("unknot-A"), builtin("unknot-B")
        assert validate(a).passed and validate(b).passed
        for p, q in itertools.product(range(1, 13), repeat=2):
            if gcd(p, q) != 1:
                continue
            slope = SurgerySlope(p, q)
            assert sum(homology_dims(build_rational(a, slope)).values()) == p
            assert sum(homology_dims(build_rational(b, slope)).values()) == (p if q <= p else 2 * q - p)


def test_criterion_7_splice():
    with criterion(7, "splice square-zero and model(1) x model(1)", 60):
        for ks in knot_corpus(20):
            b = bordered_from_knotsys(ks)
            for n in range(1, 6):
                build_splice(b, build_model(n).bordered)  # raises on D^2 != 0
        for m in range(1, 7):
            for n in range(1, 7):
                build_splice(build_model(m).bordered, build_model(n).bordered)
        assert ungraded_homology(build_splice(build_model(1).bordered, build_model(1).bordered)) == 2
        print("\n  input      n  rational  splice  diff")
        for name in ("unknot-A", "unknot-B"):
            for n in range(1, 5):
                c = compare_methods(builtin(name), n)
                print(f"  {name:9} {n:2} {c.rational_total:9} {c.splice_total:7} {c.difference:5}")


def test_criterion_8_round_trip_and_determinism(tmp_path):
    with criterion(8, "round trip on builtins, byte-identical JSON", None):
        for name in BUILTINS:
            ks = builtin(name)
            path = tmp_path / f"{name}.json"
            save(ks, path)
            assert load(path) == ks
            assert loads(dumps(ks)) == ks
        runs = [
            ["surgery", "@unknot-B", "--p", "3", "--q", "2"],
            ["sweep", "@unknot-A", "--pmax", "4", "--qmax", "4"],
            ["compare", "@unknot-B", "--nmax", "3", "--traces"],
            ["validate", "@unknot-A"],
        ]
        for i, argv in enumerate(runs):
            outputs = []
            for attempt in range(2):
                dest = tmp_path / f"run{i}-{attempt}.json"
                assert main(argv + ["--json", str(dest)]) == 0
                outputs.append(dest.read_bytes())
            assert outputs[0] == outputs[1]
            json.loads(outputs[0])
