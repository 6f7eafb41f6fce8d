import numpy as np
import pytest

from hfsurgery.chain import UngradedComplex, reduce, ungraded_homology
from hfsurgery.lensmodel import build_model, dump, l_labels, m_labels, model_homology

from fuzz import as_array
from oracles import np_matmul, np_rank


def dense_model(n):
    """L(n), M(n) and the four maps as numpy arrays, indexed by hand.

    L order: r_1..r_{n-1}, s_1..s_{n-1}, p.  M order: x.., y.., z_1..z_n.
    """
    k = n - 1
    r = lambda i: i - 1
    s = lambda i: k + i - 1
    p = 2 * k
    x = lambda i: i - 1
    y = lambda i: k + i - 1
    z = lambda i: 2 * k + i - 1
    nl, nm = 2 * k + 1, 3 * k + 1
    dl = np.zeros((nl, nl), dtype=np.int64)
    dm = np.zeros((nm, nm), dtype=np.int64)
    psi1 = np.zeros((nm, nl), dtype=np.int64)
    psi2 = np.zeros((nm, nl), dtype=np.int64)
    psi3 = np.zeros((nm, nl), dtype=np.int64)
    phi = np.zeros((nl, nm), dtype=np.int64)
    for i in range(1, n - 1):
        dl[r(i), s(i + 1)] = 1
    if n > 1:
        dl[r(n - 1), p] = 1
    for i in range(1, n):
        dm[y(i), z(i + 1)] = 1
        psi1[x(i), s(i)] = 1
        psi2[z(i), s(i)] = 1
        psi2[y(i), r(i)] = 1
        psi3[y(i), s(i)] = 1
        phi[r(i), x(i)] = 1
    psi1[z(1), p] = 1
    psi2[z(n), p] ^= 1
    return dl, dm, psi1, psi2, psi3, phi


def test_n1():
    model = build_model(1)
    assert model.L.labels == ("p",) and model.M.labels == ("z1",)
    b = model.bordered
    assert b.L.D.is_zero() and b.M.D.is_zero()
    assert b.psi1.to_lists() == [[1]] and b.psi2.to_lists() == [[1]]
    assert b.phi.is_zero() and b.psi3.is_zero()
    assert b.is_valid()


def test_n3_sizes_and_homology():
    model = build_model(3)
    assert model.L.dim == 5 and model.M.dim == 7
    assert model.L.labels == ("r1", "r2", "s1", "s2", "p")
    assert ungraded_homology(model.L) == 1
    assert ungraded_homology(model.M) == 3


@pytest.mark.parametrize("n, expected", [(1, (1, 1)), (2, (1, 2)), (50, (1, 50))])
def test_model_homology(n, expected):
    assert model_homology(n) == expected


def test_labels():
    assert l_labels(2) == ["r1", "s1", "p"]
    assert m_labels(2) == ["x1", "y1", "z1", "z2"]


@pytest.mark.parametrize("n", [0, -3])
def test_rejects_nonpositive(n):
    with pytest.raises(ValueError):
        build_model(n)


@pytest.mark.parametrize("n", range(1, 51))
def test_model_matches_dense_oracle(n):
    model = build_model(n)
    b = model.bordered
    dl, dm, psi1, psi2, psi3, phi = dense_model(n)
    for ours, theirs in [(b.L.D, dl), (b.M.D, dm), (b.psi1, psi1), (b.psi2, psi2), (b.psi3, psi3), (b.phi, phi)]:
        assert as_array(ours).tolist() == theirs.tolist()
    assert model.L.dim == 2 * n - 1 and model.M.dim == 3 * n - 2
    assert not np_matmul(dl, dl).any() and not np_matmul(dm, dm).any()
    assert (2 * n - 1) - 2 * np_rank(dl) == 1
    assert (3 * n - 2) - 2 * np_rank(dm) == n
    assert b.failures() == []


@pytest.mark.parametrize("n", range(1, 12))
def test_reduce_l_leaves_s1(n):
    reduced = reduce(build_model(n).L)
    assert reduced.labels == (("p",) if n == 1 else ("s1",))
    assert reduced.D.is_zero()


def test_reduce_m_keeps_z1_and_x():
    reduced = reduce(build_model(4).M)
    assert isinstance(reduced, UngradedComplex)
    assert reduced.labels == ("x1", "x2", "x3", "z1")


def test_dump():
    data = dump(build_model(2))
    assert data["n"] == 2
    assert data["L"]["generators"] == ["r1", "s1", "p"]
    assert data["L"]["differential"] == [[0, 0, 1], [0, 0, 0], [0, 0, 0]]
    assert data["maps"]["phi"] == [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert set(data["maps"]) == {"psi1", "psi2", "psi3", "phi"}
