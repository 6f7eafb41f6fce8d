import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfsurgery.f2linalg import (
    BitMatrix,
    DimensionError,
    add,
    column_space_equal,
    inverse,
    is_zero,
    kernel_basis,
    kron,
    multiply,
    rank,
    rref,
)

from fuzz import as_array, random_matrix
from oracles import naive_rank, np_matmul


@st.composite
def matrices(draw, max_rows=12, max_cols=12, rows=None, cols=None):
    nrows = draw(st.integers(0, max_rows)) if rows is None else rows
    ncols = draw(st.integers(0, max_cols)) if cols is None else cols
    values = draw(st.lists(st.integers(0, (1 << ncols) - 1), min_size=nrows, max_size=nrows))
    return BitMatrix(nrows, ncols, values)


def is_rref(m: BitMatrix, pivots) -> bool:
    last = -1
    for row, pc in enumerate(pivots):
        if pc <= last or m[row, pc] != 1:
            return False
        if m.column(pc) != 1 << row:
            return False
        if m.rows[row] & ((1 << pc) - 1):
            return False
        last = pc
    return all(r == 0 for r in m.rows[len(pivots):])


def test_rank_trivial_cases():
    assert rank(BitMatrix.identity(3)) == 3
    assert rank(BitMatrix.zeros(2, 5)) == 0
    assert rank(BitMatrix.from_lists([[1, 1], [1, 1]])) == 1


def test_rank_matches_naive_on_random_6x6():
    rng = random.Random(6)
    for _ in range(200):
        m = random_matrix(rng, 6, 6)
        assert rank(m) == naive_rank(m.to_lists())


def test_empty_matrices_are_zero_maps():
    for shape in [(0, 0), (0, 4), (3, 0)]:
        m = BitMatrix.zeros(*shape)
        assert rank(m) == 0
        assert is_zero(m)
        assert kernel_basis(m).shape == (shape[1], shape[1])
        reduced, pivots, transform = rref(m)
        assert reduced == m and pivots == [] and transform == BitMatrix.identity(shape[0])
    assert multiply(BitMatrix.zeros(2, 0), BitMatrix.zeros(0, 3)) == BitMatrix.zeros(2, 3)


def test_rref_identity_and_zero():
    eye = BitMatrix.identity(4)
    assert rref(eye) == (eye, [0, 1, 2, 3], eye)
    z = BitMatrix.zeros(3, 5)
    assert rref(z) == (z, [], BitMatrix.identity(3))


def test_rref_tie_breaking_is_leftmost_then_topmost():
    m = BitMatrix.from_lists([[0, 1, 1], [1, 1, 0], [1, 0, 1]])
    reduced, pivots, transform = rref(m)
    assert pivots == [0, 1]
    assert reduced.to_lists() == [[1, 0, 1], [0, 1, 1], [0, 0, 0]]
    # row 1 is swapped up for column 0; row 0 then clears column 1 from it
    assert transform.to_lists() == [[1, 1, 0], [1, 0, 0], [1, 1, 1]]
    assert multiply(transform, m) == reduced


def test_from_lists_rejects_ragged_and_non_binary():
    with pytest.raises(DimensionError):
        BitMatrix.from_lists([[1, 0], [1]])
    with pytest.raises(ValueError):
        BitMatrix.from_lists([[2]])


def test_shape_errors():
    with pytest.raises(DimensionError):
        multiply(BitMatrix.zeros(2, 3), BitMatrix.zeros(2, 3))
    with pytest.raises(DimensionError):
        add(BitMatrix.zeros(2, 3), BitMatrix.zeros(3, 2))
    with pytest.raises(DimensionError):
        column_space_equal(BitMatrix.zeros(2, 1), BitMatrix.zeros(3, 1))


def test_column_space_equal():
    a = BitMatrix.from_lists([[1], [0]])
    assert column_space_equal(a, a)
    b = BitMatrix.from_lists([[1, 1], [1, 0]])
    c = BitMatrix.from_lists([[0, 1], [1, 1]])
    assert column_space_equal(b, c)
    assert not column_space_equal(a, BitMatrix.from_lists([[0], [1]]))
    # same rank, different spans
    assert not column_space_equal(BitMatrix.from_lists([[1], [1]]), a)


def test_inverse():
    rng = random.Random(3)
    for _ in range(50):
        m = random_matrix(rng, 5, 5)
        if rank(m) < 5:
            with pytest.raises(ValueError):
                inverse(m)
        else:
            assert multiply(inverse(m), m) == BitMatrix.identity(5)


def test_kron_matches_definition():
    a = BitMatrix.from_lists([[1, 0], [1, 1]])
    b = BitMatrix.from_lists([[0, 1, 1]])
    k = kron(a, b)
    assert k.shape == (2, 6)
    for i in range(2):
        for j in range(2):
            for l in range(3):
                assert k[i, j * 3 + l] == a[i, j] * b[0, l]


@given(matrices())
def test_multiply_identity_and_add_self(m):
    assert multiply(BitMatrix.identity(m.nrows), m) == m
    assert multiply(m, BitMatrix.identity(m.ncols)) == m
    assert is_zero(add(m, m))


@given(matrices(), st.data())
def test_multiply_matches_numpy(a, data):
    b = data.draw(matrices(rows=a.ncols))
    expected = np_matmul(as_array(a), as_array(b))
    assert as_array(multiply(a, b)).tolist() == expected.tolist()


@given(matrices())
def test_rank_transpose_and_oracle(m):
    assert rank(m) == rank(m.transpose())
    assert rank(m) == naive_rank(m.to_lists())
    assert 0 <= rank(m) <= min(m.shape)


@given(matrices())
def test_rank_nullity_and_kernel(m):
    k = kernel_basis(m)
    assert k.nrows == m.ncols
    assert k.ncols == m.ncols - rank(m)
    assert is_zero(multiply(m, k))
    assert rank(k) == k.ncols


@given(matrices())
def test_rref_contract(m):
    reduced, pivots, transform = rref(m)
    assert multiply(transform, m) == reduced
    assert rank(transform) == m.nrows
    assert is_rref(reduced, pivots)
    assert len(pivots) == rank(m)
    again, again_pivots, _ = rref(reduced)
    assert again == reduced and again_pivots == pivots


@settings(max_examples=50)
@given(matrices(max_rows=8, max_cols=8), st.data())
def test_rank_of_product_is_bounded(a, data):
    b = data.draw(matrices(rows=a.ncols, max_cols=8))
    assert rank(multiply(a, b)) <= min(rank(a), rank(b))


@given(matrices(max_rows=6, max_cols=6), matrices(max_rows=6, max_cols=6))
def test_kron_rank_multiplies(a, b):
    assert rank(kron(a, b)) == rank(a) * rank(b)
