import random

from hypothesis import given, settings, strategies as st

from gfcomplete.matrix import IncompleteMatrix
from gfcomplete.params import comb_cover, covering_cols, covering_rows

from _fixtures import COVER_EXAMPLE, X, exhaustive_min_cover, random_matrix


def test_cover_example_values():
    assert covering_rows(COVER_EXAMPLE).value == 3
    assert covering_cols(COVER_EXAMPLE).value == 4
    w = comb_cover(COVER_EXAMPLE)
    assert w.value == 2
    assert w.rows == {2} and w.cols == {4}
    assert w.covers(COVER_EXAMPLE)


def test_complete_matrix_has_zero_parameters():
    M = IncompleteMatrix.zeros(3, 3, 2)
    assert (covering_rows(M).value, covering_cols(M).value, comb_cover(M).value) == (0, 0, 0)


def test_all_missing_2x2():
    M = IncompleteMatrix.all_missing(2, 2, 2)
    assert (covering_rows(M).value, covering_cols(M).value, comb_cover(M).value) == (2, 2, 2)


def test_prefers_rows_on_ties():
    M = IncompleteMatrix.from_rows([[X, 0], [0, 0]], 2)
    w = comb_cover(M)
    assert w.rows == {0} and not w.cols


def test_single_column_of_holes():
    M = IncompleteMatrix.from_rows([[X, 0], [X, 1], [X, 1]], 2)
    w = comb_cover(M)
    assert w.value == 1 and w.cols == {0}


def test_diagonal_needs_full_cover():
    M = IncompleteMatrix.from_rows([[X if i == j else 0 for j in range(5)] for i in range(5)], 3)
    assert comb_cover(M).value == 5


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5), st.integers(1, 5), st.data())
def test_comb_is_minimum(seed, m, n, data):
    k = data.draw(st.integers(0, m * n))
    M = random_matrix(random.Random(seed), 2, m, n, k)
    w = comb_cover(M)
    assert w.covers(M)
    assert w.value == exhaustive_min_cover(M)
    assert w.value <= min(covering_rows(M).value, covering_cols(M).value)
