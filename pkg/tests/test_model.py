import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from confband.model import (
    BandError,
    SeriesMatrix,
    area_score,
    derive_seed,
    envelope,
    reg_score,
    width_score,
)
from confband.oracle import exact_regband


def test_envelope_of_seed_and_lower_neighbour(four_constants):
    band = envelope(four_constants, [0, 1])
    assert band.lower.tolist() == [-1.0]
    assert band.upper.tolist() == [0.0]
    assert band.area == 1.0


def test_singleton_envelope_is_flat(four_constants):
    band = envelope(four_constants, [0])
    assert band.lower.tolist() == band.upper.tolist() == [0.0]
    assert band.area == 0.0 and band.width == 0.0


def test_two_series_envelope(two_series):
    band = envelope(two_series, [0, 1])
    assert band.lower.tolist() == [0.0, 0.0]
    assert band.upper.tolist() == [1.0, 2.0]
    assert band.area == 3.0 and band.width == 2.0


def test_scores(four_constants, two_series):
    assert area_score(four_constants, [0, 2, 3]) == 2.0
    assert area_score(four_constants, [0, 1, 2, 3]) == 3.0
    assert width_score(two_series, [0, 1]) == 2.0


def test_reg_score_examples(four_constants, two_series):
    assert reg_score(four_constants, [0], 0.9) == pytest.approx(-0.9)
    assert reg_score(four_constants, [0, 1, 2, 3], 1.2) == pytest.approx(-1.8)
    assert reg_score(two_series, [0, 1], 4) == -5.0


def test_reg_score_example_is_the_minimum(four_constants):
    best = exact_regband(four_constants, 1.2)
    assert reg_score(four_constants, best.members, 1.2) == pytest.approx(-1.8)


@pytest.mark.parametrize("members, message", [([], "empty band"), ([1, 2], "seed not in band")])
def test_envelope_errors(four_constants, members, message):
    with pytest.raises(BandError, match=message):
        envelope(four_constants, members)


def test_member_out_of_range(four_constants):
    with pytest.raises(BandError):
        envelope(four_constants, [0, 7])


@pytest.mark.parametrize("alpha", [0, -1.0, float("nan")])
def test_invalid_alpha(four_constants, alpha):
    with pytest.raises(BandError, match="invalid alpha"):
        reg_score(four_constants, [0], alpha)


def test_members_are_sorted_and_deduplicated(four_constants):
    assert envelope(four_constants, [3, 0, 3]).members == (0, 3)


def test_matrix_validation():
    with pytest.raises(BandError):
        SeriesMatrix(np.array([[0.0, np.nan]]))
    with pytest.raises(BandError):
        SeriesMatrix(np.zeros((0, 3)))
    with pytest.raises(BandError):
        SeriesMatrix(np.zeros((2, 2)), seed_index=2)
    with pytest.raises(BandError):
        SeriesMatrix(np.zeros((2, 2)), labels=["a"])
    with pytest.raises(ValueError):
        SeriesMatrix([[1.0, 2.0], [3.0]])


def test_matrix_is_read_only():
    values = np.zeros((2, 2))
    matrix = SeriesMatrix(values)
    values[0, 0] = 5.0
    assert matrix.values[0, 0] == 0.0
    with pytest.raises(ValueError):
        matrix.values[0, 0] = 1.0


def test_one_dimensional_input_is_a_column():
    matrix = SeriesMatrix([0.0, -1.0, 2.0])
    assert (matrix.n, matrix.m) == (3, 1)


def test_labels():
    matrix = SeriesMatrix(np.zeros((2, 1)), labels=["a", "b"])
    assert matrix.label(1) == "b"
    assert SeriesMatrix(np.zeros((2, 1))).label(1) == "1"


def test_median_seed_is_lower_median():
    matrix = derive_seed([[0.0], [-1.0], [2.0], [2.0]], "median")
    assert matrix.n == 5 and matrix.seed_index == 4
    assert matrix.seed.tolist() == [0.0]


def test_median_seed_odd_count_and_label():
    matrix = derive_seed([[3.0, 1.0], [1.0, 5.0], [2.0, 4.0]], "median", labels=["a", "b", "c"])
    assert matrix.seed.tolist() == [2.0, 4.0]
    assert matrix.label(matrix.seed_index) == "median"


def test_mean_seed():
    assert derive_seed([[1.5, -2.0]], "mean").seed.tolist() == [1.5, -2.0]
    assert derive_seed([[1.0], [3.0]], "mean").seed.tolist() == [2.0]


def test_unknown_seed_policy():
    with pytest.raises(BandError):
        derive_seed([[1.0]], "mode")


small_int_matrices = st.integers(1, 6).flatmap(
    lambda m: arrays(np.int64, st.tuples(st.integers(2, 8), st.just(m)), elements=st.integers(-5, 5))
)


@given(small_int_matrices, st.data())
def test_area_is_submodular(values, data):
    matrix = SeriesMatrix(values.astype(float))
    n = matrix.n
    t = data.draw(st.integers(0, n - 1))
    big = data.draw(st.sets(st.integers(1, n - 1))) | {0}
    small = data.draw(st.sets(st.sampled_from(sorted(big)))) | {0}
    gain_big = area_score(matrix, big | {t}) - area_score(matrix, big)
    gain_small = area_score(matrix, small | {t}) - area_score(matrix, small)
    assert gain_big <= gain_small


@given(small_int_matrices, st.data())
def test_scores_are_monotone(values, data):
    matrix = SeriesMatrix(values.astype(float))
    members = data.draw(st.sets(st.integers(1, matrix.n - 1))) | {0}
    extra = data.draw(st.integers(0, matrix.n - 1))
    assert area_score(matrix, members | {extra}) >= area_score(matrix, members)
    assert width_score(matrix, members | {extra}) >= width_score(matrix, members)


@given(small_int_matrices, st.data())
def test_envelope_ignores_order_and_non_members(values, data):
    matrix = SeriesMatrix(values.astype(float))
    members = sorted(data.draw(st.sets(st.integers(1, matrix.n - 1))) | {0})
    shuffled = data.draw(st.permutations(members))
    band = envelope(matrix, shuffled)
    assert band.members == tuple(members)
    others = [i for i in range(matrix.n) if i not in members]
    perturbed = matrix.values.copy()
    perturbed[others] += 100.0
    again = envelope(SeriesMatrix(perturbed), members)
    assert np.array_equal(band.lower, again.lower) and np.array_equal(band.upper, again.upper)
    assert area_score(matrix, [0]) == width_score(matrix, [0]) == 0.0
