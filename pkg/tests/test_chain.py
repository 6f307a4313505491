import numpy as np
import pytest

from confband.chain import delta_gap, enumerate_chain
from confband.model import BandError, SeriesMatrix
from confband.oracle import InstanceSpec, generate, subset_areas
from confband.regband import solve_regband

from _oracles import random_matrix, reference_chain


def test_delta_examples(four_constants, two_series):
    assert delta_gap(two_series) == 1.0
    assert delta_gap(four_constants) == 1.0
    assert delta_gap(SeriesMatrix(np.array([[0.0], [0.25], [1.0]]))) == 0.25


def test_delta_degenerate():
    with pytest.raises(BandError, match="degenerate data"):
        delta_gap(SeriesMatrix(np.ones((3, 2))))


def test_two_series_chain(two_series):
    chain = enumerate_chain(two_series)
    assert [b.members for b in chain.bands] == [(0,), (0, 1)]
    assert chain.breakpoints == (3.0,)
    assert chain.delta == 1.0
    assert chain.first_inclusion == (0, 1)
    assert chain.exact and not chain.flagged


def test_constant_series_chain_skips_the_pair(four_constants):
    chain = enumerate_chain(four_constants)
    assert [b.members for b in chain.bands] == [(0,), (0, 1, 2, 3)]
    assert chain.breakpoints == (1.0,)


def test_identical_series():
    chain = enumerate_chain(SeriesMatrix(np.ones((4, 3))))
    assert [b.members for b in chain.bands] == [(0, 1, 2, 3)]
    assert chain.breakpoints == () and chain.delta is None


def test_seed_duplicates_join_the_first_band():
    matrix = SeriesMatrix(np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 5.0]]))
    chain = enumerate_chain(matrix)
    assert chain.bands[0].members == (0, 1)


def test_offset_uses_the_value_grid_step():
    # the smallest gap here is 0.557, yet the band {0, 1, 2} sits between two
    # ratios closer than 0.557 / 16; an offset from the gap would skip it
    values = np.array([[-1.159], [-1.717], [-0.444], [0.32]])
    expected = [(0,), (0, 1), (0, 1, 2), (0, 1, 2, 3)]
    for exact in (None, False):
        chain = enumerate_chain(SeriesMatrix(values), exact=exact)
        assert [b.members for b in chain.bands] == expected
    noisy = values + np.array([[1e-7], [3e-8], [-2e-7], [5e-8]])
    assert [b.members for b in enumerate_chain(SeriesMatrix(noisy)).bands] == expected


@pytest.mark.parametrize("kind", ["int", "sparse-grid", "decimal", "real"])
def test_matches_exhaustive_chain(kind):
    rng = np.random.default_rng(40 + ["int", "sparse-grid", "decimal", "real"].index(kind))
    for _ in range(40):
        matrix = random_matrix(rng, kind=kind)
        expected = reference_chain(matrix)
        for restrict in (True, False):
            chain = enumerate_chain(matrix, restrict=restrict)
            assert [b.members for b in chain.bands] == expected
            assert not chain.flagged
            assert chain.solver_calls <= 2 * len(chain)


def test_float_mode_matches_exact_mode():
    for seed in range(3):
        for flavor in ("clustered", "random-walk"):
            matrix = generate(InstanceSpec(120, 40, rng_seed=seed, flavor=flavor, outliers=12, resolution=0.01))
            exact = enumerate_chain(matrix)
            approx = enumerate_chain(matrix, exact=False)
            assert exact.exact and not approx.exact
            assert [b.members for b in exact.bands] == [b.members for b in approx.bands]
            assert np.allclose(exact.breakpoints, approx.breakpoints)


def test_chain_invariants():
    rng = np.random.default_rng(31)
    for _ in range(40):
        matrix = random_matrix(rng, n_range=(2, 12), m_range=(1, 6))
        chain = enumerate_chain(matrix)
        sizes = chain.sizes
        assert len(chain) <= matrix.n + 1
        assert chain.bands[-1].members == tuple(range(matrix.n))
        assert all(a < b for a, b in zip(sizes, sizes[1:]))
        assert all(set(a.members) < set(b.members) for a, b in zip(chain.bands, chain.bands[1:]))
        assert all(a < b for a, b in zip(chain.breakpoints, chain.breakpoints[1:]))
        areas = [b.area for b in chain.bands]
        assert all(a < b for a, b in zip(areas, areas[1:]))
        for series, index in enumerate(chain.first_inclusion):
            assert series in chain.bands[index].members
            assert index == 0 or series not in chain.bands[index - 1].members


def test_breakpoints_bracket_each_band():
    rng = np.random.default_rng(32)
    for _ in range(40):
        matrix = random_matrix(rng)
        chain = enumerate_chain(matrix)
        cuts = [0.0, *chain.breakpoints, np.inf]
        for alpha in rng.uniform(0.01, 12.0, size=8):
            band = solve_regband(matrix, alpha)
            index = [b.members for b in chain.bands].index(band.members)
            assert cuts[index] <= alpha < cuts[index + 1]
            assert chain.band_for_alpha(alpha).members == band.members


def test_band_for_alpha_rejects_nonpositive(two_series):
    with pytest.raises(BandError):
        enumerate_chain(two_series).band_for_alpha(0.0)


def test_next_band_is_sparsest_extension():
    rng = np.random.default_rng(33)
    for _ in range(40):
        matrix = random_matrix(rng)
        areas = subset_areas(matrix)
        chain = enumerate_chain(matrix)
        for inner, outer in zip(chain.bands, chain.bands[1:]):
            base = set(inner.members)
            best = min(
                (a - inner.area) / (len(u) - len(base))
                for u, a in areas.items() if base < set(u)
            )
            assert (outer.area - inner.area) / (outer.size - inner.size) == pytest.approx(best, abs=1e-9)


def test_nested_in_alpha():
    rng = np.random.default_rng(34)
    for _ in range(60):
        matrix = random_matrix(rng)
        a, b = sorted(rng.uniform(0.05, 6.0, size=2))
        assert set(solve_regband(matrix, a).members) <= set(solve_regband(matrix, b).members)
