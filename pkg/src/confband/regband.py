"""Exact regularized bands through a minimum cut.

For a fixed ``alpha`` the regularized band minimizes
``area(U) - alpha * |U|`` over seed-containing subsets, preferring the
largest set on ties. The cut graph has one node per distinct value at each
position (``a``-nodes), one node per series (``b``-nodes), a source and a
sink. Capacities are the textbook weights multiplied by a positive constant:

* float mode: factor ``alpha / m``, so count terms weigh ``alpha / m`` and
  value gaps enter unchanged;
* exact mode: values are scaled by ``10**d`` to integers, ``alpha = P/Q``,
  and the factor is ``P * 10**d`` so every capacity is an integer.

Uniform scaling leaves the argmin intact. The largest optimal band is the
maximal source side of the minimum cut, read off the residual graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .flownet import FlowNetwork, _INT_LIMIT
from .model import Band, BandError, SeriesMatrix, envelope

MAX_DECIMALS = 6


@dataclass(frozen=True, eq=False)
class ValueGrid:
    """Sorted distinct values per position and their cumulative counts.

    Position ``i`` owns the flat slice ``offsets[i]:offsets[i+1]`` of
    ``values`` and ``counts``. ``counts[k]`` is the number of series whose
    value at that position is at most ``values[k]``. Ranks are local
    (0-based) indices within a position's slice.
    """

    offsets: np.ndarray
    values: np.ndarray
    counts: np.ndarray
    seed_rank: np.ndarray
    rank: np.ndarray

    @property
    def m(self) -> int:
        return self.offsets.size - 1

    @property
    def node_count(self) -> int:
        return int(self.offsets[-1])

    def p(self, i: int) -> np.ndarray:
        return self.values[self.offsets[i]:self.offsets[i + 1]]

    def c(self, i: int) -> np.ndarray:
        return self.counts[self.offsets[i]:self.offsets[i + 1]]


def build_value_grid(matrix: SeriesMatrix) -> ValueGrid:
    n, m = matrix.n, matrix.m
    values, counts = [], []
    sizes = np.empty(m, dtype=np.int64)
    rank = np.empty((n, m), dtype=np.int64)
    for i in range(m):
        uniq, inverse, cnt = np.unique(matrix.values[:, i], return_inverse=True, return_counts=True)
        values.append(uniq)
        counts.append(np.cumsum(cnt))
        sizes[i] = uniq.size
        rank[:, i] = inverse.ravel()
    offsets = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    seed_rank = rank[matrix.seed_index].copy()
    return ValueGrid(
        offsets=offsets,
        values=np.concatenate(values),
        counts=np.concatenate(counts).astype(np.int64),
        seed_rank=seed_rank,
        rank=rank,
    )


def decimal_digits(values: np.ndarray, max_digits: int = MAX_DECIMALS) -> int | None:
    """Smallest ``d`` such that ``values * 10**d`` are all integers, if any."""
    values = np.asarray(values, dtype=float)
    for d in range(max_digits + 1):
        scaled = values * 10.0**d
        if np.max(np.abs(scaled), initial=0.0) >= 2.0**52:
            return None
        if np.all(np.abs(scaled - np.round(scaled)) <= 1e-9 * np.maximum(1.0, np.abs(scaled))):
            return d
    return None


def as_fraction(alpha) -> Fraction:
    if isinstance(alpha, Rational):
        return Fraction(alpha)
    return Fraction(repr(float(alpha)))


@dataclass(frozen=True, eq=False)
class CutGraph:
    """A cut network together with the bookkeeping to read bands back."""

    network: FlowNetwork
    grid: ValueGrid
    series_nodes: np.ndarray
    scale: float | Fraction
    exact: bool

    def unscale(self, capacity) -> float:
        """Convert a network capacity back to textbook weight units."""
        if self.exact:
            return float(Fraction(int(capacity)) / self.scale)
        return float(capacity) / self.scale


def _exact_weights(matrix: SeriesMatrix, grid: ValueGrid, alpha: Fraction):
    digits = decimal_digits(matrix.values)
    if digits is None:
        return None
    ten = 10**digits
    p_int = np.round(grid.values * ten).astype(np.int64)
    count_w = alpha.numerator * ten
    gap_w = matrix.m * alpha.denominator
    spread = int(p_int.max() - p_int.min()) if p_int.size else 0
    if count_w * matrix.n + gap_w * spread >= _INT_LIMIT:
        return None
    return count_w, gap_w, p_int


def build_network(
    grid: ValueGrid,
    matrix: SeriesMatrix,
    alpha,
    pinned=(),
    exact: bool | None = None,
    float_alpha: float | None = None,
) -> CutGraph:
    """Build the cut network for ``alpha``.

    ``pinned`` series are tied to the source with unbounded arcs, forcing
    them (and every value they touch) into the band. ``exact=None`` picks
    integer capacities whenever the data and ``alpha`` allow it; otherwise
    ``float_alpha`` (default ``float(alpha)``) is used.
    """
    if not alpha > 0:
        raise BandError("invalid alpha")
    n, m = matrix.n, matrix.m
    n_a = grid.node_count
    source, sink = n_a + n, n_a + n + 1

    col = np.repeat(np.arange(m), np.diff(grid.offsets))
    local = np.arange(n_a) - grid.offsets[col]
    seed_local = grid.seed_rank[col]
    ids = np.arange(n_a)
    up = ids[local > seed_local]
    down = ids[local < seed_local]
    seed_nodes = grid.offsets[:-1] + grid.seed_rank
    tops = grid.offsets[1:] - 1
    bottoms = grid.offsets[:-1]

    weights = None
    if exact is not False:
        weights = _exact_weights(matrix, grid, as_fraction(alpha))
        if weights is None and exact:
            raise OverflowError("instance does not admit exact integer capacities")
    if weights is not None:
        count_w, gap_w, p = weights
        scale = Fraction(count_w)
    else:
        alpha_f = float(alpha) if float_alpha is None else float(float_alpha)
        count_w, gap_w, p = alpha_f / m, 1.0, grid.values
        scale = count_w
    is_exact = weights is not None
    x = p[seed_nodes]
    c = grid.counts

    net = FlowNetwork(n_a + n + 2, source, sink, integral=is_exact)
    net.add_arcs(up - 1, up, count_w * (n - c[up - 1]) + gap_w * (p[up - 1] - x[col[up]]))
    net.add_arcs(down + 1, down, count_w * c[down] + gap_w * (x[col[down]] - p[down + 1]))
    net.add_arcs(tops, np.full(m, sink), gap_w * (p[tops] - x))
    net.add_arcs(bottoms, np.full(m, sink), gap_w * (x - p[bottoms]))

    obs_a = (grid.offsets[:-1][None, :] + grid.rank).ravel()
    obs_b = np.repeat(n_a + np.arange(n), m)
    net.add_arcs(obs_a, obs_b, count_w)
    net.add_arcs(obs_b, obs_a, 0, infinite=True)
    net.add_arcs(np.full(m, source), seed_nodes, 0, infinite=True)
    if len(pinned):
        pinned = np.asarray(sorted(pinned), dtype=np.int64)
        net.add_arcs(np.full(pinned.size, source), n_a + pinned, 0, infinite=True)
    if is_exact and not net.fits_int64():
        if exact:
            raise OverflowError("instance does not admit exact integer capacities")
        return build_network(grid, matrix, alpha, pinned, False, float_alpha)
    return CutGraph(net, grid, n_a + np.arange(n), scale, is_exact)


@dataclass(frozen=True, eq=False)
class RegBandSolution:
    band: Band
    alpha: float
    objective: float
    cut_value: float
    exact: bool = False

    @property
    def members(self) -> tuple[int, ...]:
        return self.band.members


def solve_cut(
    matrix: SeriesMatrix,
    alpha,
    pinned=(),
    exact: bool | None = None,
    grid: ValueGrid | None = None,
    float_alpha: float | None = None,
    minimal: bool = False,
) -> tuple[tuple[int, ...], float, bool]:
    """Members of the largest optimal band, unscaled cut value, exactness.

    With ``minimal=True`` the smallest optimal band is returned instead.
    """
    if grid is None:
        grid = build_value_grid(matrix)
    graph = build_network(grid, matrix, alpha, pinned=pinned, exact=exact, float_alpha=float_alpha)
    flow = graph.network.max_flow()
    if minimal:
        side = graph.network.min_cut_min_side().source_side
    else:
        side = graph.network.min_cut_max_side().source_side
    members = tuple(int(l) for l, b in enumerate(graph.series_nodes) if b in side)
    return members, graph.unscale(flow), graph.exact


def solve_regband(
    matrix: SeriesMatrix,
    alpha,
    exact: bool | None = None,
    grid: ValueGrid | None = None,
) -> RegBandSolution:
    """Largest seed-containing set minimizing ``area - alpha * size``."""
    if not alpha > 0:
        raise BandError("invalid alpha")
    members, cut, is_exact = solve_cut(matrix, alpha, exact=exact, grid=grid)
    band = envelope(matrix, members)
    return RegBandSolution(
        band=band,
        alpha=float(alpha),
        objective=band.area - float(alpha) * band.size,
        cut_value=cut,
        exact=is_exact,
    )
