"""Fixed-size bands: greedy area minimization from the chain, closest series
by sup-norm for width, and the peeling baseline.

All ties go to the lowest series index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import BandChain, enumerate_chain
from .model import Band, BandError, SeriesMatrix, envelope

ALGORITHMS = ("findsum", "findinf", "peel", "oracle")


@dataclass(frozen=True, eq=False)
class ApproxResult:
    band: Band
    k: int
    algorithm: str
    base_band_index: int | None = None
    candidate_mode: str | None = None

    @property
    def members(self) -> tuple[int, ...]:
        return self.band.members


def resolve_k(k, n: int) -> int:
    """Integers are sizes; floats are fractions in (0, 1] giving ``floor(k * n)``."""
    if isinstance(k, (int, np.integer)) and not isinstance(k, bool):
        size = int(k)
    else:
        k = float(k)
        if not 0 < k <= 1:
            raise BandError(f"fractional k must lie in (0, 1], got {k}")
        size = math.floor(k * n)
    if not 1 <= size <= n:
        raise BandError(f"k={size} out of range 1..{n}")
    return size


def _check_k(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise BandError(f"k={k} out of range 1..{n}")


def greedy_extend(matrix: SeriesMatrix, base, pool, count: int) -> tuple[int, ...]:
    """Add ``count`` members of ``pool`` to ``base``, each time the one whose
    addition gives the smallest area."""
    base = sorted(set(int(i) for i in base))
    pool = np.array(sorted(set(int(i) for i in pool) - set(base)), dtype=np.int64)
    if count < 0 or count > pool.size:
        raise BandError("insufficient candidates")
    if count == 0:
        return tuple(base)
    values = matrix.values
    lower = values[base].min(axis=0)
    upper = values[base].max(axis=0)
    chosen = list(base)
    alive = np.ones(pool.size, dtype=bool)
    for _ in range(count):
        cand = pool[alive]
        rows = values[cand]
        # area after adding each candidate; only the marginal part varies
        grow = (np.maximum(rows - upper, 0.0) + np.maximum(lower - rows, 0.0)).sum(axis=1)
        pick = int(np.argmin(grow))
        best = int(cand[pick])
        chosen.append(best)
        alive[np.searchsorted(pool, best)] = False
        lower = np.minimum(lower, values[best])
        upper = np.maximum(upper, values[best])
    return tuple(sorted(chosen))


def find_sum(matrix: SeriesMatrix, k: int, chain: BandChain | None = None) -> ApproxResult:
    """Approximate minimum-area band of size ``k`` (within ``sqrt(n) + 1`` of optimal).

    Start from the largest chain band with at most ``k`` members. If more
    than ``sqrt(n)`` series are missing, fill up from the next chain band
    only; otherwise from all remaining series.
    """
    n = matrix.n
    if k > n:
        raise BandError(f"k={k} out of range 1..{n}")
    if chain is None:
        chain = enumerate_chain(matrix)
    sizes = chain.sizes
    if k < sizes[0]:
        raise BandError(f"k below minimal band (smallest regularized band has {sizes[0]} series)")
    j = max(i for i, size in enumerate(sizes) if size <= k)
    base = chain.bands[j].members
    if sizes[j] <= k - math.sqrt(n) and j + 1 < len(sizes):
        mode = "next_band"
        pool = set(chain.bands[j + 1].members) - set(base)
    else:
        mode = "all_remaining"
        pool = set(range(n)) - set(base)
    members = greedy_extend(matrix, base, pool, k - sizes[j])
    return ApproxResult(envelope(matrix, members), k, "findsum", j, mode)


def seed_distances(matrix: SeriesMatrix) -> np.ndarray:
    """Sup-norm distance of every series to the seed."""
    return np.abs(matrix.values - matrix.seed).max(axis=1)


def find_inf(matrix: SeriesMatrix, k: int) -> ApproxResult:
    """The seed plus the ``k - 1`` series closest to it in sup-norm.

    The width is at most twice the optimal width.
    """
    _check_k(k, matrix.n)
    dist = seed_distances(matrix)
    dist[matrix.seed_index] = -1.0
    order = np.argsort(dist, kind="stable")
    return ApproxResult(envelope(matrix, order[:k].tolist()), k, "findinf")


def peel(matrix: SeriesMatrix, k: int) -> ApproxResult:
    """Start from everything and repeatedly drop the non-seed series whose
    removal shrinks the area the most."""
    _check_k(k, matrix.n)
    members = list(range(matrix.n))
    seed = matrix.seed_index
    while len(members) > k:
        rows = matrix.values[members]
        order = np.sort(rows, axis=0)
        top, second = order[-1], order[-2]
        bottom, second_low = order[0], order[1]
        # only a unique extreme saves anything when removed
        savings = np.where(rows == top, top - second, 0.0) + np.where(rows == bottom, second_low - bottom, 0.0)
        gain = savings.sum(axis=1)
        gain[members.index(seed)] = -np.inf
        members.pop(int(np.argmax(gain)))
    return ApproxResult(envelope(matrix, members), k, "peel")


def best_of(matrix: SeriesMatrix, k: int, chain: BandChain | None = None) -> ApproxResult:
    """Run the greedy chain method and peeling, keep the smaller area."""
    greedy = find_sum(matrix, k, chain)
    peeled = peel(matrix, k)
    return peeled if peeled.band.area < greedy.band.area else greedy
