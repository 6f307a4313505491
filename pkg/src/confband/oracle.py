"""Exhaustive solvers for small instances and random instance generation."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .model import Band, BandError, SeriesMatrix, envelope

DEFAULT_CAP = 12
TIE_TOL = 1e-9

FLAVORS = ("uniform", "random-walk", "clustered")


def _check_cap(matrix: SeriesMatrix, cap: int) -> None:
    if matrix.n > cap:
        raise BandError("instance too large for oracle")


def _others(matrix: SeriesMatrix) -> list[int]:
    return [i for i in range(matrix.n) if i != matrix.seed_index]


def _fixed_size_search(matrix: SeriesMatrix, k: int, cap: int, score) -> Band:
    _check_cap(matrix, cap)
    if not 1 <= k <= matrix.n:
        raise BandError(f"k={k} out of range 1..{matrix.n}")
    scored = []
    for rest in combinations(_others(matrix), k - 1):
        members = tuple(sorted(rest + (matrix.seed_index,)))
        rows = matrix.values[list(members)]
        scored.append((float(score(rows.max(axis=0) - rows.min(axis=0))), members))
    best = min(value for value, _ in scored)
    return envelope(matrix, min(u for value, u in scored if value <= best + TIE_TOL))


def exact_sumband(matrix: SeriesMatrix, k: int, cap: int = DEFAULT_CAP) -> Band:
    """Minimum-area band of exactly ``k`` series; lexicographically smallest on ties."""
    return _fixed_size_search(matrix, k, cap, np.sum)


def exact_infband(matrix: SeriesMatrix, k: int, cap: int = DEFAULT_CAP) -> Band:
    """Minimum-width band of exactly ``k`` series; lexicographically smallest on ties."""
    return _fixed_size_search(matrix, k, cap, np.max)


def seed_subsets(matrix: SeriesMatrix, cap: int = DEFAULT_CAP):
    """Yield every member tuple containing the seed."""
    _check_cap(matrix, cap)
    others = _others(matrix)
    for size in range(len(others) + 1):
        for rest in combinations(others, size):
            yield tuple(sorted(rest + (matrix.seed_index,)))


def subset_areas(matrix: SeriesMatrix, cap: int = DEFAULT_CAP) -> dict[tuple[int, ...], float]:
    areas = {}
    for members in seed_subsets(matrix, cap):
        rows = matrix.values[list(members)]
        areas[members] = float((rows.max(axis=0) - rows.min(axis=0)).sum())
    return areas


def exact_regband(matrix: SeriesMatrix, alpha: float, cap: int = DEFAULT_CAP, areas=None) -> Band:
    """Largest minimizer of ``area - alpha * size`` by enumeration."""
    if not alpha > 0:
        raise BandError("invalid alpha")
    if areas is None:
        areas = subset_areas(matrix, cap)
    alpha = float(alpha)
    scores = {u: a - alpha * len(u) for u, a in areas.items()}
    best = min(scores.values())
    tied = [u for u, s in scores.items() if s <= best + TIE_TOL]
    winner = max(tied, key=lambda u: (len(u), [-i for i in u]))
    return envelope(matrix, winner)


@dataclass(frozen=True)
class InstanceSpec:
    """Recipe for a random instance; ``resolution`` rounds values to a grid."""

    n: int
    m: int
    rng_seed: int = 0
    flavor: str = "uniform"
    low: float = 0.0
    high: float = 9.0
    resolution: float | None = 1.0
    outliers: int = 0
    cap: int = DEFAULT_CAP


def generate(spec: InstanceSpec) -> SeriesMatrix:
    """Deterministic random instance; series 0 is the seed."""
    if spec.flavor not in FLAVORS:
        raise BandError(f"unknown flavor {spec.flavor!r}")
    if spec.n < 1 or spec.m < 1:
        raise BandError("n and m must be positive")
    rng = np.random.default_rng(spec.rng_seed)
    n, m = spec.n, spec.m
    span = spec.high - spec.low
    if spec.flavor == "uniform":
        values = rng.uniform(spec.low, spec.high, size=(n, m))
    elif spec.flavor == "random-walk":
        steps = rng.normal(0.0, span / (4 * np.sqrt(m)), size=(n, m))
        values = spec.low + span / 2 + np.cumsum(steps, axis=1)
    else:
        # tight bundle around a smooth curve; the first row is the clean curve
        t = np.linspace(0.0, 2 * np.pi, m)
        base = spec.low + span / 2 + span / 4 * np.sin(t)
        values = base + rng.normal(0.0, span / 40, size=(n, m))
        values[0] = base
        n_out = min(spec.outliers, n - 1)
        if n_out:
            rows = rng.choice(np.arange(1, n), size=n_out, replace=False)
            shift = rng.uniform(span / 8, span / 3, size=(n_out, 1)) * rng.choice([-1, 1], size=(n_out, 1))
            values[rows] += shift + rng.normal(0.0, span / 10, size=(n_out, m))
    if spec.resolution:
        values = np.round(values / spec.resolution) * spec.resolution
        # one extra rounding strips representation noise such as 0.30000000000000004
        digits = max(0, int(np.ceil(-np.log10(spec.resolution))) + 1)
        values = np.round(values, digits)
    if spec.flavor == "uniform":
        values = np.clip(values, spec.low, spec.high)
    return SeriesMatrix(values, seed_index=0)
