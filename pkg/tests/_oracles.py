"""Independent reference computations shared by the tests.

Nothing here calls the cut solver: cuts are enumerated outright and chains
are rebuilt from exhaustive subset scores.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from confband.model import SeriesMatrix
from confband.oracle import exact_regband, subset_areas


def brute_min_cut(node_count, arcs, source, sink):
    """Minimum cut value and every minimizing source side, by enumeration.

    ``arcs`` holds ``(tail, head, capacity)`` with ``np.inf`` allowed.
    """
    inner = [v for v in range(node_count) if v not in (source, sink)]
    best, sides = np.inf, []
    for bits in product((False, True), repeat=len(inner)):
        side = {source} | {v for v, b in zip(inner, bits) if b}
        value = sum(c for t, h, c in arcs if t in side and h not in side)
        if value < best - 1e-9:
            best, sides = value, [frozenset(side)]
        elif abs(value - best) <= 1e-9:
            sides.append(frozenset(side))
    return best, sides


def random_network(rng, max_nodes=8, max_arcs=18, integral=True, p_inf=0.15):
    n = int(rng.integers(2, max_nodes + 1))
    arcs, seen = [], set()
    for _ in range(int(rng.integers(1, max_arcs + 1))):
        t, h = (int(x) for x in rng.integers(0, n, 2))
        if t == h or (t, h) in seen:
            continue
        seen.add((t, h))
        if rng.random() < p_inf:
            arcs.append((t, h, np.inf))
        elif integral:
            arcs.append((t, h, int(rng.integers(0, 11))))
        else:
            arcs.append((t, h, float(rng.uniform(0, 5))))
    return n, arcs


def candidate_ratios(areas):
    ratios = {
        (areas[v] - areas[u]) / (len(v) - len(u))
        for u in areas for v in areas if len(v) > len(u)
    }
    return sorted(r for r in ratios if r > 0)


def reference_chain(matrix: SeriesMatrix) -> list[tuple[int, ...]]:
    """Distinct regularized bands over every alpha, by exhaustive search.

    The regularized optimum only changes at area-per-series ratios between
    two subsets, so probing one alpha between each pair of consecutive
    ratios (and one on either side) sweeps all of them.
    """
    areas = subset_areas(matrix)
    ratios = candidate_ratios(areas)
    if not ratios:
        return [tuple(range(matrix.n))]
    probes = [ratios[0] / 2] + [(a + b) / 2 for a, b in zip(ratios, ratios[1:])] + [2 * ratios[-1] + 1]
    chain = []
    for alpha in probes:
        members = exact_regband(matrix, alpha, areas=areas).members
        if members not in chain:
            chain.append(members)
    return chain


def random_matrix(rng, n_range=(2, 8), m_range=(1, 5), kind="int") -> SeriesMatrix:
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    if kind == "int":
        values = rng.integers(0, 10, size=(n, m)).astype(float)
    elif kind == "sparse-grid":
        # gaps of 0.2 and 0.3: the grid step is smaller than every gap
        values = rng.choice([0.0, 0.2, 0.5, 0.9, 1.4], size=(n, m))
    elif kind == "decimal":
        values = np.round(rng.normal(size=(n, m)), 2)
    else:
        values = rng.normal(size=(n, m))
    return SeriesMatrix(values, seed_index=int(rng.integers(0, n)))
