"""Enumeration of every regularized band.

Regularized bands are nested as ``alpha`` grows, so there are at most
``n + 1`` of them. Given two known bands ``U`` and ``V`` the solver is asked
for ``alpha`` just below the area-per-series ratio between them; the answer
is either ``U`` (nothing lies strictly between) or a new band, after which
both halves are searched the same way.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import Band, BandError, SeriesMatrix, envelope
from .regband import build_value_grid, decimal_digits, solve_cut

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BandChain:
    """Nested regularized bands ``bands[0] < bands[1] < ... < bands[-1] = all``.

    ``breakpoints[i]`` is the area-per-series ratio between ``bands[i]`` and
    ``bands[i + 1]``; ``first_inclusion[l]`` is the index of the smallest band
    containing series ``l``.
    """

    bands: tuple[Band, ...]
    breakpoints: tuple[float, ...]
    first_inclusion: tuple[int, ...]
    delta: float | None
    solver_calls: int = 0
    exact: bool = False
    flagged: bool = False

    def __len__(self) -> int:
        return len(self.bands)

    @property
    def sizes(self) -> list[int]:
        return [b.size for b in self.bands]

    def band_for_alpha(self, alpha: float) -> Band:
        """The chain band that solves the regularized problem at ``alpha``."""
        if not alpha > 0:
            raise BandError("invalid alpha")
        index = int(np.searchsorted(self.breakpoints, alpha, side="right"))
        return self.bands[index]


def delta_gap(matrix: SeriesMatrix) -> float:
    """Smallest positive difference between two values at the same position."""
    sorted_values = np.sort(matrix.values, axis=0)
    gaps = np.diff(sorted_values, axis=0)
    gaps = gaps[gaps > 0]
    if gaps.size == 0:
        raise BandError("degenerate data")
    return float(gaps.min())


class _Scorer:
    """Areas in exact rational units when the data allows, floats otherwise."""

    def __init__(self, matrix: SeriesMatrix, exact: bool | None):
        self.matrix = matrix
        digits = None if exact is False else decimal_digits(matrix.values)
        if exact and digits is None:
            raise BandError("exact mode needs decimal data")
        self.exact = digits is not None
        if self.exact:
            self.ten = 10**digits
            self.ints = np.round(matrix.values * self.ten).astype(np.int64)

    def area(self, members) -> Fraction | float:
        if self.exact:
            rows = self.ints[list(members)]
            return Fraction(int((rows.max(axis=0) - rows.min(axis=0)).sum()), self.ten)
        return envelope(self.matrix, members).area

    def delta(self) -> Fraction | float:
        if self.exact:
            gaps = np.diff(np.sort(self.ints, axis=0), axis=0)
            return Fraction(int(gaps[gaps > 0].min()), self.ten)
        return delta_gap(self.matrix)

    def unit(self) -> Fraction:
        """Largest step dividing every value difference at a common position;
        all areas are multiples of it."""
        gaps = np.diff(np.sort(self.ints, axis=0), axis=0)
        return Fraction(int(np.gcd.reduce(gaps[gaps > 0])), self.ten)


def enumerate_chain(
    matrix: SeriesMatrix,
    restrict: bool = True,
    exact: bool | None = None,
) -> BandChain:
    """All regularized bands of ``matrix``, innermost first.

    With ``restrict`` each sub-search only sees the series of the outer band
    and replaces the inner band by its envelope, pinned to the source.
    ``exact`` selects rational thresholds and integer capacities (``None``:
    whenever the values are short decimals).
    """
    n = matrix.n
    full = tuple(range(n))
    try:
        delta = delta_gap(matrix)
    except BandError:
        return BandChain((envelope(matrix, full),), (), (0,) * n, None)

    scorer = _Scorer(matrix, exact)
    # every positive area is at least delta, so delta / n**2 lies below the
    # first breakpoint; distinct ratios differ by at least unit / n**2
    first_alpha = scorer.delta() / n**2
    eps = scorer.unit() / n**2 if scorer.exact else None
    full_grid = build_value_grid(matrix)
    state = {"calls": 0, "flagged": False, "exact": True}

    def run(alpha, U, V, use_exact, minimal=False):
        if restrict and U is not None:
            inner = list(U)
            rest = [l for l in V if l not in U]
            rows = np.vstack([
                matrix.seed,
                matrix.values[inner].min(axis=0),
                matrix.values[inner].max(axis=0),
                matrix.values[rest],
            ])
            sub = SeriesMatrix(rows, seed_index=0)
            members, _, is_exact = solve_cut(
                sub, alpha, pinned=(0, 1, 2), exact=use_exact, minimal=minimal
            )
            found = set(U) | {rest[r - 3] for r in members if r >= 3}
        else:
            members, _, is_exact = solve_cut(
                matrix, alpha, exact=use_exact, grid=full_grid, minimal=minimal
            )
            found = set(members)
        if not is_exact:
            state["exact"] = False
        return tuple(sorted(found))

    def solve_between(U, V):
        state["calls"] += 1
        ratio = (scorer.area(V) - scorer.area(U)) / (len(V) - len(U))
        if scorer.exact:
            # The smallest optimum at the ratio itself is the band just below
            # it, i.e. the same band the offset threshold selects; it needs far
            # smaller integers, so it is the fallback when the offset overflows.
            for alpha, minimal in ((ratio - eps, False), (ratio, True)):
                try:
                    return run(alpha, U, V, True, minimal)
                except OverflowError:
                    continue
            if exact:
                raise OverflowError("exact chain enumeration does not fit in 64-bit capacities")
        # without a value grid no offset is safe; use the smallest optimum
        return run(float(ratio), U, V, False, True)

    state["calls"] += 1
    b0 = run(first_alpha, None, None, None if scorer.exact else False)
    found = {len(b0): b0}
    if len(b0) < n:
        found[n] = full
        stack = [(b0, full)]
        while stack:
            U, V = stack.pop()
            W = solve_between(U, V)
            # V itself means U and V tie at the ratio up to rounding, so nothing
            # lies strictly between them
            if W == U or W == V:
                continue
            if not set(U) < set(W) < set(V):
                state["flagged"] = True
                log.warning("sub-search returned a band outside (U, V); skipping")
                continue
            found[len(W)] = W
            stack.append((W, V))
            stack.append((U, W))

    ordered = [found[size] for size in sorted(found)]
    bands = tuple(envelope(matrix, members) for members in ordered)
    breakpoints = tuple(
        float((scorer.area(b) - scorer.area(a)) / (len(b) - len(a)))
        for a, b in zip(ordered, ordered[1:])
    )
    first = [0] * n
    seen = set()
    for index, members in enumerate(ordered):
        for l in members:
            if l not in seen:
                seen.add(l)
                first[l] = index
    return BandChain(
        bands=bands,
        breakpoints=breakpoints,
        first_inclusion=tuple(first),
        delta=delta,
        solver_calls=state["calls"],
        exact=state["exact"],
        flagged=state["flagged"],
    )
