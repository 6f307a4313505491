"""Time-series data model, envelopes and band scores."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class BandError(ValueError):
    """Raised for invalid band requests (bad member sets, alpha, k, ...)."""


@dataclass(frozen=True, eq=False)
class SeriesMatrix:
    """``n`` time series of common length ``m`` with one designated seed series.

    Parameters
    ----------
    values : array_like, shape (n, m)
        One series per row. All entries must be finite.
    seed_index : int
        Row index of the seed series. Every band contains it.
    labels : sequence of str, optional
        Per-series identifiers, used only for reporting.
    """

    values: np.ndarray
    seed_index: int = 0
    labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise BandError("values must be a non-empty n x m grid")
        if not np.all(np.isfinite(values)):
            raise BandError("values must be finite (missing entries are not supported)")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

        seed_index = int(self.seed_index)
        if not 0 <= seed_index < values.shape[0]:
            raise BandError(f"seed index {seed_index} out of range for {values.shape[0]} series")
        object.__setattr__(self, "seed_index", seed_index)

        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != values.shape[0]:
                raise BandError("labels must have one entry per series")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def seed(self) -> np.ndarray:
        return self.values[self.seed_index]

    def label(self, index: int) -> str:
        if self.labels is None:
            return str(index)
        return self.labels[index]

    def full_band(self) -> "Band":
        return envelope(self, range(self.n))


@dataclass(frozen=True, eq=False)
class Band:
    """A seed-containing subset of series together with its envelope."""

    members: tuple[int, ...]
    lower: np.ndarray
    upper: np.ndarray
    area: float
    width: float

    @property
    def size(self) -> int:
        return len(self.members)

    def __contains__(self, index) -> bool:
        return index in self.members

    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)


def _check_members(matrix: SeriesMatrix, members: Iterable[int]) -> np.ndarray:
    idx = np.unique(np.fromiter((int(i) for i in members), dtype=np.int64))
    if idx.size == 0:
        raise BandError("empty band")
    if idx[0] < 0 or idx[-1] >= matrix.n:
        raise BandError("member index out of range")
    if matrix.seed_index not in idx:
        raise BandError("seed not in band")
    return idx


def envelope(matrix: SeriesMatrix, members: Iterable[int]) -> Band:
    """Per-position min/max over ``members`` with both scores filled in."""
    idx = _check_members(matrix, members)
    rows = matrix.values[idx]
    lower = rows.min(axis=0)
    upper = rows.max(axis=0)
    extent = upper - lower
    lower.setflags(write=False)
    upper.setflags(write=False)
    return Band(
        members=tuple(int(i) for i in idx),
        lower=lower,
        upper=upper,
        area=float(extent.sum()),
        width=float(extent.max()),
    )


def area_score(matrix: SeriesMatrix, members: Iterable[int]) -> float:
    """Envelope area: sum over positions of upper minus lower."""
    return envelope(matrix, members).area


def width_score(matrix: SeriesMatrix, members: Iterable[int]) -> float:
    """Envelope width: largest upper-minus-lower gap over positions."""
    return envelope(matrix, members).width


def reg_score(matrix: SeriesMatrix, members: Iterable[int], alpha: float) -> float:
    """Regularized score ``area - alpha * |members|``."""
    if not alpha > 0:
        raise BandError("invalid alpha")
    band = envelope(matrix, members)
    return band.area - float(alpha) * band.size


def derive_seed(
    values: np.ndarray | Sequence[Sequence[float]],
    policy: str = "median",
    labels: Sequence[str] | None = None,
) -> SeriesMatrix:
    """Append a point-wise median or mean series and make it the seed.

    The median is the lower median, i.e. the element of rank
    ``(n - 1) // 2`` in each sorted column, so that for even ``n`` the seed
    takes an observed value. Callers looking for ``k`` of the original series
    must ask for ``k + 1`` members on the returned matrix.
    """
    values = np.array(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if values.ndim != 2 or values.shape[0] < 1:
        raise BandError("need at least one series to derive a seed")
    if policy == "median":
        seed = np.sort(values, axis=0)[(values.shape[0] - 1) // 2]
    elif policy == "mean":
        seed = values.mean(axis=0)
    else:
        raise BandError(f"unknown seed policy {policy!r}")
    if labels is not None:
        labels = tuple(labels) + (policy,)
    return SeriesMatrix(np.vstack([values, seed]), seed_index=values.shape[0], labels=labels)
