"""JSON/CSV documents for bands and chains, and the benchmark report."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

from .approx import find_inf, find_sum, peel, resolve_k
from .chain import BandChain, enumerate_chain
from .ingest import Dataset
from .model import Band, BandError, SeriesMatrix


def normalized(value: float, reference: float) -> float | None:
    """``100 * value / reference``; None when the reference is zero."""
    if reference == 0:
        return None
    return 100.0 * value / reference


def band_fields(matrix: SeriesMatrix, band: Band) -> dict:
    full = matrix.full_band()
    return {
        "members": list(band.members),
        "labels": [matrix.label(i) for i in band.members],
        "lower": band.lower.tolist(),
        "upper": band.upper.tolist(),
        "area": band.area,
        "width": band.width,
        "normalized_area": normalized(band.area, full.area),
        "normalized_width": normalized(band.width, full.width),
    }


def band_document(dataset: Dataset, band: Band, algorithm: str, k: int, k_requested=None, **extra) -> dict:
    """Band report with a fixed key order; ``extra`` keys go last."""
    doc = {"algorithm": algorithm, "k": k}
    doc.update(band_fields(dataset.matrix, band))
    doc["seed"] = {
        "index": dataset.matrix.seed_index,
        "policy": dataset.seed_policy,
        "k_requested": k if k_requested is None else k_requested,
    }
    doc.update(extra)
    return doc


def chain_document(dataset: Dataset, chain: BandChain) -> dict:
    matrix = dataset.matrix
    bands = []
    for band in chain.bands:
        entry = {"size": band.size}
        entry.update(band_fields(matrix, band))
        bands.append(entry)
    return {
        "bands": bands,
        "breakpoints": list(chain.breakpoints),
        "first_inclusion": list(chain.first_inclusion),
        "delta": chain.delta,
        "exact": chain.exact,
        "solver_calls": chain.solver_calls,
        "seed": {"index": matrix.seed_index, "policy": dataset.seed_policy},
    }


def dumps(doc: dict) -> str:
    """Canonical JSON text: insertion key order, full precision, trailing newline."""
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def envelope_csv(bands) -> str:
    """Columns ``position, lower_1..lower_L, upper_1..upper_L`` in band order."""
    bands = list(bands)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    count = len(bands)
    writer.writerow(
        ["position"] + [f"lower_{i}" for i in range(1, count + 1)] + [f"upper_{i}" for i in range(1, count + 1)]
    )
    for pos in range(bands[0].lower.size):
        writer.writerow(
            [pos] + [repr(float(b.lower[pos])) for b in bands] + [repr(float(b.upper[pos])) for b in bands]
        )
    return out.getvalue()


def first_nontrivial_size(chain: BandChain) -> int:
    """Size of the smallest chain band with more than one series."""
    for band in chain.bands:
        if band.size > 1:
            return band.size
    return chain.bands[-1].size


ALGORITHMS = ("sum", "peel", "inf")
BENCH_FRACTIONS = (0.9, 0.95)


@dataclass
class Score:
    """Normalized area and width of one heuristic, with its run time."""

    seconds: float
    area: float | None = None
    width: float | None = None


@dataclass
class RunReport:
    """One benchmark row: a dataset with scores at every requested size.

    ``scores[(tag, algorithm)]`` holds the result for the size labelled
    ``tag`` (e.g. ``"90"`` for 0.9 n); ``sizes[tag]`` is the band size used.
    """

    dataset: str
    n: int
    m: int
    chain_length: int
    b1_size: int
    chain_seconds: float
    sizes: dict = field(default_factory=dict)
    scores: dict = field(default_factory=dict)

    def columns(self) -> list[str]:
        names = ["dataset", "n", "m", "chain_length", "b1_size", "chain_seconds"]
        for tag in self.sizes:
            names.append(f"k_{tag}")
            for algo in ALGORITHMS:
                names += [f"{algo}_area_{tag}", f"{algo}_width_{tag}", f"{algo}_seconds_{tag}"]
        return names

    def row(self) -> list:
        values = [self.dataset, self.n, self.m, self.chain_length, self.b1_size, self.chain_seconds]
        for tag, k in self.sizes.items():
            values.append(k)
            for algo in ALGORITHMS:
                score = self.scores[(tag, algo)]
                values += [score.area, score.width, score.seconds]
        return values


def fraction_tag(fraction: float) -> str:
    return f"{100 * fraction:g}"


def _timed(func, *args):
    start = time.perf_counter()
    try:
        result = func(*args)
    except BandError:
        result = None
    return result, time.perf_counter() - start


def bench_dataset(dataset: Dataset, fractions=BENCH_FRACTIONS) -> RunReport:
    """Chain statistics and normalized scores of the three heuristics."""
    matrix = dataset.matrix
    full = matrix.full_band()
    start = time.perf_counter()
    chain = enumerate_chain(matrix)
    report = RunReport(
        dataset=dataset.name,
        n=dataset.original_n,
        m=matrix.m,
        chain_length=len(chain),
        b1_size=first_nontrivial_size(chain),
        chain_seconds=time.perf_counter() - start,
    )
    for fraction in fractions:
        tag = fraction_tag(fraction)
        k = resolve_k(fraction, dataset.original_n) + dataset.extra
        report.sizes[tag] = k
        for algo, func, args in (
            ("sum", find_sum, (matrix, k, chain)),
            ("peel", peel, (matrix, k)),
            ("inf", find_inf, (matrix, k)),
        ):
            # find_sum refuses sizes below the first band; that cell stays empty
            result, seconds = _timed(func, *args)
            score = Score(seconds)
            if result is not None:
                score.area = normalized(result.band.area, full.area)
                score.width = normalized(result.band.width, full.width)
            report.scores[(tag, algo)] = score
    return report


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def bench_csv(reports) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    if reports:
        writer.writerow(reports[0].columns())
    for report in reports:
        writer.writerow(["" if v is None else v for v in report.row()])
    return out.getvalue()


def bench_table(reports) -> str:
    """Aligned plain-text table, numbers right-aligned."""
    if not reports:
        return ""
    header = reports[0].columns()
    body = [[_cell(v) if v is not None else "-" for v in r.row()] for r in reports]
    widths = [max(len(h), *(len(row[i]) for row in body)) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def rescore(matrix: SeriesMatrix, doc: dict) -> tuple[float, float]:
    """Area and width recomputed from a band document's member list."""
    rows = matrix.values[doc["members"]]
    extent = rows.max(axis=0) - rows.min(axis=0)
    return float(extent.sum()), float(extent.max())
