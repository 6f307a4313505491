"""Confidence bands for collections of time series.

A band is a subset of the series that contains a designated seed series;
its envelope is the per-position minimum and maximum. The package finds
bands with small envelope area or width: exactly through minimum cuts for the
area-per-series trade-off, approximately for a fixed number of series.
"""

from .approx import ApproxResult, best_of, find_inf, find_sum, greedy_extend, peel, resolve_k
from .chain import BandChain, delta_gap, enumerate_chain
from .flownet import CutResult, FlowNetwork
from .ingest import Dataset, ParseError, attach_seed, ingest_csv, read_csv
from .model import (
    Band,
    BandError,
    SeriesMatrix,
    area_score,
    derive_seed,
    envelope,
    reg_score,
    width_score,
)
from .oracle import InstanceSpec, exact_infband, exact_regband, exact_sumband, generate
from .regband import RegBandSolution, solve_regband

__all__ = [
    "ApproxResult", "Band", "BandChain", "BandError", "CutResult", "Dataset", "FlowNetwork",
    "InstanceSpec", "ParseError", "RegBandSolution", "SeriesMatrix",
    "area_score", "attach_seed", "best_of", "delta_gap", "derive_seed", "enumerate_chain",
    "envelope", "exact_infband", "exact_regband", "exact_sumband", "find_inf", "find_sum",
    "generate", "greedy_extend", "ingest_csv", "peel", "read_csv", "reg_score", "resolve_k",
    "solve_regband", "width_score",
]
