"""``bandctl``: compute confidence bands for time series stored in CSV files.

Exit status is 0 on success, 1 for invalid input or arguments and 2 for
internal errors.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

from . import approx, oracle
from .chain import enumerate_chain
from .ingest import Dataset, ingest_csv
from .model import BandError
from .regband import solve_regband
from .report import band_document, bench_csv, bench_dataset, bench_table, chain_document, dumps, envelope_csv

log = logging.getLogger("bandctl")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_k(text: str):
    """``"3"`` is a size, ``"0.9"`` a fraction of the series count."""
    text = text.strip()
    if re.fullmatch(r"[+-]?\d+", text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid k {text!r}") from None


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("invalid alpha: must be > 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bandctl", description="Confidence bands for time series.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--header", action="store_true", help="first non-blank row is a header")
    source.add_argument("--labels", action="store_true", help="first column holds series labels")
    source.add_argument(
        "--seed", default="index:0", metavar="POLICY",
        help="index:<i> (default index:0), median, mean or row-label:<name>",
    )

    single = argparse.ArgumentParser(add_help=False, parents=[source])
    single.add_argument("input", type=Path, help="CSV file, one series per row")
    single.add_argument("-o", "--out", type=Path, help="write JSON here instead of stdout")
    single.add_argument("--envelope-csv", type=Path, help="also write the envelope curves as CSV")

    sized = argparse.ArgumentParser(add_help=False)
    sized.add_argument("--k", type=parse_k, required=True, help="band size, or a fraction in (0, 1]")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    enum = sub.add_parser("enum", parents=[single], help="all regularized bands")
    enum.add_argument("--precision", choices=("auto", "exact", "float"), default="auto")
    enum.add_argument("--unrestricted", action="store_true", help="search the full instance at every step")

    reg = sub.add_parser("regband", parents=[single], help="regularized band for one alpha")
    reg.add_argument("--alpha", type=positive_float, required=True)

    sm = sub.add_parser("sum", parents=[single, sized], help="small-area band of size k")
    sm.add_argument("--best-of", action="store_true", help="also run peel and keep the smaller area")
    sub.add_parser("inf", parents=[single, sized], help="small-width band of size k")
    sub.add_parser("peel", parents=[single, sized], help="peeling baseline")
    orc = sub.add_parser("oracle", parents=[single, sized], help="exhaustive optimum (small n)")
    orc.add_argument("--objective", choices=("area", "width"), default="area")
    orc.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP, help="largest n to enumerate")

    bench = sub.add_parser("bench", parents=[source], help="benchmark report over datasets")
    bench.add_argument("inputs", nargs="*", type=Path, help="CSV files")
    bench.add_argument(
        "--synthetic", action="append", default=[], metavar="FLAVOR:NxM",
        help=f"generated dataset, flavor one of {', '.join(oracle.FLAVORS)}; repeatable",
    )
    bench.add_argument("--rng-seed", type=int, default=0, help="seed for generated datasets (default 0)")
    bench.add_argument("--csv", type=Path, help="write the machine-readable report here")
    return parser


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def _resolve_size(dataset: Dataset, k) -> int:
    return approx.resolve_k(k, dataset.original_n) + dataset.extra


def _run_single(args) -> None:
    if args.envelope_csv is not None and args.out is not None and args.envelope_csv.resolve() == args.out.resolve():
        raise UsageError("contradictory flags: --out and --envelope-csv name the same file")
    dataset = ingest_csv(args.input, header=args.header, labels=args.labels, seed=args.seed)
    matrix = dataset.matrix
    log.info("read %s: n=%d m=%d seed=%d", args.input, matrix.n, matrix.m, matrix.seed_index)

    if args.command == "enum":
        exact = {"auto": None, "exact": True, "float": False}[args.precision]
        chain = enumerate_chain(matrix, restrict=not args.unrestricted, exact=exact)
        if chain.flagged:
            log.warning("chain enumeration hit rounding trouble; results may be incomplete")
        doc, bands = chain_document(dataset, chain), chain.bands
    elif args.command == "regband":
        sol = solve_regband(matrix, args.alpha)
        doc = band_document(dataset, sol.band, "regband", sol.band.size, alpha=sol.alpha, objective=sol.objective)
        bands = [sol.band]
    else:
        k = _resolve_size(dataset, args.k)
        if dataset.extra:
            log.info("seed is synthesized; band size raised from %d to %d", k - 1, k)
        extra = {}
        if args.command == "sum":
            result = approx.best_of(matrix, k) if args.best_of else approx.find_sum(matrix, k)
            if result.algorithm == "findsum":
                extra = {"base_band": result.base_band_index, "candidate_mode": result.candidate_mode}
            if args.best_of:
                extra["best_of"] = True
            band, name = result.band, result.algorithm
        elif args.command == "inf":
            band, name = approx.find_inf(matrix, k).band, "findinf"
        elif args.command == "peel":
            band, name = approx.peel(matrix, k).band, "peel"
        else:
            solver = oracle.exact_sumband if args.objective == "area" else oracle.exact_infband
            band, name = solver(matrix, k, cap=args.cap), "oracle"
            extra = {"objective": args.objective}
        doc = band_document(dataset, band, name, k, k_requested=k - dataset.extra, **extra)
        bands = [band]

    _write(args.out, dumps(doc))
    if args.envelope_csv is not None:
        args.envelope_csv.write_text(envelope_csv(bands), encoding="utf-8")


def parse_synthetic(text: str, rng_seed: int) -> Dataset:
    match = re.fullmatch(r"([a-z-]+):(\d+)x(\d+)", text.strip())
    if not match or match.group(1) not in oracle.FLAVORS:
        raise UsageError(f"bad --synthetic {text!r}; expected FLAVOR:NxM with FLAVOR in {', '.join(oracle.FLAVORS)}")
    flavor, n, m = match.group(1), int(match.group(2)), int(match.group(3))
    spec = oracle.InstanceSpec(
        n=n, m=m, rng_seed=rng_seed, flavor=flavor, resolution=0.01,
        outliers=n // 20 if flavor == "clustered" else 0,
    )
    matrix = oracle.generate(spec)
    return Dataset(f"{flavor}-{n}x{m}", matrix, "index:0")


def _run_bench(args) -> None:
    if not args.inputs and not args.synthetic:
        raise UsageError("bench needs at least one CSV file or --synthetic dataset")
    datasets = [ingest_csv(p, header=args.header, labels=args.labels, seed=args.seed) for p in args.inputs]
    if args.seed != "index:0" and args.synthetic:
        log.info("--seed applies to CSV inputs only; generated datasets use series 0")
    datasets += [parse_synthetic(s, args.rng_seed) for s in args.synthetic]
    reports = []
    for dataset in datasets:
        log.info("bench %s (n=%d, m=%d)", dataset.name, dataset.original_n, dataset.matrix.m)
        reports.append(bench_dataset(dataset))
    if args.csv is not None:
        args.csv.write_text(bench_csv(reports), encoding="utf-8")
    sys.stdout.write(bench_table(reports))


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "bench":
            _run_bench(args)
        else:
            _run_single(args)
    except (UsageError, BandError) as exc:
        print(f"bandctl: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"bandctl: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0
