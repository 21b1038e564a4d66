"""Command-line entry point.

Subcommands::

    gaussmaj check 1.15,0.88 1.25,0.60
    gaussmaj scan --depth 1024 --out map.csv --figure map.png
    gaussmaj matrix amp 2 --rows 3 --cols 3
    gaussmaj spectrum 1.15,0.88 --depth 10
    gaussmaj plot map.csv --out map.png

Every option can also come from an INI file passed with ``--config``; keys
use the long option names (``slack-ceiling`` or ``slack_ceiling``) in a
``[gaussmaj]`` section or a section named after the subcommand.  Options
given on the command line win.
"""

from __future__ import annotations

import argparse
import configparser
import contextlib
import json
import math
import sys
import time
from typing import Sequence

from gaussmaj.channels import ChannelKind, ChannelSpec
from gaussmaj.classifier import Category, ConversionVerdict, classify
from gaussmaj.fock_spectra import (
    DEFAULT_DEPTH,
    ProductSpectrum,
    SqueezingVector,
    squeezing_to_db,
    top_k,
)
from gaussmaj.majorization import DEFAULT_SLACK_CEILING, DEFAULT_TOL
from gaussmaj.scan import (
    WRITERS,
    AxisRange,
    ScanConfig,
    read_csv,
    run_scan,
)

EXIT_UNDECIDED = 3

DEFAULTS = {
    "depth": DEFAULT_DEPTH,
    "tol": DEFAULT_TOL,
    "slack_ceiling": DEFAULT_SLACK_CEILING,
    "jobs": 1,
    "base": "1.15,0.88",
    "frame": "diagonal",
    "grid": "0:1.2:0.01,0.8:3.2:0.01",
    "rows": 5,
    "cols": 5,
}
CONVERTERS = {"depth": int, "tol": float, "slack_ceiling": float, "jobs": int, "rows": int, "cols": int}


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _vector(text: str) -> SqueezingVector:
    try:
        return SqueezingVector.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _load_config(path: str | None, command: str) -> dict:
    if not path:
        return {}
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise SystemExit(f"gaussmaj: cannot read config file {path!r}")
    values = {}
    for section in ("gaussmaj", command):
        if parser.has_section(section):
            for key, val in parser.items(section):
                values[key.replace("-", "_")] = val
    return values


def _resolve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Fill unset options from the config file, then from built-in defaults."""
    file_values = _load_config(getattr(args, "config", None), args.command)
    for key, val in vars(args).copy().items():
        if val is not None:
            continue
        if key in file_values:
            raw = file_values[key]
            try:
                val = CONVERTERS.get(key, str)(raw)
            except ValueError:
                parser.error(f"config value {key}={raw!r} is invalid")
        elif key in DEFAULTS:
            val = DEFAULTS[key]
        setattr(args, key, val)
    return args


def verdict_record(r, r_prime, verdict: ConversionVerdict) -> dict:
    ev = verdict.evidence
    num = ev.numeric
    return {
        "r": list(r),
        "r_prime": list(r_prime),
        "category": verdict.category.value,
        "glocc_forward": ev.glocc_forward,
        "glocc_reverse": ev.glocc_reverse,
        "criterion_forward": ev.criterion_forward,
        "criterion_reverse": ev.criterion_reverse,
        "product_forward": ev.product_forward,
        "product_reverse": ev.product_reverse,
        "identical": ev.identical,
        "numeric": None
        if num is None
        else {
            "relation": num.relation.value,
            "depth": num.depth,
            "slack": num.slack,
            "witness_forward": num.witness_forward,
            "witness_reverse": num.witness_reverse,
            "margin_forward": num.margin_forward,
            "margin_reverse": num.margin_reverse,
        },
    }


def cmd_check(args) -> int:
    r, r_prime = args.r, args.r_prime
    if len(r) != len(r_prime):
        print("gaussmaj check: both vectors need the same number of modes", file=sys.stderr)
        return 2
    verdict = classify(r, r_prime, depth=args.depth, tol=args.tol, slack_ceiling=args.slack_ceiling)
    record = verdict_record(r, r_prime, verdict)
    if args.format == "json":
        print(json.dumps(record))
    else:
        ev = verdict.evidence
        db = ", ".join(f"{squeezing_to_db(v):.2f} dB" for v in r)
        db_p = ", ".join(f"{squeezing_to_db(v):.2f} dB" for v in r_prime)
        print(f"initial r  = ({r}) [{db}]")
        print(f"final   r' = ({r_prime}) [{db_p}]")
        print(f"category: {verdict.category.value}")
        print(f"  Gaussian condition r >= r' : {ev.glocc_forward}")
        print(f"  Gaussian condition r' >= r : {ev.glocc_reverse}")
        print(f"  channel product forward    : {_fmt(ev.product_forward)} (holds: {ev.criterion_forward})")
        print(f"  channel product reverse    : {_fmt(ev.product_reverse)} (holds: {ev.criterion_reverse})")
        if ev.numeric is not None:
            n = ev.numeric
            print(f"  numeric relation (depth {n.depth}) : {n.relation.value}")
            print(f"    certification slack (tail + tol): {_fmt(n.slack)}")
            print(f"    witness r' not majorizing r: {n.witness_forward}  margin {_fmt(n.margin_forward)}")
            print(f"    witness r not majorizing r': {n.witness_reverse}  margin {_fmt(n.margin_reverse)}")
        print(json.dumps(record))
    return EXIT_UNDECIDED if verdict.category is Category.UNDECIDED else 0


def _open_out(path: str | None):
    if path is None or path == "-":
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", newline="")


def cmd_scan(args, parser) -> int:
    try:
        x_text, y_text = args.grid.split(",")
        config = ScanConfig(
            base_r=_vector(args.base),
            frame=args.frame,
            x_range=AxisRange.parse(x_text),
            y_range=AxisRange.parse(y_text),
            depth=args.depth,
            tol=args.tol,
            slack_ceiling=args.slack_ceiling,
            jobs=args.jobs,
        )
    except (ValueError, argparse.ArgumentTypeError) as exc:
        parser.error(str(exc))
    fmt = args.format or "csv"
    if fmt not in WRITERS:
        parser.error(f"scan format must be one of {sorted(WRITERS)}")

    start = time.perf_counter()
    records, summary = run_scan(config)
    elapsed = time.perf_counter() - start
    try:
        with _open_out(args.out) as fh:
            WRITERS[fmt](records, fh, config)
    except OSError as exc:
        print(f"gaussmaj scan: cannot write output: {exc}", file=sys.stderr)
        return 1
    if args.figure:
        from gaussmaj.plotting import plot_scan

        plot_scan(records, config.base_r.r, args.figure)
    log = sys.stderr if args.out in (None, "-") else sys.stdout
    for line in summary.lines():
        print(line, file=log)
    print(f"elapsed: {elapsed:.2f} s", file=log)
    return 0


def cmd_matrix(args, parser) -> int:
    try:
        kind = ChannelKind(args.kind.upper())
        spec = ChannelSpec(kind, args.parameter)
    except ValueError as exc:
        parser.error(str(exc))
    if args.rows < 1 or args.cols < 1:
        parser.error("rows and cols must be positive")
    view = spec.matrix()
    block = view.dense(args.rows, args.cols)
    try:
        with _open_out(args.out) as fh:
            fh.write(f"# {kind.value} parameter={_fmt(spec.parameter)} rows={args.rows} cols={args.cols}\n")
            for row in block:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
            fh.write("# column_sums," + ",".join(_fmt(math.fsum(block[:, j].tolist())) for j in range(args.cols)) + "\n")
            fh.write("# row_sums," + ",".join(_fmt(math.fsum(block[i, :].tolist())) for i in range(args.rows)) + "\n")
    except OSError as exc:
        print(f"gaussmaj matrix: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_spectrum(args) -> int:
    ranked = top_k(ProductSpectrum.from_squeezing(args.r), args.depth)
    sums = ranked.padded_cumulative
    with _open_out(args.out) as fh:
        fh.write(f"# spectrum r=({args.r}) depth={ranked.depth}\n")
        fh.write("k,eigenvalue,partial_sum\n")
        for k in range(ranked.depth):
            value = ranked.values[k] if k < len(ranked.values) else 0.0
            fh.write(f"{k + 1},{_fmt(value)},{_fmt(sums[k])}\n")
        fh.write(f"# captured_mass={_fmt(ranked.captured_mass)} tail_mass={_fmt(ranked.tail_mass)}\n")
    return 0


def cmd_plot(args) -> int:
    from gaussmaj.plotting import plot_scan

    records = read_csv(args.csv)
    plot_scan(records, args.base.r if args.base else _base_from_header(args.csv), args.out)
    return 0


def _base_from_header(path: str) -> tuple[float, ...]:
    with open(path) as fh:
        for line in fh:
            if line.startswith("# base_r="):
                return SqueezingVector.parse(line.split()[1].split("=", 1)[1]).r
    raise SystemExit(f"gaussmaj plot: no base_r in {path}; pass --base")


def _add_numeric_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--depth", type=int, help=f"enumeration depth K (default {DEFAULT_DEPTH})")
    p.add_argument("--tol", type=float, help=f"partial-sum tolerance (default {DEFAULT_TOL})")
    p.add_argument(
        "--slack-ceiling",
        type=float,
        help=f"largest certification slack accepted (default {DEFAULT_SLACK_CEILING})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussmaj",
        description="LOCC convertibility of pure bipartite Gaussian states in normal form.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify a single pair of squeezing vectors")
    p.add_argument("r", type=_vector, help="initial squeezing vector, e.g. 1.15,0.88")
    p.add_argument("r_prime", type=_vector, help="final squeezing vector")
    _add_numeric_options(p)
    p.add_argument("--format", choices=["text", "json"], help="output format (default text)")
    p.add_argument("--config")

    p = sub.add_parser("scan", help="classify a grid of final states")
    p.add_argument("--base", help="initial squeezing vector (default 1.15,0.88)")
    p.add_argument("--frame", choices=["diagonal", "direct"], help="grid axes (default diagonal)")
    p.add_argument("--grid", help="x0:x1:dx,y0:y1:dy (default 0:1.2:0.01,0.8:3.2:0.01)")
    _add_numeric_options(p)
    p.add_argument("--jobs", type=int, help="worker processes (default 1)")
    p.add_argument("--format", choices=sorted(WRITERS), help="output format (default csv)")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--figure", help="also render the map to this image file")
    p.add_argument("--config")

    p = sub.add_parser("matrix", help="dump a truncated channel matrix as CSV")
    p.add_argument("kind", choices=["amp", "loss", "AMP", "LOSS"])
    p.add_argument("parameter", type=float, help="gain G >= 1 or transmittance 0 <= eta <= 1")
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--out")
    p.add_argument("--config")

    p = sub.add_parser("spectrum", help="list the largest reduced-state eigenvalues")
    p.add_argument("r", type=_vector)
    p.add_argument("--depth", type=int)
    p.add_argument("--out")
    p.add_argument("--config")

    p = sub.add_parser("plot", help="render a scan CSV as an image")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    p.add_argument("--base", type=_vector, help="initial vector (default: read from CSV header)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "plot":
        return cmd_plot(args)
    args = _resolve(args, parser)
    if args.command == "check":
        return cmd_check(args)
    if args.command == "scan":
        return cmd_scan(args, parser)
    if args.command == "matrix":
        return cmd_matrix(args, parser)
    return cmd_spectrum(args)


if __name__ == "__main__":
    sys.exit(main())
