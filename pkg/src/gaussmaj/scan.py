"""Grid scans of the final-state plane for a fixed two-mode initial state.

Points are addressed either in the diagonal frame ``(r'_1 - r'_2, r'_1 + r'_2)``
used to draw the classification map, or directly as ``(r'_1, r'_2)``.
Output order is row-major (outer loop over the y axis) whatever the
number of worker processes.
"""

from __future__ import annotations

import collections
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Sequence

from gaussmaj.classifier import Category, classify
from gaussmaj.fock_spectra import DEFAULT_DEPTH, SqueezingVector
from gaussmaj.majorization import DEFAULT_SLACK_CEILING, DEFAULT_TOL

SCHEMA = "gaussmaj-scan v1"
FIELDS = (
    "r1_prime",
    "r2_prime",
    "x",
    "y",
    "category",
    "product_forward",
    "product_reverse",
    "numeric_relation",
    "numeric_slack",
    "witness_forward",
    "witness_reverse",
)
FRAMES = ("diagonal", "direct")

# grid coordinates are snapped to this many decimals so that points meant to
# sit on a quadrant boundary land exactly on it
_GRID_DECIMALS = 12


@dataclass(frozen=True)
class AxisRange:
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("range bounds must be finite")
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step!r}")
        if self.stop < self.start:
            raise ValueError(f"empty range {self.start!r}:{self.stop!r}")

    @classmethod
    def parse(cls, text: str) -> "AxisRange":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected start:stop:step, got {text!r}")
        return cls(*(float(p) for p in parts))

    def values(self) -> list[float]:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, _GRID_DECIMALS) for i in range(count)]

    def __str__(self) -> str:
        return f"{self.start!r}:{self.stop!r}:{self.step!r}"


@dataclass(frozen=True)
class ScanConfig:
    base_r: SqueezingVector = field(default_factory=lambda: SqueezingVector((1.15, 0.88)))
    frame: str = "diagonal"
    x_range: AxisRange = AxisRange(0.0, 1.2, 0.01)
    y_range: AxisRange = AxisRange(0.8, 3.2, 0.01)
    depth: int = DEFAULT_DEPTH
    tol: float = DEFAULT_TOL
    slack_ceiling: float = DEFAULT_SLACK_CEILING
    jobs: int = 1

    def __post_init__(self):
        if len(self.base_r) != 2:
            raise ValueError("grid scans are defined for two-mode states")
        if self.frame not in FRAMES:
            raise ValueError(f"frame must be one of {FRAMES}, got {self.frame!r}")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def to_point(self, x: float, y: float) -> tuple[float, float]:
        """Grid coordinates to ``(r'_1, r'_2)``."""
        if self.frame == "direct":
            return x, y
        return round((x + y) / 2, _GRID_DECIMALS), round((y - x) / 2, _GRID_DECIMALS)

    def rows(self) -> list[list[tuple[float, float]]]:
        xs = self.x_range.values()
        return [[(x, y) for x in xs] for y in self.y_range.values()]


@dataclass(frozen=True)
class ScanRecord:
    r1_prime: float
    r2_prime: float
    x: float
    y: float
    category: Category
    product_forward: float
    product_reverse: float
    numeric_relation: str | None = None
    numeric_slack: float | None = None
    witness_forward: int | None = None
    witness_reverse: int | None = None

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f) for f in FIELDS)


@dataclass
class ScanSummary:
    counts: collections.Counter
    skipped: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def lines(self) -> list[str]:
        out = [f"{c.value}: {self.counts.get(c, 0)}" for c in Category]
        out.append(f"skipped (r'_1 >= r'_2 >= 0 violated): {self.skipped}")
        out.append(f"classified: {self.total}")
        return out


def _scan_row(task) -> tuple[list[ScanRecord], int]:
    config, row = task
    base = config.base_r
    records = []
    skipped = 0
    for gx, gy in row:
        r1, r2 = config.to_point(gx, gy)
        if not r1 >= r2 >= 0:
            skipped += 1
            continue
        verdict = classify(
            base, (r1, r2), depth=config.depth, tol=config.tol, slack_ceiling=config.slack_ceiling
        )
        ev = verdict.evidence
        num = ev.numeric
        records.append(
            ScanRecord(
                r1,
                r2,
                round(r1 - r2, _GRID_DECIMALS),
                round(r1 + r2, _GRID_DECIMALS),
                verdict.category,
                ev.product_forward,
                ev.product_reverse,
                None if num is None else num.relation.value,
                None if num is None else num.slack,
                None if num is None else num.witness_forward,
                None if num is None else num.witness_reverse,
            )
        )
    return records, skipped


def iter_scan(config: ScanConfig) -> Iterator[tuple[list[ScanRecord], int]]:
    """Yield ``(records, skipped)`` per grid row, in row order."""
    tasks = [(config, row) for row in config.rows()]
    if config.jobs == 1:
        yield from map(_scan_row, tasks)
        return
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        chunk = max(1, len(tasks) // (4 * config.jobs))
        yield from pool.map(_scan_row, tasks, chunksize=chunk)


def run_scan(config: ScanConfig) -> tuple[list[ScanRecord], ScanSummary]:
    records: list[ScanRecord] = []
    summary = ScanSummary(collections.Counter())
    for row, skipped in iter_scan(config):
        records.extend(row)
        summary.skipped += skipped
        summary.counts.update(r.category for r in row)
    return records, summary


def _fmt_number(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    return format(float(v), ".17g")


def _fmt_cell(v) -> str:
    if isinstance(v, Category):
        return v.value
    if isinstance(v, str):
        return v
    return _fmt_number(v)


def header_lines(config: ScanConfig) -> list[str]:
    return [
        f"# {SCHEMA}",
        f"# base_r={config.base_r} frame={config.frame} grid={config.x_range},{config.y_range} "
        f"depth={config.depth} tol={config.tol!r} slack_ceiling={config.slack_ceiling!r}",
    ]


def write_csv(records: Iterable[ScanRecord], stream: IO[str], config: ScanConfig) -> None:
    for line in header_lines(config):
        stream.write(line + "\n")
    stream.write(",".join(FIELDS) + "\n")
    for rec in records:
        stream.write(",".join(_fmt_cell(v) for v in rec.as_tuple()) + "\n")


def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, Category):
        return json.dumps(v.value)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, float) and not math.isfinite(v):
        return "null"
    return _fmt_number(v)


def write_jsonl(records: Iterable[ScanRecord], stream: IO[str], config: ScanConfig) -> None:
    """One JSON object per line with keys in schema order."""
    for rec in records:
        body = ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in zip(FIELDS, rec.as_tuple()))
        stream.write("{" + body + "}\n")


WRITERS = {"csv": write_csv, "jsonl": write_jsonl}


def _parse_optional(text: str, kind):
    return None if text == "" else kind(text)


def read_csv(path: str | os.PathLike) -> list[ScanRecord]:
    """Read records written by :func:`write_csv`."""
    records = []
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    if not lines or lines[0].strip().split(",") != list(FIELDS):
        raise ValueError(f"{path}: not a {SCHEMA} CSV file")
    for ln in lines[1:]:
        cells = ln.rstrip("\n").split(",")
        records.append(
            ScanRecord(
                float(cells[0]),
                float(cells[1]),
                float(cells[2]),
                float(cells[3]),
                Category(cells[4]),
                float(cells[5]),
                float(cells[6]),
                _parse_optional(cells[7], str),
                _parse_optional(cells[8], float),
                _parse_optional(cells[9], int),
                _parse_optional(cells[10], int),
            )
        )
    return records


def quadrant(base_r: Sequence[float], r1_prime: float, r2_prime: float) -> str:
    """Which of the four sign patterns ``(r'_1 - r_1, r'_2 - r_2)`` falls in.

    Returns ``"lower"`` (both non-increasing), ``"upper"`` (both
    non-decreasing, one strictly), ``"right"`` (first grows, second shrinks)
    or ``"left"``.  The closed lower quadrant takes precedence on the
    boundary.
    """
    d1, d2 = r1_prime - base_r[0], r2_prime - base_r[1]
    if d1 <= 0 and d2 <= 0:
        return "lower"
    if d1 >= 0 and d2 >= 0:
        return "upper"
    return "right" if d1 > 0 else "left"
