"""
Benchmark records and their CSV form.

One record is one (experiment, method, dataset/run) measurement. Records are
written to records.csv; summary.csv holds per-group means and standard deviations.
"""

from __future__ import annotations

import csv
import json
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import pandas as pd

from ..errors import InvalidInputError, ParseError

RECORD_FIELDS = ("experiment", "method", "n", "d", "k", "lambda", "seed", "runtime_s", "ot_distance", "meta")
GROUP_FIELDS = ["experiment", "method", "n", "d", "k", "lambda"]


@dataclass(frozen=True)
class BenchRecord:
    experiment: str
    method: str
    n: int
    d: int
    k: Optional[int]
    lam: Optional[float]
    seed: int
    runtime_s: float
    ot_distance: float
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.runtime_s < 0:
            raise InvalidInputError(f"runtime must be nonnegative, got {self.runtime_s}")
        if self.ot_distance < 0:
            raise InvalidInputError(f"distance must be nonnegative, got {self.ot_distance}")

    @property
    def key(self) -> tuple:
        return (self.experiment, self.method, self.seed, self.n, self.d, self.k, self.lam)

    def to_row(self) -> list:
        return [
            self.experiment,
            self.method,
            self.n,
            self.d,
            "" if self.k is None else self.k,
            "" if self.lam is None else repr(float(self.lam)),
            self.seed,
            repr(float(self.runtime_s)),
            repr(float(self.ot_distance)),
            json.dumps(self.meta, sort_keys=True, separators=(",", ":")),
        ]

    @classmethod
    def from_row(cls, row: dict) -> "BenchRecord":
        return cls(
            experiment=row["experiment"],
            method=row["method"],
            n=int(row["n"]),
            d=int(row["d"]),
            k=int(row["k"]) if row["k"] else None,
            lam=float(row["lambda"]) if row["lambda"] else None,
            seed=int(row["seed"]),
            runtime_s=float(row["runtime_s"]),
            ot_distance=float(row["ot_distance"]),
            meta=json.loads(row["meta"]) if row["meta"] else {},
        )


class RecordCollector:
    """Single sink for records coming from (possibly concurrent) cells."""

    def __init__(self):
        self._lock = threading.Lock()
        self._records: list[BenchRecord] = []
        self._keys: set[tuple] = set()

    def add(self, record: BenchRecord) -> None:
        with self._lock:
            if record.key in self._keys:
                raise InvalidInputError(f"duplicate record {record.key}")
            self._keys.add(record.key)
            self._records.append(record)

    def extend(self, records: Iterable[BenchRecord]) -> None:
        for record in records:
            self.add(record)

    @property
    def records(self) -> list[BenchRecord]:
        with self._lock:
            return list(self._records)

    def __len__(self) -> int:
        return len(self._records)


def write_records(records: Iterable[BenchRecord], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(RECORD_FIELDS)
        for record in records:
            writer.writerow(record.to_row())
    return path


def read_records(path: Path) -> list[BenchRecord]:
    path = Path(path)
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != RECORD_FIELDS:
            raise ParseError(f"unexpected header {reader.fieldnames}", path=str(path), line=1)
        records = []
        for line, row in enumerate(reader, start=2):
            try:
                records.append(BenchRecord.from_row(row))
            except (TypeError, ValueError) as exc:
                raise ParseError(str(exc), path=str(path), line=line) from exc
    return records


def records_frame(records: Iterable[BenchRecord]) -> pd.DataFrame:
    rows = [
        {
            "experiment": r.experiment,
            "method": r.method,
            "n": r.n,
            "d": r.d,
            "k": r.k if r.k is not None else math.nan,
            "lambda": r.lam if r.lam is not None else math.nan,
            "seed": r.seed,
            "runtime_s": r.runtime_s,
            "ot_distance": r.ot_distance,
        }
        for r in records
    ]
    return pd.DataFrame(rows, columns=list(RECORD_FIELDS[:-1]))


def summarize(records: Iterable[BenchRecord]) -> pd.DataFrame:
    """Per (experiment, method, n, d, k, lambda) group: count, mean and population std of runtime and distance."""
    frame = records_frame(records)
    grouped = frame.groupby(GROUP_FIELDS, dropna=False, sort=True)
    summary = grouped.agg(
        count=("seed", "size"),
        runtime_mean=("runtime_s", "mean"),
        runtime_std=("runtime_s", lambda s: s.std(ddof=0)),
        distance_mean=("ot_distance", "mean"),
        distance_std=("ot_distance", lambda s: s.std(ddof=0)),
    )
    return summary.reset_index()


def write_summary(summary: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    summary.to_csv(path, index=False, float_format="%.17g")
    return path
