"""
Card-Krueger minimum-wage survey.

Reads the normalized CSV (one row per restaurant, wave-2 columns suffixed with
"2", missing values written as "."), drops restaurants with a missing value in
any selected column of either wave, and splits them into Pennsylvania (control)
and New Jersey (treatment) samples at both waves.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from .errors import InvalidInputError, ParseError
from .measures import EmpiricalMeasure

logger = logging.getLogger(__name__)

MISSING = "."
NJ = "NJ-treatment"
PA = "PA-control"

FT = "empft"
PT = "emppt"
COVARIATES = ("hrsopen", "open", "nmgrs", "nregs", "inctime", "psoda", "pentree")
BASE_COLUMNS = (FT, PT) + COVARIATES
CSV_COLUMNS = ("state",) + tuple(c for base in (FT, PT) + COVARIATES for c in (base, base + "2"))

FT_PT = (FT, PT)
ALL_COLUMNS = BASE_COLUMNS

_ALIASES = {"ft": FT, "pt": PT}
_STATES = {"1": NJ, "nj": NJ, "0": PA, "pa": PA}


@dataclass(frozen=True)
class RestaurantRecord:
    """One surveyed restaurant; None marks a missing value."""

    state: str
    wave1: dict[str, Optional[float]]
    wave2: dict[str, Optional[float]]

    @property
    def is_treatment(self) -> bool:
        return self.state == NJ

    def complete(self, columns: Iterable[str]) -> bool:
        return all(self.wave1[c] is not None and self.wave2[c] is not None for c in columns)


@dataclass(frozen=True, eq=False)
class CKDataset:
    """Control and treatment samples at both waves over the selected columns."""

    y0c: EmpiricalMeasure
    y1c: EmpiricalMeasure
    y0t: EmpiricalMeasure
    y1t: EmpiricalMeasure
    columns: tuple[str, ...]

    @property
    def n_control(self) -> int:
        return self.y0c.n

    @property
    def n_treatment(self) -> int:
        return self.y0t.n


def fte(ft: float, pt: float) -> float:
    """Full-time equivalent employment: FT + 0.5 * PT."""
    if ft < 0 or pt < 0:
        raise InvalidInputError(f"employee counts must be nonnegative, got ft={ft}, pt={pt}")
    return ft + 0.5 * pt


def normalize_columns(columns: Iterable[str]) -> tuple[str, ...]:
    """Map user column names (any case, ft/pt aliases) onto base column names."""
    selected = []
    for name in columns:
        key = _ALIASES.get(name.strip().lower(), name.strip().lower())
        if key not in BASE_COLUMNS:
            raise InvalidInputError(f"unknown column {name!r}; expected one of {', '.join(BASE_COLUMNS)}")
        if key not in selected:
            selected.append(key)
    if not selected:
        raise InvalidInputError("empty column selection")
    return tuple(selected)


def _parse_value(raw, column: str, path: str, line: int) -> Optional[float]:
    if not isinstance(raw, str):
        raise ParseError(f"missing field {column!r}", path=path, line=line)
    raw = raw.strip()
    if raw == MISSING:
        return None
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"invalid number {raw!r} in column {column!r}", path=path, line=line) from None
    if not np.isfinite(value) or value < 0:
        raise ParseError(f"column {column!r} must be a nonnegative number, got {raw!r}", path=path, line=line)
    return value


def read_ck_records(path: Path) -> list[RestaurantRecord]:
    """Parse every row of the normalized CSV."""
    path = str(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except FileNotFoundError as exc:
        raise InvalidInputError(f"CK file not found: {path}") from exc
    except pd.errors.EmptyDataError as exc:
        raise ParseError("file is empty", path=path, line=1) from exc
    except pd.errors.ParserError as exc:
        found = re.search(r"line (\d+)", str(exc))
        raise ParseError(str(exc), path=path, line=int(found.group(1)) if found else None) from exc
    frame.columns = [c.strip().lower() for c in frame.columns]
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise ParseError(f"missing columns: {', '.join(missing)}", path=path, line=1)

    records = []
    for offset, values in enumerate(frame.to_dict("records")):
        line = offset + 2
        state_raw = values["state"]
        state = _STATES.get(state_raw.strip().lower()) if isinstance(state_raw, str) else None
        if state is None:
            raise ParseError(f"unknown state {state_raw!r}", path=path, line=line)
        wave1 = {c: _parse_value(values[c], c, path, line) for c in BASE_COLUMNS}
        wave2 = {c: _parse_value(values[c + "2"], c + "2", path, line) for c in BASE_COLUMNS}
        records.append(RestaurantRecord(state, wave1, wave2))
    logger.debug("read %d restaurant records from %s", len(records), path)
    return records


def _measure(records: list[RestaurantRecord], columns: tuple[str, ...], wave: str, group: str) -> EmpiricalMeasure:
    rows = [[getattr(r, wave)[c] for c in columns] for r in records]
    if not rows:
        raise InvalidInputError(f"no complete {group} records for columns {', '.join(columns)}")
    return EmpiricalMeasure.uniform(np.asarray(rows, dtype=np.float64))


def load_ck(path: Path, columns: Iterable[str], filter_on: Iterable[str] | None = None) -> CKDataset:
    """
    Load the selected columns as four empirical measures.

    A restaurant is kept only if every column in `columns` and `filter_on` is present at
    both waves. Wave 1 gives the t=0 measures, wave 2 the t=1 measures.
    """
    selected = normalize_columns(columns)
    required = selected + tuple(c for c in normalize_columns(filter_on) if c not in selected) if filter_on else selected
    records = [r for r in read_ck_records(path) if r.complete(required)]
    control = [r for r in records if not r.is_treatment]
    treatment = [r for r in records if r.is_treatment]
    logger.info("CK selection %s: %d control / %d treatment restaurants", ",".join(selected), len(control), len(treatment))
    return CKDataset(
        y0c=_measure(control, selected, "wave1", "control"),
        y1c=_measure(control, selected, "wave2", "control"),
        y0t=_measure(treatment, selected, "wave1", "treatment"),
        y1t=_measure(treatment, selected, "wave2", "treatment"),
        columns=selected,
    )


def ck_fte_measures(dataset: CKDataset) -> CKDataset:
    """Collapse an FT/PT dataset to one-dimensional FTE measures."""
    if dataset.columns[:2] != FT_PT:
        raise InvalidInputError("FTE needs a dataset whose first two columns are FT and PT")

    def collapse(m: EmpiricalMeasure) -> EmpiricalMeasure:
        values = [fte(ft, pt) for ft, pt in m.points[:, :2]]
        return EmpiricalMeasure(np.asarray(values)[:, None], m.weights)

    return CKDataset(
        y0c=collapse(dataset.y0c),
        y1c=collapse(dataset.y1c),
        y0t=collapse(dataset.y0t),
        y1t=collapse(dataset.y1t),
        columns=("fte",),
    )
