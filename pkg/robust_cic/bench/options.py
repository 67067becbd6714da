"""
Options shared by the bench subcommands and the helpers that resolve them
against the TOML configuration.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import click

from ..config import resolve
from ..errors import InvalidInputError
from ..subspace import DEFAULT_K
from .records import BenchRecord, summarize, write_records, write_summary
from .report import print_summary
from .runner import DEFAULT_LAMBDA, MethodSettings

logger = logging.getLogger(__name__)

DEFAULT_OUT = "results"
DEFAULT_SEED = 0
DEFAULT_REPEATS = 10


def _split(value) -> list[str]:
    if isinstance(value, (list, tuple)):
        return [str(v) for v in value]
    return [part for part in str(value).replace(" ", "").split(",") if part]


def int_list(value) -> list[int]:
    """Parse "500,1000" (or a TOML list) into integers."""
    try:
        return [int(v) for v in _split(value)]
    except ValueError as exc:
        raise InvalidInputError(f"expected comma-separated integers, got {value!r}") from exc


def float_list(value) -> list[float]:
    try:
        return [float(v) for v in _split(value)]
    except ValueError as exc:
        raise InvalidInputError(f"expected comma-separated numbers, got {value!r}") from exc


_COMMON_OPTIONS = {
    "seed": click.option("--seed", type=int, default=None, help="First dataset seed."),
    "repeats": click.option("--repeats", type=int, default=None, help="Number of datasets (seeds seed..seed+repeats-1)."),
    "out": click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory."),
    "k": click.option("--k", "k", type=int, default=None, help="Number of random directions for rot."),
    "lam": click.option("--lambda", "lam", type=float, default=None, help="Sinkhorn regularization."),
    "metric_subsample": click.option("--metric-subsample", type=int, default=None, help="Evaluate distances on M-atom subsamples."),
    "jobs": click.option("--jobs", type=int, default=None, help="Cells run in parallel."),
}


def common_options(func=None, *, skip: tuple[str, ...] = ()):
    """
    Attach --seed, --repeats, --out, --k, --lambda, --metric-subsample and --jobs.

    Use as `@common_options`, or `@common_options(skip=("lam",))` for a command that has
    no use for some of them; skipped options are not accepted on its command line.
    """
    unknown = set(skip) - _COMMON_OPTIONS.keys()
    if unknown:
        raise ValueError(f"unknown common options {sorted(unknown)}")

    def attach(func):
        for name, option in reversed(_COMMON_OPTIONS.items()):
            if name not in skip:
                func = option(func)
        return func

    return attach(func) if func is not None else attach


@dataclass(frozen=True)
class BenchOptions:
    seed: int
    repeats: int
    out: Path
    k: int
    lam: float
    metric_subsample: Optional[int]
    jobs: int

    @property
    def seeds(self) -> list[int]:
        return list(range(self.seed, self.seed + self.repeats))

    def settings(self, **overrides) -> MethodSettings:
        values = dict(k=self.k, lam=self.lam, metric_subsample=self.metric_subsample)
        values.update(overrides)
        return MethodSettings(**values)


def bench_options(cfg: dict, section: str, seed, repeats, out, k, lam, metric_subsample, jobs, default_repeats: int = DEFAULT_REPEATS) -> BenchOptions:
    options = BenchOptions(
        seed=int(resolve(cfg, section, "seed", seed, DEFAULT_SEED)),
        repeats=int(resolve(cfg, section, "repeats", repeats, default_repeats)),
        out=Path(resolve(cfg, section, "out", out, DEFAULT_OUT)),
        k=int(resolve(cfg, section, "k", k, DEFAULT_K)),
        lam=float(resolve(cfg, section, "lambda", lam, DEFAULT_LAMBDA)),
        metric_subsample=resolve(cfg, section, "metric_subsample", metric_subsample, None),
        jobs=int(resolve(cfg, section, "jobs", jobs, 1)),
    )
    if options.repeats < 1:
        raise InvalidInputError(f"repeats must be >= 1, got {options.repeats}")
    if options.k < 1:
        raise InvalidInputError(f"k must be >= 1, got {options.k}")
    if options.lam <= 0:
        raise InvalidInputError(f"lambda must be > 0, got {options.lam}")
    if options.metric_subsample is not None and int(options.metric_subsample) < 1:
        raise InvalidInputError(f"metric subsample must be >= 1, got {options.metric_subsample}")
    if options.metric_subsample is not None:
        logger.warning("distances are evaluated on %s-atom subsamples", options.metric_subsample)
    return options


def finish(records: Iterable[BenchRecord], out: Path, title: str) -> None:
    """Write records.csv and summary.csv under `out` and print the summary table."""
    records = list(records)
    out = Path(out)
    write_records(records, out / "records.csv")
    summary = summarize(records)
    write_summary(summary, out / "summary.csv")
    print_summary(summary, title=title)
    click.echo(f"{len(records)} records written to {out / 'records.csv'}")
