"""
Varying-n experiment plugin for robust-cic.
With d fixed at 2, runs cic, ot, sinkhorn and rot on growing sample sizes.
"""

from dataclasses import replace
from functools import partial
from typing import Optional

import click

from robust_cic.bench.options import bench_options, common_options, finish, int_list
from robust_cic.bench.records import BenchRecord, RecordCollector
from robust_cic.bench.runner import Cell, MethodSettings, run_cell, run_cells
from robust_cic.config import resolve
from robust_cic.datagen import BIVARIATE_GAMMA, GAUSSIAN_MIXTURE_2D, ILLUSTRATIVE_PAIR, generate_quad, latent_spec
from robust_cic.errors import InvalidInputError
from robust_cic.estimators import CIC, OT, ROT, SINKHORN

EXPERIMENT = "varying-n"
SECTION = "bench-n"
METHODS = (CIC, OT, SINKHORN, ROT)
DEFAULT_N_VALUES = [500, 1000, 2000, 5000]


def run_varying_n(
    family: str,
    n_values: list[int],
    seeds: list[int],
    lam: float,
    settings: Optional[MethodSettings] = None,
    jobs: int = 1,
) -> list[BenchRecord]:
    if family not in (BIVARIATE_GAMMA, GAUSSIAN_MIXTURE_2D):
        raise InvalidInputError(f"varying-n runs need a 2D family, got {family!r}")
    if not n_values or min(n_values) < 2:
        raise InvalidInputError(f"n values must be >= 2, got {n_values}")
    settings = replace(settings or MethodSettings(), lam=lam)
    spec = latent_spec(family)
    experiment = f"{EXPERIMENT}-{family}"

    def run(n: int, seed: int):
        return run_cell(experiment, generate_quad(spec, ILLUSTRATIVE_PAIR, n, seed), METHODS, settings)

    cells = [Cell(f"{experiment}/n={n}/seed={seed}", partial(run, n, seed)) for n in n_values for seed in seeds]
    collector = RecordCollector()
    run_cells(cells, collector, jobs=jobs)
    return collector.records


def register(cli):
    """Register the bench-n command on the CLI group."""

    @cli.command("bench-n")
    @click.option("--family", type=click.Choice((BIVARIATE_GAMMA, GAUSSIAN_MIXTURE_2D)), default=None, help="Latent family.")
    @click.option("--n-values", default=None, help="Comma-separated sample sizes.")
    @common_options
    @click.pass_context
    def bench_n(ctx, family, n_values, seed, repeats, out, k, lam, metric_subsample, jobs):
        """Runtime and accuracy as the number of samples grows (d = 2)."""
        cfg = ctx.obj.get("config", {}) if ctx.obj else {}
        opts = bench_options(cfg, SECTION, seed, repeats, out, k, lam, metric_subsample, jobs)
        family = resolve(cfg, SECTION, "family", family, BIVARIATE_GAMMA)
        n_values = int_list(resolve(cfg, SECTION, "n_values", n_values, DEFAULT_N_VALUES))
        records = run_varying_n(family, n_values, opts.seeds, opts.lam, opts.settings(), jobs=opts.jobs)
        finish(records, opts.out, "varying n")
