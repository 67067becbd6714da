"""
Sinkhorn regularization sweep plugin for robust-cic.
Repeats the varying-n and varying-d grids for several values of lambda; rot
runs once per dataset as the comparison point.
"""

from dataclasses import replace
from functools import partial
from typing import Optional

import click

from robust_cic.bench.options import bench_options, common_options, finish, float_list, int_list
from robust_cic.bench.records import BenchRecord, RecordCollector
from robust_cic.bench.runner import Cell, CellResult, MethodSettings, production_pairs, run_cell, run_cells
from robust_cic.config import resolve
from robust_cic.datagen import BIVARIATE_GAMMA, ILLUSTRATIVE_PAIR, DatasetQuad, generate_quad, latent_spec, multivariate_gamma
from robust_cic.errors import InvalidInputError
from robust_cic.estimators import ROT, SINKHORN

EXPERIMENT_N = "lambda-sweep-n"
EXPERIMENT_D = "lambda-sweep-d"
SECTION = "lambda-sweep"
DEFAULT_LAMBDA_VALUES = [10.0, 30.0, 90.0]
DEFAULT_N_VALUES = [500, 1000, 2000, 5000]
DEFAULT_D_VALUES = [2, 5, 10, 20, 50, 100]
DEFAULT_D_N = 5000


def _sweep_cell(experiment: str, quad: DatasetQuad, lambda_values: list[float], settings: MethodSettings) -> CellResult:
    records = list(run_cell(experiment, quad, (ROT,), settings).records)
    for lam in lambda_values:
        records.extend(run_cell(experiment, quad, (SINKHORN,), replace(settings, lam=lam)).records)
    return CellResult(records=records)


def run_lambda_sweep(
    lambda_values: list[float] = DEFAULT_LAMBDA_VALUES,
    n_values: list[int] = DEFAULT_N_VALUES,
    d_values: list[int] = DEFAULT_D_VALUES,
    seeds: Optional[list[int]] = None,
    family: str = BIVARIATE_GAMMA,
    d_n: int = DEFAULT_D_N,
    settings: Optional[MethodSettings] = None,
    jobs: int = 1,
) -> list[BenchRecord]:
    """Records per dataset: one rot record plus one sinkhorn record for every lambda."""
    if not lambda_values or min(lambda_values) <= 0:
        raise InvalidInputError(f"lambda values must be > 0, got {lambda_values}")
    seeds = seeds if seeds is not None else list(range(10))
    if not seeds:
        raise InvalidInputError("at least one seed is required")
    settings = settings or MethodSettings()
    spec_2d = latent_spec(family)
    pairs = production_pairs(d_values, seeds[0]) if d_values else {}

    def run_n(n: int, seed: int):
        return _sweep_cell(EXPERIMENT_N, generate_quad(spec_2d, ILLUSTRATIVE_PAIR, n, seed), lambda_values, settings)

    def run_d(d: int, seed: int):
        return _sweep_cell(EXPERIMENT_D, generate_quad(multivariate_gamma(d), pairs[d], d_n, seed), lambda_values, settings)

    cells = [Cell(f"{EXPERIMENT_N}/n={n}/seed={seed}", partial(run_n, n, seed)) for n in n_values for seed in seeds]
    cells += [Cell(f"{EXPERIMENT_D}/d={d}/seed={seed}", partial(run_d, d, seed)) for d in d_values for seed in seeds]
    collector = RecordCollector()
    run_cells(cells, collector, jobs=jobs)
    return collector.records


def register(cli):
    """Register the lambda-sweep command on the CLI group."""

    @cli.command("lambda-sweep")
    @click.option("--lambda-values", default=None, help="Comma-separated regularization values.")
    @click.option("--n-values", default=None, help="Comma-separated sample sizes of the d = 2 grid.")
    @click.option("--d-values", default=None, help="Comma-separated dimensions of the varying-d grid.")
    @click.option("--n", "n", type=int, default=None, help="Atoms per sample in the varying-d grid.")
    @common_options(skip=("lam",))
    @click.pass_context
    def lambda_sweep(ctx, lambda_values, n_values, d_values, n, seed, repeats, out, k, metric_subsample, jobs):
        """Sinkhorn against rot for several regularization strengths."""
        cfg = ctx.obj.get("config", {}) if ctx.obj else {}
        opts = bench_options(cfg, SECTION, seed, repeats, out, k, None, metric_subsample, jobs)
        lambda_values = float_list(resolve(cfg, SECTION, "lambda_values", lambda_values, DEFAULT_LAMBDA_VALUES))
        n_values = int_list(resolve(cfg, SECTION, "n_values", n_values, DEFAULT_N_VALUES))
        d_values = int_list(resolve(cfg, SECTION, "d_values", d_values, DEFAULT_D_VALUES))
        d_n = int(resolve(cfg, SECTION, "n", n, DEFAULT_D_N))
        records = run_lambda_sweep(lambda_values, n_values, d_values, opts.seeds, d_n=d_n, settings=opts.settings(), jobs=opts.jobs)
        finish(records, opts.out, "lambda sweep")
