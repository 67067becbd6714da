"""
Varying-d experiment plugin for robust-cic.
Multivariate Gamma latents with one random co-monotone production pair per
dimension, shared by every seed of that dimension.
"""

from functools import partial
from typing import Optional

import click

from robust_cic.bench.options import bench_options, common_options, finish, int_list
from robust_cic.bench.records import BenchRecord, RecordCollector
from robust_cic.bench.runner import Cell, MethodSettings, production_pairs, run_cell, run_cells
from robust_cic.config import resolve
from robust_cic.datagen import generate_quad, multivariate_gamma
from robust_cic.errors import InvalidInputError
from robust_cic.estimators import CIC, OT, ROT, SINKHORN

EXPERIMENT = "varying-d"
SECTION = "bench-d"
METHODS = (CIC, OT, SINKHORN, ROT)
DEFAULT_D_VALUES = [2, 5, 10, 20, 50, 100]
DEFAULT_N = 5000


def run_varying_d(
    d_values: list[int],
    n: int = DEFAULT_N,
    seeds: Optional[list[int]] = None,
    settings: Optional[MethodSettings] = None,
    jobs: int = 1,
    pair_seed: Optional[int] = None,
    methods: tuple[str, ...] = METHODS,
) -> list[BenchRecord]:
    if not d_values or min(d_values) < 1:
        raise InvalidInputError(f"d values must be >= 1, got {d_values}")
    if n < 2:
        raise InvalidInputError(f"n must be >= 2, got {n}")
    seeds = seeds if seeds is not None else list(range(10))
    if not seeds:
        raise InvalidInputError("at least one seed is required")
    settings = settings or MethodSettings()
    pairs = production_pairs(d_values, seeds[0] if pair_seed is None else pair_seed)

    def run(d: int, seed: int):
        quad = generate_quad(multivariate_gamma(d), pairs[d], n, seed)
        return run_cell(EXPERIMENT, quad, methods, settings)

    cells = [Cell(f"{EXPERIMENT}/d={d}/seed={seed}", partial(run, d, seed)) for d in d_values for seed in seeds]
    collector = RecordCollector()
    run_cells(cells, collector, jobs=jobs)
    return collector.records


def register(cli):
    """Register the bench-d command on the CLI group."""

    @cli.command("bench-d")
    @click.option("--d-values", default=None, help="Comma-separated dimensions.")
    @click.option("--n", "n", type=int, default=None, help="Atoms per sample.")
    @click.option("--pair-seed", type=int, default=None, help="Seed of the production pairs (default: --seed).")
    @common_options
    @click.pass_context
    def bench_d(ctx, d_values, n, pair_seed, seed, repeats, out, k, lam, metric_subsample, jobs):
        """Runtime and accuracy as the dimension grows."""
        cfg = ctx.obj.get("config", {}) if ctx.obj else {}
        opts = bench_options(cfg, SECTION, seed, repeats, out, k, lam, metric_subsample, jobs)
        d_values = int_list(resolve(cfg, SECTION, "d_values", d_values, DEFAULT_D_VALUES))
        n = int(resolve(cfg, SECTION, "n", n, DEFAULT_N))
        pair_seed = resolve(cfg, SECTION, "pair_seed", pair_seed, None)
        records = run_varying_d(d_values, n, opts.seeds, opts.settings(), jobs=opts.jobs, pair_seed=pair_seed)
        finish(records, opts.out, "varying d")
