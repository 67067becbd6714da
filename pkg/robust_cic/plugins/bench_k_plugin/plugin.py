"""
Varying-k experiment plugin for robust-cic.
Repeats rot with k random directions and the max-sliced ascent with a given
number of iterations on one dataset per dimension, so the spread of the
distances over runs shows the variance of each direction search.
"""

from dataclasses import replace
from functools import partial
from typing import Optional

import click

from robust_cic.bench.options import bench_options, common_options, finish, int_list
from robust_cic.bench.records import BenchRecord, RecordCollector
from robust_cic.bench.runner import Cell, MethodSettings, production_pairs, run_cell, run_cells
from robust_cic.config import resolve
from robust_cic.datagen import DatasetQuad, generate_quad, multivariate_gamma
from robust_cic.errors import InvalidInputError
from robust_cic.estimators import MAX_SLICED, ROT

EXPERIMENT = "varying-k"
SECTION = "bench-k"
DEFAULT_D_VALUES = [10, 100]
DEFAULT_K_VALUES = [5, 10, 50, 100, 200, 500]
DEFAULT_ASCENT_ITERS = [50, 100, 500]
DEFAULT_N = 2000


def run_varying_k(
    d_values: list[int],
    k_values: list[int],
    ascent_iter_values: list[int],
    n: int = DEFAULT_N,
    runs: int = 10,
    seed: int = 0,
    settings: Optional[MethodSettings] = None,
    jobs: int = 1,
) -> list[BenchRecord]:
    """
    For each d, one dataset (seeded by `seed`) is estimated `runs` times by rot for every k
    and by the ascent for every iteration count. Run r is recorded with seed `seed + r`.
    """
    if not d_values or min(d_values) < 1:
        raise InvalidInputError(f"d values must be >= 1, got {d_values}")
    if any(k < 1 for k in k_values):
        raise InvalidInputError(f"k values must be >= 1, got {k_values}")
    if any(it < 1 for it in ascent_iter_values):
        raise InvalidInputError(f"ascent iterations must be >= 1, got {ascent_iter_values}")
    if runs < 1:
        raise InvalidInputError(f"runs must be >= 1, got {runs}")
    settings = settings or MethodSettings()
    pairs = production_pairs(d_values, seed)
    quads: dict[int, DatasetQuad] = {d: generate_quad(multivariate_gamma(d), pairs[d], n, seed) for d in d_values}

    def run(d: int, method: str, value: int, r: int):
        cell_settings = replace(settings, k=value) if method == ROT else replace(settings, ascent_iters=value)
        cell_id = f"{EXPERIMENT}/d={d}/{method}={value}/run={r}"
        return run_cell(EXPERIMENT, quads[d], (method,), cell_settings, record_seed=seed + r, cell_id=cell_id)

    cells = []
    for d in d_values:
        for r in range(runs):
            cells.extend(Cell(f"d={d}/k={k}/run={r}", partial(run, d, ROT, k, r)) for k in k_values)
            cells.extend(Cell(f"d={d}/iters={it}/run={r}", partial(run, d, MAX_SLICED, it, r)) for it in ascent_iter_values)
    collector = RecordCollector()
    run_cells(cells, collector, jobs=jobs)
    return collector.records


def register(cli):
    """Register the bench-k command on the CLI group."""

    @cli.command("bench-k")
    @click.option("--d-values", default=None, help="Comma-separated dimensions.")
    @click.option("--k-values", default=None, help="Comma-separated direction counts for rot.")
    @click.option("--ascent-iters", default=None, help="Comma-separated iteration counts for the ascent.")
    @click.option("--n", "n", type=int, default=None, help="Atoms per sample.")
    @common_options(skip=("k", "lam"))
    @click.pass_context
    def bench_k(ctx, d_values, k_values, ascent_iters, n, seed, repeats, out, metric_subsample, jobs):
        """Random directions (rot) against the max-sliced ascent; --repeats sets the number of runs."""
        cfg = ctx.obj.get("config", {}) if ctx.obj else {}
        opts = bench_options(cfg, SECTION, seed, repeats, out, None, None, metric_subsample, jobs)
        d_values = int_list(resolve(cfg, SECTION, "d_values", d_values, DEFAULT_D_VALUES))
        k_values = int_list(resolve(cfg, SECTION, "k_values", k_values, DEFAULT_K_VALUES))
        iters = int_list(resolve(cfg, SECTION, "ascent_iters", ascent_iters, DEFAULT_ASCENT_ITERS))
        n = int(resolve(cfg, SECTION, "n", n, DEFAULT_N))
        records = run_varying_k(d_values, k_values, iters, n, runs=opts.repeats, seed=opts.seed, settings=opts.settings(), jobs=opts.jobs)
        finish(records, opts.out, "varying k")
