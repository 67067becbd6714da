"""
Illustrative 2D experiment plugin for robust-cic.
Runs cic, ot and rot on the two bivariate latent families and draws scatter
panels of each estimate against the ground-truth counterfactual.
"""

from functools import partial
from pathlib import Path
from typing import Optional

import click

from robust_cic.bench.figures import write_scatter
from robust_cic.bench.options import bench_options, common_options, finish
from robust_cic.bench.records import BenchRecord, RecordCollector
from robust_cic.bench.runner import Cell, MethodSettings, run_cell, run_cells
from robust_cic.config import resolve
from robust_cic.datagen import BIVARIATE_GAMMA, GAUSSIAN_MIXTURE_2D, ILLUSTRATIVE_PAIR, generate_quad, latent_spec
from robust_cic.errors import InvalidInputError
from robust_cic.estimators import CIC, OT, ROT

EXPERIMENT = "illustrative"
SECTION = "illustrative"
METHODS = (CIC, OT, ROT)
FAMILIES_2D = (BIVARIATE_GAMMA, GAUSSIAN_MIXTURE_2D)


def run_illustrative(
    family: str,
    n: int,
    seeds: list[int],
    settings: Optional[MethodSettings] = None,
    jobs: int = 1,
    figures_dir: Optional[Path] = None,
) -> tuple[list[BenchRecord], list[Path]]:
    """One quad per seed through cic/ot/rot; scatter SVGs come from the first seed."""
    if n < 2:
        raise InvalidInputError(f"n must be >= 2, got {n}")
    if family not in FAMILIES_2D:
        raise InvalidInputError(f"illustrative runs need a 2D family, got {family!r}")
    if not seeds:
        raise InvalidInputError("at least one seed is required")
    settings = settings or MethodSettings()
    spec = latent_spec(family)
    experiment = f"{EXPERIMENT}-{family}"

    quads = {}

    def run(seed: int, keep: bool):
        quad = generate_quad(spec, ILLUSTRATIVE_PAIR, n, seed)
        if keep:
            quads[seed] = quad
        return run_cell(experiment, quad, METHODS, settings, keep_samples=keep)

    cells = [Cell(f"{experiment}/seed={seed}", partial(run, seed, figures_dir is not None and i == 0)) for i, seed in enumerate(seeds)]
    collector = RecordCollector()
    results = run_cells(cells, collector, jobs=jobs)

    figures = []
    if figures_dir is not None:
        truth = quads[seeds[0]].ground_truth_y1t_star.points
        for method, samples in results[0].samples.items():
            path = Path(figures_dir) / f"{experiment}-{method}.svg"
            figures.append(write_scatter(truth, samples, f"{family}: {method} (n={n})", path))
    return collector.records, figures


def register(cli):
    """Register the illustrative command on the CLI group."""

    @cli.command("illustrative")
    @click.option("--family", type=click.Choice(FAMILIES_2D), default=None, help="Latent family (default: both).")
    @click.option("--n", "n", type=int, default=None, help="Atoms per sample.")
    @common_options(skip=("lam",))
    @click.pass_context
    def illustrative(ctx, family, n, seed, repeats, out, k, metric_subsample, jobs):
        """Compare cic, ot and rot on the 2D latent families."""
        cfg = ctx.obj.get("config", {}) if ctx.obj else {}
        opts = bench_options(cfg, SECTION, seed, repeats, out, k, None, metric_subsample, jobs)
        n = int(resolve(cfg, SECTION, "n", n, 2000))
        family = resolve(cfg, SECTION, "family", family, None)
        families = [family] if family else list(FAMILIES_2D)
        records = []
        for fam in families:
            fam_records, figures = run_illustrative(fam, n, opts.seeds, opts.settings(), jobs=opts.jobs, figures_dir=opts.out)
            records.extend(fam_records)
            for path in figures:
                click.echo(f"figure written to {path}")
        finish(records, opts.out, "illustrative")
