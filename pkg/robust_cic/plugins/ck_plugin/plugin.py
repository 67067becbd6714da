"""
Card-Krueger analysis plugin for robust-cic.
Estimates the New Jersey counterfactual employment distribution. Without a
ground truth, the exact-OT estimate is the reference: cic is compared to it once
and rot over many runs with fresh directions.
"""

from functools import partial
from pathlib import Path
from typing import Optional

import click
import numpy as np

from robust_cic.bench.figures import write_panels
from robust_cic.bench.options import bench_options, common_options, finish
from robust_cic.bench.records import BenchRecord, RecordCollector
from robust_cic.bench.runner import Cell, CellResult, cell_seed, run_cells, score
from robust_cic.ck import ALL_COLUMNS, FT_PT, CKDataset, ck_fte_measures, load_ck
from robust_cic.config import resolve
from robust_cic.errors import InvalidInputError
from robust_cic.estimators import CIC, OT, ROT, cic_tensorized, ot_counterfactual, rot_counterfactual
from robust_cic.subspace import sample_directions
from robust_cic.telemetry import profile_block

SECTION = "ck"
EXPERIMENT = "ck"
EXPERIMENT_9D = "ck-9d"
EXPERIMENT_FTE = "ck-fte"
DEFAULT_RUNS = 1000


def _record(experiment, method, dataset: CKDataset, seed, estimate, distance, meta=None, k=None) -> BenchRecord:
    return BenchRecord(
        experiment=experiment,
        method=method,
        n=dataset.n_treatment,
        d=len(dataset.columns),
        k=k,
        lam=None,
        seed=seed,
        runtime_s=estimate.runtime_s,
        ot_distance=distance,
        meta=meta or {},
    )


def analyze(
    dataset: CKDataset,
    experiment: str,
    runs: int,
    k: int,
    seed: int,
    metric_subsample: Optional[int] = None,
    collector: Optional[RecordCollector] = None,
    jobs: int = 1,
) -> tuple[list[BenchRecord], dict[str, np.ndarray]]:
    """cic and ot once, rot `runs` times (run r seeded by seed + r); distances are to the ot estimate."""
    if runs < 1:
        raise InvalidInputError(f"runs must be >= 1, got {runs}")
    collector = collector or RecordCollector()
    counts = {"n_control": dataset.n_control, "n_treatment": dataset.n_treatment, "columns": list(dataset.columns)}
    y0c, y1c, y0t = dataset.y0c, dataset.y1c, dataset.y0t
    with profile_block(experiment):
        reference = ot_counterfactual(y0c, y1c, y0t)
        ref_measure = reference.as_measure()
        collector.add(_record(experiment, OT, dataset, seed, reference, 0.0, counts))
        cic = cic_tensorized(y0c, y1c, y0t)
        distance, meta = score(cic, ref_measure, metric_subsample, cell_seed(seed, f"{experiment}/{CIC}/metric"))
        collector.add(_record(experiment, CIC, dataset, seed, cic, distance, {**counts, **meta}))

        def rot_run(run_seed: int) -> CellResult:
            dirs = sample_directions(k, len(dataset.columns), cell_seed(run_seed, f"{experiment}/{ROT}"))
            rot = rot_counterfactual(y0c, y1c, y0t, dirs)
            distance, meta = score(rot, ref_measure, metric_subsample, cell_seed(run_seed, f"{experiment}/{ROT}/metric"))
            meta.update(direction=rot.meta["direction"], cost=rot.meta["cost"])
            return CellResult([_record(experiment, ROT, dataset, run_seed, rot, distance, meta, k=k)], {ROT: rot.samples})

        cells = [Cell(f"{experiment}/run={r}", partial(rot_run, seed + r)) for r in range(runs)]
        results = run_cells(cells, collector, jobs=jobs)
        samples = {OT: reference.samples, CIC: cic.samples, ROT: results[0].samples[ROT]}
    return collector.records, samples


def run_ck(
    path: Path,
    runs: int = DEFAULT_RUNS,
    k: int = 10,
    seed: int = 0,
    covariates: bool = False,
    fte: bool = False,
    metric_subsample: Optional[int] = None,
    figures_dir: Optional[Path] = None,
    jobs: int = 1,
) -> list[BenchRecord]:
    """
    FT/PT analysis of the survey (restaurants complete in all nine columns), optionally followed by the nine-column run
    (`covariates`) and the one-dimensional FTE comparison of cic against ot (`fte`).
    """
    collector = RecordCollector()
    dataset = load_ck(path, FT_PT, filter_on=ALL_COLUMNS)
    _, samples = analyze(dataset, EXPERIMENT, runs, k, seed, metric_subsample, collector, jobs)
    if figures_dir is not None:
        observed = dataset.y1t.points
        panels = [
            ("NJ before (gray) and after", dataset.y0t.points, observed),
            ("cic counterfactual", observed, samples[CIC]),
            ("ot counterfactual", observed, samples[OT]),
            ("rot counterfactual", observed, samples[ROT]),
        ]
        path_svg = write_panels(panels, Path(figures_dir) / "ck-ft-pt.svg", labels=("observed", "estimate"))
        click.echo(f"figure written to {path_svg}")
    if covariates:
        analyze(load_ck(path, ALL_COLUMNS), EXPERIMENT_9D, runs, k, seed, metric_subsample, collector, jobs)
    if fte:
        fte_dataset = ck_fte_measures(dataset)
        reference = ot_counterfactual(fte_dataset.y0c, fte_dataset.y1c, fte_dataset.y0t)
        cic = cic_tensorized(fte_dataset.y0c, fte_dataset.y1c, fte_dataset.y0t)
        distance, meta = score(cic, reference.as_measure(), None, seed)
        collector.add(_record(EXPERIMENT_FTE, OT, fte_dataset, seed, reference, 0.0))
        collector.add(_record(EXPERIMENT_FTE, CIC, fte_dataset, seed, cic, distance, meta))
    return collector.records


def rot_spread(records: list[BenchRecord], experiment: str) -> tuple[float, float]:
    """Mean and population std of the rot distances of one experiment."""
    distances = np.array([r.ot_distance for r in records if r.experiment == experiment and r.method == ROT])
    if distances.size == 0:
        raise InvalidInputError(f"no rot records for {experiment}")
    return float(distances.mean()), float(distances.std())


def register(cli):
    """Register the ck command on the CLI group."""

    @cli.command("ck")
    @click.argument("path", type=click.Path(dir_okay=False), required=False)
    @click.option("--runs", type=int, default=None, help="Number of rot runs (default 1000).")
    @click.option("--covariates/--no-covariates", default=False, help="Also estimate the nine-column counterfactual.")
    @click.option("--fte/--no-fte", default=False, help="Also compare cic and ot on full-time equivalents.")
    @common_options(skip=("repeats", "lam"))
    @click.pass_context
    def ck(ctx, path, runs, covariates, fte, seed, out, k, metric_subsample, jobs):
        """Card-Krueger minimum-wage analysis on the normalized CSV at PATH."""
        cfg = ctx.obj.get("config", {}) if ctx.obj else {}
        opts = bench_options(cfg, SECTION, seed, None, out, k, None, metric_subsample, jobs)
        path = resolve(cfg, SECTION, "ck", path, None)
        if path is None:
            raise InvalidInputError("no CK file given (argument PATH or `ck` in the [ck] config table)")
        runs = int(resolve(cfg, SECTION, "runs", runs, DEFAULT_RUNS))
        records = run_ck(Path(path), runs, opts.k, opts.seed, covariates, fte, opts.metric_subsample, figures_dir=opts.out, jobs=opts.jobs)
        for experiment in [EXPERIMENT] + ([EXPERIMENT_9D] if covariates else []):
            cic = next(r for r in records if r.experiment == experiment and r.method == CIC)
            mean, std = rot_spread(records, experiment)
            click.echo(f"{experiment}: cic vs ot = {cic.ot_distance:.2f}; rot vs ot = {mean:.2f} ± {2 * std:.2f} over {runs} runs")
        if fte:
            cic = next(r for r in records if r.experiment == EXPERIMENT_FTE and r.method == CIC)
            click.echo(f"{EXPERIMENT_FTE}: cic vs ot = {cic.ot_distance:.4g}")
        finish(records, opts.out, "Card-Krueger")
