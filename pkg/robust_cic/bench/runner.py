"""
Experiment cells.

A cell is one dataset run through a set of estimators and scored against its
ground truth. Cells are independent: their random streams are derived from
(dataset seed, cell id), so running them on a thread pool gives the same records
as running them in order.
"""

from __future__ import annotations

import logging
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ..datagen import DatasetQuad, ProductionPair, gen_comonotone_pair
from ..errors import InvalidInputError
from ..estimators import (
    CIC,
    MAX_SLICED,
    OT,
    ROT,
    SINKHORN,
    CounterfactualEstimate,
    cic_tensorized,
    max_sliced_counterfactual,
    ot_counterfactual,
    rot_counterfactual,
    sinkhorn_counterfactual,
)
from ..measures import EmpiricalMeasure
from ..ot import ot_distance
from ..subspace import DEFAULT_K, DEFAULT_STEP, sample_directions
from ..telemetry import add_tags, profile_block
from .records import BenchRecord, RecordCollector

logger = logging.getLogger(__name__)

DEFAULT_LAMBDA = 30.0


def cell_seed(seed: int, cell_id: str) -> int:
    """Seed for the random stream of one cell, derived from the dataset seed and the cell id."""
    sequence = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, zlib.crc32(cell_id.encode())])
    return int(sequence.generate_state(1)[0])


def production_pairs(d_values: Sequence[int], seed: int) -> dict[int, ProductionPair]:
    """One co-monotone production pair per dimension, seeded from (seed, d)."""
    return {d: gen_comonotone_pair(d, cell_seed(seed, f"pair/d={d}")) for d in d_values}


@dataclass(frozen=True)
class MethodSettings:
    k: int = DEFAULT_K
    lam: float = DEFAULT_LAMBDA
    ascent_iters: int = 100
    step: float = DEFAULT_STEP
    metric_subsample: Optional[int] = None


def run_method(method: str, quad: DatasetQuad, settings: MethodSettings, seed: int) -> CounterfactualEstimate:
    """Run one estimator on a quad; `seed` drives direction sampling or ascent initialization."""
    y0c, y1c, y0t = quad.y0c, quad.y1c, quad.y0t
    if method == CIC:
        return cic_tensorized(y0c, y1c, y0t)
    if method == OT:
        return ot_counterfactual(y0c, y1c, y0t)
    if method == SINKHORN:
        return sinkhorn_counterfactual(y0c, y1c, y0t, settings.lam)
    if method == ROT:
        return rot_counterfactual(y0c, y1c, y0t, sample_directions(settings.k, quad.d, seed))
    if method == MAX_SLICED:
        return max_sliced_counterfactual(y0c, y1c, y0t, settings.ascent_iters, step=settings.step, seed=seed)
    raise InvalidInputError(f"unknown method {method!r}")


def score(estimate: CounterfactualEstimate, reference: EmpiricalMeasure, metric_subsample: Optional[int], seed: int) -> tuple[float, dict]:
    """Distance to the reference, optionally on seeded subsamples of both sides."""
    estimated = estimate.as_measure()
    meta = {}
    if metric_subsample is not None and metric_subsample < max(estimated.n, reference.n):
        rng = np.random.default_rng(seed)
        estimated = estimated.subsample(metric_subsample, rng)
        reference = reference.subsample(metric_subsample, rng)
        meta["metric_subsample"] = metric_subsample
    return max(ot_distance(estimated, reference), 0.0), meta


def _record_k(method: str, settings: MethodSettings) -> Optional[int]:
    if method == ROT:
        return settings.k
    if method == MAX_SLICED:
        return settings.ascent_iters
    return None


def estimate_meta(estimate: CounterfactualEstimate) -> dict:
    """Metadata worth keeping in a record: the chosen direction and solver flags."""
    keep = ("direction", "cost", "converged", "marginal_violation", "iterations")
    return {key: estimate.meta[key] for key in keep if key in estimate.meta}


@dataclass
class CellResult:
    records: list[BenchRecord]
    samples: dict[str, np.ndarray] = field(default_factory=dict)


def run_cell(
    experiment: str,
    quad: DatasetQuad,
    methods: Sequence[str],
    settings: MethodSettings,
    record_seed: Optional[int] = None,
    cell_id: Optional[str] = None,
    keep_samples: bool = False,
) -> CellResult:
    """Run every method on one quad and score it against the quad's ground truth."""
    tag_dataset = record_seed is not None and quad.seed is not None
    record_seed = quad.seed if record_seed is None else record_seed
    cell_id = cell_id or f"{experiment}/n={quad.y0t.n}/d={quad.d}/seed={record_seed}"
    result = CellResult(records=[])
    with profile_block(cell_id):
        add_tags({"experiment": experiment, "n": quad.y0t.n, "d": quad.d, "seed": record_seed})
        for method in methods:
            method_seed = cell_seed(record_seed, f"{cell_id}/{method}")
            estimate = run_method(method, quad, settings, method_seed)
            distance, meta = score(estimate, quad.ground_truth_y1t_star, settings.metric_subsample, cell_seed(record_seed, f"{cell_id}/metric"))
            meta.update(estimate_meta(estimate))
            if quad.meta.get("production_seed") is not None:
                meta["production_seed"] = quad.meta["production_seed"]
            if tag_dataset:
                meta["dataset_seed"] = quad.seed
            result.records.append(
                BenchRecord(
                    experiment=experiment,
                    method=method,
                    n=quad.y0t.n,
                    d=quad.d,
                    k=_record_k(method, settings),
                    lam=settings.lam if method == SINKHORN else None,
                    seed=record_seed,
                    runtime_s=estimate.runtime_s,
                    ot_distance=distance,
                    meta=meta,
                )
            )
            logger.info("%s %s: distance=%.4g runtime=%.4gs", cell_id, method, distance, estimate.runtime_s)
            if keep_samples:
                result.samples[method] = np.asarray(estimate.samples)
    return result


@dataclass
class Cell:
    cell_id: str
    run: Callable[[], CellResult]


def run_cells(cells: Sequence[Cell], collector: RecordCollector, jobs: int = 1) -> list[CellResult]:
    """Execute cells (in parallel when jobs > 1) and feed their records to the collector in cell order."""
    if jobs < 1:
        raise InvalidInputError(f"jobs must be >= 1, got {jobs}")
    if jobs == 1:
        results = [cell.run() for cell in cells]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda cell: cell.run(), cells))
    for result in results:
        collector.extend(result.records)
    return results
