"""SVG scatter panels of estimated versus ground-truth counterfactual samples (2D only)."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

import numpy as np
from matplotlib.figure import Figure

from ..errors import DimensionMismatchError

logger = logging.getLogger(__name__)

MAX_POINTS = 2000


def _thin(points: np.ndarray, limit: int = MAX_POINTS) -> np.ndarray:
    if points.shape[0] <= limit:
        return points
    idx = np.linspace(0, points.shape[0] - 1, limit).astype(int)
    return points[idx]


def _check_2d(*arrays: np.ndarray) -> None:
    for a in arrays:
        if a.ndim != 2 or a.shape[1] != 2:
            raise DimensionMismatchError(f"scatter panels need 2D samples, got shape {a.shape}")


def scatter_panel(ax, reference: np.ndarray, estimate: np.ndarray, title: str, labels=("ground truth", "estimate")) -> None:
    ax.scatter(*_thin(reference).T, s=4, alpha=0.35, color="tab:gray", label=labels[0])
    ax.scatter(*_thin(estimate).T, s=4, alpha=0.5, color="tab:red", label=labels[1])
    ax.set_title(title, fontsize=9)
    ax.legend(loc="upper right", fontsize=7, markerscale=2)


def write_scatter(reference: np.ndarray, estimate: np.ndarray, title: str, path: Path) -> Path:
    """One panel: ground truth in gray, estimate in red."""
    reference, estimate = np.asarray(reference), np.asarray(estimate)
    _check_2d(reference, estimate)
    fig = Figure(figsize=(4, 4))
    scatter_panel(fig.add_subplot(1, 1, 1), reference, estimate, title)
    return _save(fig, path)


def write_panels(panels: Sequence[tuple[str, np.ndarray, np.ndarray]], path: Path, labels=("reference", "estimate")) -> Path:
    """A row of panels, each given as (title, reference, estimate)."""
    fig = Figure(figsize=(4 * len(panels), 4))
    for i, (title, reference, estimate) in enumerate(panels, start=1):
        reference, estimate = np.asarray(reference), np.asarray(estimate)
        _check_2d(reference, estimate)
        scatter_panel(fig.add_subplot(1, len(panels), i), reference, estimate, title, labels=labels)
    return _save(fig, path)


def _save(fig: Figure, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    logger.debug("wrote figure %s", path)
    return path
