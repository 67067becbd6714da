"""
Synthetic changes-in-changes datasets.

Latent samples for the control and treatment groups are pushed through linear
production functions h_0(u) = H0 u and h_1(u) = H1 u. The ground-truth
counterfactual is the treatment latent pushed through h_1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import DimensionMismatchError, InvalidInputError, ParseError
from .measures import EmpiricalMeasure
from .telemetry import profile

logger = logging.getLogger(__name__)

BIVARIATE_GAMMA = "bivariate-gamma"
GAUSSIAN_MIXTURE_2D = "gaussian-mixture-2d"
MULTIVARIATE_GAMMA = "multivariate-gamma"
FAMILIES = (BIVARIATE_GAMMA, GAUSSIAN_MIXTURE_2D, MULTIVARIATE_GAMMA)

CONTROL = "control"
TREATMENT = "treatment"
GROUPS = (CONTROL, TREATMENT)

MAX_CONDITION = 1e12
PRODUCT_TOL = 1e-10
MAX_REDRAWS = 100

QUAD_FILES = {
    "y0c": "y0c.csv",
    "y1c": "y1c.csv",
    "y0t": "y0t.csv",
    "ground_truth_y1t_star": "y1t_star.csv",
}


@dataclass(frozen=True, eq=False)
class ProductionPair:
    """Linear production matrices with H0^T H1 = B diagonal and nonnegative (co-monotone)."""

    H0: np.ndarray
    H1: np.ndarray
    B: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        H0 = np.array(self.H0, dtype=np.float64)
        H1 = np.array(self.H1, dtype=np.float64)
        B = np.array(self.B, dtype=np.float64)
        d = H0.shape[0]
        if H0.shape != (d, d) or H1.shape != (d, d) or B.shape != (d, d):
            raise DimensionMismatchError(f"production matrices must all be {d}x{d}")
        if not np.isfinite(np.linalg.cond(H0)) or np.linalg.cond(H0) > MAX_CONDITION:
            raise InvalidInputError("H0 is numerically singular")
        if np.any(B != np.diag(np.diag(B))) or np.any(np.diag(B) < 0):
            raise InvalidInputError("B must be diagonal with nonnegative entries")
        residual = np.abs(H0.T @ H1 - B).max()
        if residual > PRODUCT_TOL:
            raise InvalidInputError(f"H0^T H1 differs from B by {residual:.3e}")
        for name, value in (("H0", H0), ("H1", H1), ("B", B)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def d(self) -> int:
        return self.H0.shape[0]

    def h0(self, latent: np.ndarray) -> np.ndarray:
        return latent @ self.H0.T

    def h1(self, latent: np.ndarray) -> np.ndarray:
        return latent @ self.H1.T

    @classmethod
    def identity(cls, d: int) -> "ProductionPair":
        eye = np.eye(d)
        return cls(eye, eye, eye)


# Fixed 2D pair of the illustrative experiments; H0^T H1 = 0.75 I.
ILLUSTRATIVE_PAIR = ProductionPair(
    H0=np.array([[1.0, 0.5], [0.5, 1.0]]),
    H1=np.array([[1.0, -0.5], [-0.5, 1.0]]),
    B=np.diag([0.75, 0.75]),
)


def gen_comonotone_pair(d: int, seed: int) -> ProductionPair:
    """
    Draw H0 with unit diagonal and Uniform(0,1) off-diagonal entries, B diagonal with
    Uniform(0,1) entries, and set H1 = (H0^-1)^T B so that H0^T H1 = B.

    A numerically singular H0 is redrawn with the next seed.
    """
    if d < 1:
        raise InvalidInputError(f"d must be >= 1, got {d}")
    for attempt in range(MAX_REDRAWS):
        current = seed + attempt
        rng = np.random.default_rng(current)
        H0 = rng.uniform(0.0, 1.0, size=(d, d))
        np.fill_diagonal(H0, 1.0)
        B = np.diag(rng.uniform(0.0, 1.0, size=d))
        if np.linalg.cond(H0) > MAX_CONDITION:
            logger.warning("H0 drawn with seed %d is ill-conditioned, redrawing", current)
            continue
        H1 = np.linalg.solve(H0.T, B)
        try:
            return ProductionPair(H0, H1, B, seed=current)
        except InvalidInputError as exc:
            logger.warning("production pair for seed %d rejected (%s), redrawing", current, exc)
    raise InvalidInputError(f"could not draw a well-conditioned production pair after {MAX_REDRAWS} attempts")


@dataclass(frozen=True)
class GammaLatent:
    """Independent Gamma coordinates; mean of coordinate i is shapes[i] * scales[i]."""

    shapes: tuple[float, ...]
    scales: tuple[float, ...]

    def __post_init__(self):
        if len(self.shapes) != len(self.scales) or not self.shapes:
            raise InvalidInputError("shapes and scales must be non-empty and of equal length")
        if min(self.shapes) <= 0 or min(self.scales) <= 0:
            raise InvalidInputError("Gamma shapes and scales must be positive")

    @property
    def dim(self) -> int:
        return len(self.shapes)

    def mean(self) -> np.ndarray:
        return np.asarray(self.shapes) * np.asarray(self.scales)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.gamma(np.asarray(self.shapes), np.asarray(self.scales), size=(n, self.dim))


@dataclass(frozen=True)
class MixtureLatent:
    """Independent coordinates, each a Gaussian mixture sharing the component weights."""

    means: tuple[tuple[float, ...], ...]
    stds: tuple[tuple[float, ...], ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        means = np.asarray(self.means, dtype=float)
        stds = np.asarray(self.stds, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if means.ndim != 2 or means.shape != stds.shape or means.shape[1] != weights.shape[0]:
            raise InvalidInputError("mixture means/stds must be (dim, components) matching the weights")
        if np.any(stds <= 0):
            raise InvalidInputError("mixture standard deviations must be positive")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise InvalidInputError("mixture weights must be nonnegative and sum to 1")

    @property
    def dim(self) -> int:
        return len(self.means)

    def mean(self) -> np.ndarray:
        return np.asarray(self.means) @ np.asarray(self.weights)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        means = np.asarray(self.means)
        stds = np.asarray(self.stds)
        components = rng.choice(len(self.weights), size=(n, self.dim), p=np.asarray(self.weights))
        cols = np.arange(self.dim)[None, :]
        return rng.normal(means[cols, components], stds[cols, components])


@dataclass(frozen=True)
class LatentSpec:
    """Latent distributions of both groups for one experiment family."""

    family: str
    control: GammaLatent | MixtureLatent
    treatment: GammaLatent | MixtureLatent

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidInputError(f"unknown latent family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.control.dim != self.treatment.dim:
            raise DimensionMismatchError("control and treatment latents have different dimensions")

    @property
    def dim(self) -> int:
        return self.control.dim

    def group(self, group: str) -> GammaLatent | MixtureLatent:
        if group == CONTROL:
            return self.control
        if group == TREATMENT:
            return self.treatment
        raise InvalidInputError(f"unknown group {group!r}; expected 'control' or 'treatment'")


def bivariate_gamma() -> LatentSpec:
    control = GammaLatent(shapes=(2.0, 3.0), scales=(3.0, 2.0))
    treatment = GammaLatent(shapes=(3.0, 2.0), scales=(2.0, 3.0))
    return LatentSpec(BIVARIATE_GAMMA, control, treatment)


def gaussian_mixture_2d() -> LatentSpec:
    control = MixtureLatent(means=((1.0, 5.0), (2.0, 4.0)), stds=((1.0, 1.0), (1.0, 1.0)), weights=(0.5, 0.5))
    treatment = MixtureLatent(means=((2.0, 4.0), (1.0, 5.0)), stds=((1.0, 1.0), (1.0, 1.0)), weights=(0.5, 0.5))
    return LatentSpec(GAUSSIAN_MIXTURE_2D, control, treatment)


def multivariate_gamma(d: int) -> LatentSpec:
    if d < 1:
        raise InvalidInputError(f"d must be >= 1, got {d}")
    control = GammaLatent(shapes=(2.0,) * d, scales=(3.0,) * d)
    treatment = GammaLatent(shapes=(3.0,) * d, scales=(2.0,) * d)
    return LatentSpec(MULTIVARIATE_GAMMA, control, treatment)


def latent_spec(family: str, d: int = 2) -> LatentSpec:
    """Look up the latent spec of a family by name."""
    if family == BIVARIATE_GAMMA:
        return bivariate_gamma()
    if family == GAUSSIAN_MIXTURE_2D:
        return gaussian_mixture_2d()
    if family == MULTIVARIATE_GAMMA:
        return multivariate_gamma(d)
    raise InvalidInputError(f"unknown latent family {family!r}; expected one of {', '.join(FAMILIES)}")


def _latent_draw(spec: LatentSpec, group: str, n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    return spec.group(group).sample(rng, n)


def sample_latent(spec: LatentSpec, group: str, n: int, seed: int) -> EmpiricalMeasure:
    """n i.i.d. latent draws for one group, uniformly weighted."""
    return EmpiricalMeasure.uniform(_latent_draw(spec, group, n, np.random.default_rng(seed)))


@dataclass(frozen=True, eq=False)
class DatasetQuad:
    """The three observed samples plus the ground-truth counterfactual of one dataset."""

    y0c: EmpiricalMeasure
    y1c: EmpiricalMeasure
    y0t: EmpiricalMeasure
    ground_truth_y1t_star: EmpiricalMeasure
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        dims = {m.d for m in self.measures().values()}
        if len(dims) != 1:
            raise DimensionMismatchError(f"quad measures have different dimensions: {sorted(dims)}")

    @property
    def d(self) -> int:
        return self.y0c.d

    def measures(self) -> dict[str, EmpiricalMeasure]:
        return {
            "y0c": self.y0c,
            "y1c": self.y1c,
            "y0t": self.y0t,
            "ground_truth_y1t_star": self.ground_truth_y1t_star,
        }


@profile
def generate_quad(spec: LatentSpec, prod: ProductionPair, n: int, seed: int, coupled: bool = False) -> DatasetQuad:
    """
    Sample one dataset.

    Four independent latent draws feed y0c = H0 u_A, y1c = H1 u_B, y0t = H0 u_C and the
    ground truth H1 u_D. With `coupled=True` each group reuses one draw at both time stamps.
    """
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if prod.d != spec.dim:
        raise DimensionMismatchError(f"production pair has d={prod.d}, latent spec has d={spec.dim}")
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(4)]
    u_a = _latent_draw(spec, CONTROL, n, rngs[0])
    u_b = u_a if coupled else _latent_draw(spec, CONTROL, n, rngs[1])
    u_c = _latent_draw(spec, TREATMENT, n, rngs[2])
    u_d = u_c if coupled else _latent_draw(spec, TREATMENT, n, rngs[3])
    meta = {"family": spec.family, "n": n, "d": spec.dim, "coupled": coupled, "production_seed": prod.seed}
    return DatasetQuad(
        y0c=EmpiricalMeasure.uniform(prod.h0(u_a)),
        y1c=EmpiricalMeasure.uniform(prod.h1(u_b)),
        y0t=EmpiricalMeasure.uniform(prod.h0(u_c)),
        ground_truth_y1t_star=EmpiricalMeasure.uniform(prod.h1(u_d)),
        seed=seed,
        meta=meta,
    )


def write_measure(measure: EmpiricalMeasure, path: Path) -> None:
    """One row per atom: dim_0,...,dim_{d-1},weight."""
    columns = [f"dim_{i}" for i in range(measure.d)]
    frame = pd.DataFrame(measure.points, columns=columns)
    frame["weight"] = measure.weights
    frame.to_csv(path, index=False, float_format="%.17g")


def read_measure(path: Path) -> EmpiricalMeasure:
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ParseError(str(exc), path=str(path)) from exc
    dims = [c for c in frame.columns if c.startswith("dim_")]
    if "weight" not in frame.columns or not dims:
        raise ParseError("expected columns dim_0,...,dim_{d-1},weight", path=str(path), line=1)
    values = frame[dims + ["weight"]].apply(pd.to_numeric, errors="coerce")
    bad = values.isna().any(axis=1)
    if bad.any():
        raise ParseError("non-numeric value", path=str(path), line=int(np.flatnonzero(bad.to_numpy())[0]) + 2)
    return EmpiricalMeasure(values[dims].to_numpy(), values["weight"].to_numpy())


def save_quad(quad: DatasetQuad, directory: Path) -> list[Path]:
    """Write the four measures of a quad as CSV files under `directory`."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, measure in quad.measures().items():
        path = directory / QUAD_FILES[name]
        write_measure(measure, path)
        written.append(path)
    return written


def load_quad(directory: Path) -> DatasetQuad:
    directory = Path(directory)
    measures = {name: read_measure(directory / filename) for name, filename in QUAD_FILES.items()}
    return DatasetQuad(**measures)
