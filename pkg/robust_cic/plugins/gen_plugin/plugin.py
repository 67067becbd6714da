"""
Dataset generation plugin for robust-cic.
Writes the quads of the synthetic experiments as CSV files, one directory per seed.
"""

from pathlib import Path

import click

from robust_cic.bench.options import DEFAULT_OUT, DEFAULT_SEED
from robust_cic.config import resolve
from robust_cic.datagen import FAMILIES, ILLUSTRATIVE_PAIR, MULTIVARIATE_GAMMA, gen_comonotone_pair, generate_quad, latent_spec, save_quad
from robust_cic.errors import InvalidInputError

SECTION = "gen"


def run_gen(family: str, n: int, d: int, seeds: list[int], out: Path, coupled: bool = False, pair_seed: int | None = None) -> list[Path]:
    """Generate one quad per seed under out/<family>-n<n>-d<d>/seed-<seed>/ and return the directories."""
    spec = latent_spec(family, d)
    if family == MULTIVARIATE_GAMMA:
        prod = gen_comonotone_pair(spec.dim, seeds[0] if pair_seed is None else pair_seed)
    else:
        prod = ILLUSTRATIVE_PAIR
    base = Path(out) / f"{family}-n{n}-d{spec.dim}"
    directories = []
    for seed in seeds:
        directory = base / f"seed-{seed}"
        save_quad(generate_quad(spec, prod, n, seed, coupled=coupled), directory)
        directories.append(directory)
    return directories


def register(cli):
    """Register the gen command on the CLI group."""

    @cli.command("gen")
    @click.option("--family", type=click.Choice(FAMILIES), default=None, help="Latent family.")
    @click.option("--n", "n", type=int, default=None, help="Atoms per sample.")
    @click.option("--d", "d", type=int, default=None, help="Dimension (multivariate-gamma only).")
    @click.option("--seed", type=int, default=None, help="First dataset seed.")
    @click.option("--repeats", type=int, default=None, help="Number of datasets.")
    @click.option("--coupled/--independent", default=False, help="Reuse one latent draw at both time stamps of a group.")
    @click.option("--pair-seed", type=int, default=None, help="Seed of the multivariate production pair.")
    @click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory.")
    @click.pass_context
    def gen(ctx, family, n, d, seed, repeats, coupled, pair_seed, out):
        """Write synthetic quads (y0c, y1c, y0t, ground truth) as CSV files."""
        cfg = ctx.obj.get("config", {}) if ctx.obj else {}
        family = resolve(cfg, SECTION, "family", family, FAMILIES[0])
        n = int(resolve(cfg, SECTION, "n", n, 2000))
        d = int(resolve(cfg, SECTION, "d", d, 2))
        seed = int(resolve(cfg, SECTION, "seed", seed, DEFAULT_SEED))
        repeats = int(resolve(cfg, SECTION, "repeats", repeats, 1))
        out = Path(resolve(cfg, SECTION, "out", out, DEFAULT_OUT))
        if family not in FAMILIES:
            raise InvalidInputError(f"unknown latent family {family!r}")
        if repeats < 1:
            raise InvalidInputError(f"repeats must be >= 1, got {repeats}")
        directories = run_gen(family, n, d, list(range(seed, seed + repeats)), out, coupled=coupled, pair_seed=pair_seed)
        for directory in directories:
            click.echo(f"quad written to {directory}")
