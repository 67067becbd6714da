#!/usr/bin/env python3
"""
cli.py

Command-line interface for the counterfactual estimation benchmarks: data
generation, the synthetic experiments and the Card-Krueger analysis.
"""

import importlib
import pkgutil
from importlib.metadata import entry_points

import click

from .config import load_config
from .errors import RobustCicError
from .log import setup_logging
from . import plugins, telemetry


class RobustCicGroup(click.Group):
    """Click group that reports library errors as one-line diagnostics (exit code 1)."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except RobustCicError as exc:
            raise click.ClickException(str(exc)) from exc


@click.group(cls=RobustCicGroup)
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG logging.")
@click.option("--trace-file", type=click.Path(dir_okay=False), default=None, help="Write folded stacks of the run to this file.")
@click.pass_context
def main(ctx, verbose, trace_file):
    """
    Estimate counterfactual distributions with changes-in-changes, exact and
    entropic optimal transport, and robust one-dimensional subspace transport.
    """
    ctx.ensure_object(dict)
    ctx.obj["config"] = load_config()
    setup_logging(verbose)
    if trace_file:
        telemetry.start_session(ctx.invoked_subcommand or "robust-cic")

        def _write_trace():
            spans = telemetry.end_session()
            with open(trace_file, "w") as f:
                telemetry.export_folded(spans, f)

        ctx.call_on_close(_write_trace)


def _load_plugins(cli_group: click.Group) -> None:
    """Register the built-in subcommands, then any from the `robust_cic.plugins` entry-point group."""
    for _, name, _ in pkgutil.iter_modules(plugins.__path__):
        try:
            module = importlib.import_module(f"{plugins.__name__}.{name}")
        except Exception as e:
            click.echo(f"Error loading built-in plugin {name}: {e}", err=True)
            continue
        if hasattr(module, "register"):
            module.register(cli_group)

    for ep in entry_points(group="robust_cic.plugins"):
        try:
            ep.load()(cli_group)
        except Exception as e:
            click.echo(f"Error loading plugin {ep.name}: {e}", err=True)


_load_plugins(main)

if __name__ == "__main__":
    main()
