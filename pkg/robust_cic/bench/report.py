"""
Terminal rendering of benchmark summaries with rich.
"""

import math

import pandas as pd
from rich.console import Console
from rich.table import Table


def format_time(seconds: float) -> str:
    """Convert seconds to a human-friendly string."""
    us = seconds * 1e6
    if us >= 1_000_000:
        return f"{us / 1_000_000:.2f}s"
    elif us >= 1_000:
        return f"{us / 1_000:.2f}ms"
    else:
        return f"{us:.0f}μs"


def _cell(value) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def summary_table(summary: pd.DataFrame, title: str = "summary") -> Table:
    table = Table(title=title)
    for name in ("experiment", "method", "n", "d", "k", "lambda", "runs", "runtime", "distance"):
        table.add_column(name, justify="left" if name in ("experiment", "method") else "right")
    for row in summary.to_dict("records"):
        table.add_row(
            row["experiment"],
            row["method"],
            _cell(row["n"]),
            _cell(row["d"]),
            _cell(row["k"]),
            _cell(row["lambda"]),
            str(row["count"]),
            f"{format_time(row['runtime_mean'])} ± {format_time(row['runtime_std'])}",
            f"{row['distance_mean']:.4g} ± {row['distance_std']:.2g}",
        )
    return table


def print_summary(summary: pd.DataFrame, title: str = "summary", console: Console | None = None) -> None:
    (console or Console()).print(summary_table(summary, title))
