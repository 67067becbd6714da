"""
Experiment orchestration: seeded cells, record collection, CSV/SVG output.
"""

from .records import BenchRecord, RecordCollector, read_records, summarize, write_records, write_summary
from .runner import Cell, CellResult, MethodSettings, cell_seed, run_cell, run_cells, run_method, score

__all__ = [
    "BenchRecord",
    "RecordCollector",
    "read_records",
    "summarize",
    "write_records",
    "write_summary",
    "Cell",
    "CellResult",
    "MethodSettings",
    "cell_seed",
    "run_cell",
    "run_cells",
    "run_method",
    "score",
]
