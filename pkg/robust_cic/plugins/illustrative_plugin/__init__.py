"""
Illustrative 2D experiment plugin for robust-cic.
"""

from .plugin import run_illustrative, register

__all__ = ["run_illustrative", "register"]
