"""
Varying-n experiment plugin for robust-cic.
"""

from .plugin import run_varying_n, register

__all__ = ["run_varying_n", "register"]
