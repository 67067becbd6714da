"""
Varying-d experiment plugin for robust-cic.
"""

from .plugin import run_varying_d, register

__all__ = ["run_varying_d", "register"]
