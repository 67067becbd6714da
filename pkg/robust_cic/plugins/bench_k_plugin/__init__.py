"""
Varying-k experiment plugin for robust-cic.
"""

from .plugin import run_varying_k, register

__all__ = ["run_varying_k", "register"]
