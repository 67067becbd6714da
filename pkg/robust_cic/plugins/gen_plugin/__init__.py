"""
Dataset generation plugin for robust-cic.
"""

from .plugin import run_gen, register

__all__ = ["run_gen", "register"]
