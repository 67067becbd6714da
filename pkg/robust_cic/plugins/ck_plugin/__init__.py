"""
Card-Krueger analysis plugin for robust-cic.
"""

from .plugin import run_ck, register

__all__ = ["run_ck", "register"]
