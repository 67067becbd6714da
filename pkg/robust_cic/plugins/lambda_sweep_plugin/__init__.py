"""
Sinkhorn regularization sweep plugin for robust-cic.
"""

from .plugin import run_lambda_sweep, register

__all__ = ["run_lambda_sweep", "register"]
