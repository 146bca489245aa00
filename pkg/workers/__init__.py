"""
Spike Forecaster - Workers Package
"""

from workers.pool import run_bounded

__all__ = ["run_bounded"]
