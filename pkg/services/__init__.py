"""
Spike Forecaster - Services Package

Day preparation and model fitting shared by the tuner, the backtest and
the commands.
"""

from services.day_service import PreparedDay, prepare_day, prepare_days, stack_days
from services.model_service import FitResult, build_network, effective_n_input, fit, fit_day, predict_day

__all__ = [
    "FitResult",
    "PreparedDay",
    "build_network",
    "effective_n_input",
    "fit",
    "fit_day",
    "predict_day",
    "prepare_day",
    "prepare_days",
    "stack_days",
]
