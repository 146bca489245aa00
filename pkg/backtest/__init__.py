"""
Spike Forecaster - Backtesting
"""

from backtest.metrics import (
    average_reports,
    chain_equity,
    drawdown_series,
    max_drawdown,
    scale_report,
    sharpe_ratio,
    trading_metrics,
)
from backtest.rolling import BacktestContext, RollingResult, rolling_experiment, run_pair
from backtest.strategy import (
    StrategyRun,
    Trade,
    equity_curve,
    position_flag,
    position_flags,
    run_strategy,
    write_equity,
    write_trades,
)

__all__ = [
    "BacktestContext",
    "RollingResult",
    "StrategyRun",
    "Trade",
    "average_reports",
    "chain_equity",
    "drawdown_series",
    "equity_curve",
    "max_drawdown",
    "position_flag",
    "position_flags",
    "rolling_experiment",
    "run_pair",
    "run_strategy",
    "scale_report",
    "sharpe_ratio",
    "trading_metrics",
    "write_equity",
    "write_trades",
]
