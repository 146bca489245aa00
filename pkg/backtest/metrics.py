"""
Spike Forecaster - Trading Metrics

Table-style trading statistics over one or more days of trades. Ratios
without a denominator (no trades, no losses) are None.
"""

import math
from typing import Iterable, Optional, Sequence, TypeVar

import numpy as np

from app.schemas import MetricsReport, TradingReport

TRADING_DAYS_PER_YEAR = 252

ReportT = TypeVar("ReportT", TradingReport, MetricsReport)


def drawdown_series(equity: np.ndarray) -> np.ndarray:
    """Fractional decline from the running peak at every point."""
    equity = np.asarray(equity, dtype=np.float64)
    if equity.size == 0:
        return equity
    peaks = np.maximum.accumulate(np.maximum(equity, 1e-300))
    return np.clip(1.0 - equity / peaks, 0.0, 1.0)


def max_drawdown(equity: np.ndarray) -> float:
    series = drawdown_series(equity)
    return float(series.max()) if series.size else 0.0


def sharpe_ratio(daily_returns: Sequence[float]) -> Optional[float]:
    """Annualised mean/std of daily returns; None below two days or at zero spread."""
    daily = np.asarray(daily_returns, dtype=np.float64)
    if daily.size < 2:
        return None
    std = float(daily.std(ddof=1))
    if std == 0.0:
        return None
    return float(daily.mean() / std * math.sqrt(TRADING_DAYS_PER_YEAR))


def chain_equity(day_curves: Iterable[np.ndarray]) -> np.ndarray:
    """Join per-day curves (each starting from 1.0) into one compounded curve."""
    parts = []
    level = 1.0
    for curve in day_curves:
        curve = np.asarray(curve, dtype=np.float64)
        parts.append(level * curve)
        if curve.size:
            level *= float(curve[-1])
    return np.concatenate(parts) if parts else np.ones(0)


def trading_metrics(returns: Sequence[float], day_curves: Sequence[np.ndarray]) -> TradingReport:
    """
    Args:
        returns: Signed return of every executed trade, in order.
        day_curves: Equity curve of each trading day, each starting at 1.0.
    """
    r = np.asarray(returns, dtype=np.float64)
    equity = chain_equity(day_curves)
    final = float(np.prod(1.0 + r)) if r.size else 1.0
    daily = [float(c[-1]) - 1.0 for c in day_curves if len(c)]

    wins = r[r > 0]
    losses = r[r < 0]
    gross_win = float(wins.sum())
    gross_loss = float(-losses.sum())

    return TradingReport(
        cumulative_return=final - 1.0,
        final_equity=final,
        sharpe=sharpe_ratio(daily),
        max_drawdown=max_drawdown(np.concatenate([[1.0], equity])),
        win_rate=float(wins.size / r.size) if r.size else None,
        profit_factor=gross_win / gross_loss if gross_loss > 0 else None,
        profit_loss_ratio=float(wins.mean() / -losses.mean()) if wins.size and losses.size else None,
        expectancy=float(r.mean()) if r.size else None,
        n_trades=int(r.size),
    )


def scale_report(report: TradingReport, trades_per_day: int, n_days: int) -> TradingReport:
    """Cumulative return rescaled to trades_per_day trades on each of n_days."""
    scaled = None if report.expectancy is None else report.expectancy * trades_per_day * n_days
    return report.model_copy(update={"scaled_cumulative_return": scaled})


def _mean_optional(values: list[Optional[float]]) -> Optional[float]:
    defined = [v for v in values if v is not None]
    return float(np.mean(defined)) if defined else None


def average_reports(reports: Sequence[ReportT]) -> ReportT:
    """Field-wise mean over repeated runs (trading or predictive reports); undefined values are skipped."""
    if len(reports) == 1:
        return reports[0]
    model = type(reports[0])
    averaged = {
        name: _mean_optional([getattr(r, name) for r in reports])
        for name in model.model_fields
    }
    return model.model_validate({k: v for k, v in averaged.items() if v is not None})
