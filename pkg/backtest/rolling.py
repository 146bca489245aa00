"""
Spike Forecaster - Rolling Day-by-Day Experiment

Day i trains (normalization and weights) for prediction on day i + 1;
each interior day serves once as training and once as test day. The
model column is compared against a naive baseline (a signal on every
bar) and a random baseline (a signal with fixed probability, averaged
over many runs) on the same test days.
"""

from dataclasses import dataclass, field
from functools import partial
from typing import Optional

import numpy as np
import structlog

from app.exceptions import InsufficientHistoryError
from app.schemas import (
    BacktestConfig,
    BacktestReport,
    ColumnReport,
    DayReport,
    LabelConfig,
    ModelConfig,
    PreprocessConfig,
    StrategyConfig,
    StrategyMode,
)
from app.seeding import INIT, STRATEGY_RANDOM, TRAIN, derive_seed, make_rng
from backtest.metrics import average_reports, chain_equity, scale_report, trading_metrics
from backtest.strategy import StrategyRun, Trade, run_strategy
from metrics.evaluation import ConfusionCounts, report_from_counts
from services.day_service import PreparedDay, prepare_day
from services.model_service import build_network, effective_n_input, fit_day, predict_day
from sources.base import DayTicks
from workers.pool import run_bounded

logger = structlog.get_logger(__name__)

MODEL_COLUMN = "model"
NAIVE_COLUMN = "naive"
RANDOM_COLUMN = "random"


@dataclass(frozen=True)
class BacktestContext:
    model: ModelConfig
    preprocess: PreprocessConfig
    labels: LabelConfig
    strategy: StrategyConfig
    backtest: BacktestConfig
    seed: int


@dataclass
class ColumnRun:
    counts: ConfusionCounts
    run: StrategyRun
    n_bars: int


@dataclass
class PairOutcome:
    train_date: str
    test_date: str
    columns: dict[str, list[ColumnRun]] = field(default_factory=dict)


@dataclass
class RollingResult:
    report: BacktestReport
    trades: list[Trade]
    equity: np.ndarray


def random_predictions(n_bars: int, probability: float, seed: int, day_index: int, run: int) -> np.ndarray:
    rng = make_rng(seed, STRATEGY_RANDOM, day_index, run)
    return rng.random(n_bars) < probability


def _column_run(predictions: np.ndarray, day: PreparedDay, strategy: StrategyConfig) -> ColumnRun:
    return ColumnRun(
        counts=ConfusionCounts.from_arrays(predictions, day.truth),
        run=run_strategy(predictions, day.bars.vwap, strategy),
        n_bars=day.n_bars,
    )


def _model_runs(train: PreparedDay, test: PreparedDay, index: int, context: BacktestContext) -> list[ColumnRun]:
    runs = []
    for repeat in range(context.backtest.repeats):
        network = build_network(context.model, train.features.n_channels, seed=derive_seed(context.seed, INIT, index, repeat))
        fitted = fit_day(network, train, context.model, seed=derive_seed(context.seed, TRAIN, index, repeat))
        runs.append(_column_run(predict_day(fitted.network, test), test, context.strategy))
    return runs


def _random_runs(test: PreparedDay, index: int, context: BacktestContext, n_runs: int) -> list[ColumnRun]:
    p = context.strategy.random_spike_prob
    return [
        _column_run(random_predictions(test.n_bars, p, context.seed, index, r), test, context.strategy)
        for r in range(n_runs)
    ]


def run_pair(item: tuple[int, DayTicks, DayTicks], context: BacktestContext) -> PairOutcome:
    """Train on day i, then predict and trade day i + 1 for every column."""
    index, train_ticks, test_ticks = item
    model = context.model
    n_input = effective_n_input(model)
    prep = dict(variant=model.variant, n_input=n_input, preprocess=context.preprocess, labels=context.labels, seed=context.seed)
    train = prepare_day(train_ticks, index, **prep)
    test = prepare_day(test_ticks, index + 1, normalization=train.normalization, **prep)

    outcome = PairOutcome(train_date=train.date, test_date=test.date)
    mode = context.strategy.mode
    if mode is StrategyMode.SNN:
        outcome.columns[MODEL_COLUMN] = _model_runs(train, test, index, context)
    elif mode is StrategyMode.NAIVE:
        outcome.columns[MODEL_COLUMN] = [_column_run(np.ones(test.n_bars, dtype=bool), test, context.strategy)]
    else:
        outcome.columns[MODEL_COLUMN] = _random_runs(test, index, context, context.backtest.random_runs)

    if context.backtest.baselines:
        outcome.columns[NAIVE_COLUMN] = [_column_run(np.ones(test.n_bars, dtype=bool), test, context.strategy)]
        outcome.columns[RANDOM_COLUMN] = _random_runs(test, index, context, context.backtest.random_runs)

    logger.info(
        "Day pair finished",
        train_day=train.date,
        test_day=test.date,
        trades=len(outcome.columns[MODEL_COLUMN][0].run.trades),
    )
    return outcome


def aggregate_column(name: str, pairs: list[PairOutcome], context: BacktestContext, n_days: int) -> ColumnReport:
    """
    Pool every test day per run, then average the runs.

    The scaled return spreads trades_per_day over n_days, the length of the
    whole period including the first (train-only) day.
    """
    n_runs = len(pairs[0].columns[name])
    trading, metrics = [], []
    for r in range(n_runs):
        runs = [p.columns[name][r] for p in pairs]
        returns = np.concatenate([c.run.returns for c in runs])
        report = trading_metrics(returns, [c.run.equity for c in runs])
        trading.append(scale_report(report, context.backtest.trades_per_day, n_days))
        counts = sum((c.counts for c in runs), ConfusionCounts())
        metrics.append(report_from_counts(counts, context.labels.alpha))
    return ColumnReport(name=name, metrics=average_reports(metrics), trading=average_reports(trading))


def _global_trades(pairs: list[PairOutcome]) -> list[Trade]:
    trades = []
    offset = 0
    for pair in pairs:
        column = pair.columns[MODEL_COLUMN][0]
        for t in column.run.trades:
            trades.append(Trade(t.entry_idx + offset, t.exit_idx + offset, t.direction, t.entry_vwap, t.exit_vwap, t.ret))
        offset += column.n_bars
    return trades


def rolling_experiment(
    days: list[DayTicks],
    context: BacktestContext,
    jobs: int = 1,
    hyperparams: Optional[dict] = None,
) -> RollingResult:
    """
    Run every (day i, day i + 1) pair and aggregate.

    Raises:
        InsufficientHistoryError: fewer than two days.
    """
    if len(days) < 2:
        raise InsufficientHistoryError(
            f"rolling experiment needs at least two days, got {len(days)}",
            details={"days": len(days)},
        )

    items = [(i, days[i], days[i + 1]) for i in range(len(days) - 1)]
    pairs = run_bounded(partial(run_pair, context=context), items, jobs)

    columns = [aggregate_column(name, pairs, context, len(days)) for name in pairs[0].columns]
    per_day = []
    for pair in pairs:
        first = pair.columns[MODEL_COLUMN][0]
        per_day.append(DayReport(
            train_day=pair.train_date,
            test_day=pair.test_date,
            metrics=report_from_counts(first.counts, context.labels.alpha),
            trading=trading_metrics(first.run.returns, [first.run.equity]),
        ))

    report = BacktestReport(
        variant=context.model.variant,
        n_test_days=len(pairs),
        columns=columns,
        per_day=per_day,
        strategy=context.strategy,
        hyperparams=hyperparams or {},
    )
    equity = chain_equity([p.columns[MODEL_COLUMN][0].run.equity for p in pairs])
    return RollingResult(report=report, trades=_global_trades(pairs), equity=equity)
