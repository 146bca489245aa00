"""
Spike Forecaster - Backtest Tests
"""

import math

import numpy as np
import pytest

from app.exceptions import InsufficientHistoryError, ShapeMismatchError
from app.schemas import (
    BacktestConfig,
    Direction,
    LabelConfig,
    ModelConfig,
    ModelVariant,
    PreprocessConfig,
    StrategyConfig,
    StrategyMode,
    SyntheticConfig,
    TradingReport,
)
from backtest import (
    BacktestContext,
    chain_equity,
    max_drawdown,
    position_flag,
    position_flags,
    rolling_experiment,
    run_strategy,
    scale_report,
    sharpe_ratio,
    trading_metrics,
    write_equity,
    write_trades,
)
from backtest.metrics import average_reports
from backtest.rolling import random_predictions
from sources.synthetic import generate_synthetic_ticks
from storage.artifacts import read_csv


def _walk(rng, n=300):
    return 100.0 * np.exp(np.cumsum(rng.normal(0, 0.002, size=n)))


# =============================================================================
# Position flag
# =============================================================================

def test_position_flag_examples():
    prices = np.array([100.0, 100, 100, 100, 110, 110, 121])
    assert position_flag(prices, 2, 3) is None
    assert position_flag(prices, 3, 3) == 0.0
    assert position_flag(prices, 4, 3) == pytest.approx(10.0)
    assert position_flag(prices, 6, 3) == pytest.approx(121 - 320 / 3)


def test_position_flags_match_scalar(rng):
    prices = _walk(rng, 50)
    flags = position_flags(prices, 5)
    assert np.isnan(flags[:5]).all()
    for t in range(5, 50):
        assert flags[t] == pytest.approx(position_flag(prices, t, 5))


# =============================================================================
# Strategy
# =============================================================================

def test_hand_walked_trade():
    prices = np.array([100.0, 100, 100, 100, 110, 110, 121])
    config = StrategyConfig(lookback=3, hold=1)

    flat = np.zeros(7, dtype=bool)
    flat[3] = True
    assert run_strategy(flat, prices, config).trades == []

    signal = np.zeros(7, dtype=bool)
    signal[4] = True
    run = run_strategy(signal, prices, config)
    assert len(run.trades) == 1
    trade = run.trades[0]
    assert (trade.entry_idx, trade.exit_idx) == (5, 6)
    assert trade.direction is Direction.LONG
    assert trade.ret == pytest.approx(0.1)
    assert run.final_equity == pytest.approx(1.1)


def test_inverted_direction_shorts():
    prices = np.array([100.0, 100, 100, 100, 110, 110, 121])
    signal = np.zeros(7, dtype=bool)
    signal[4] = True
    run = run_strategy(signal, prices, StrategyConfig(lookback=3, hold=1, invert_direction=True))
    assert run.trades[0].direction is Direction.SHORT
    assert run.trades[0].ret == pytest.approx(-0.1)


def test_cost_is_charged_per_trade():
    prices = np.array([100.0, 100, 100, 100, 110, 110, 121])
    signal = np.zeros(7, dtype=bool)
    signal[4] = True
    run = run_strategy(signal, prices, StrategyConfig(lookback=3, hold=1, cost_bps=10))
    assert run.trades[0].ret == pytest.approx(0.1 - 0.001)


def test_one_position_at_a_time():
    prices = 100.0 + np.arange(20)
    run = run_strategy(np.ones(20, dtype=bool), prices, StrategyConfig(lookback=3, hold=3))
    assert [t.entry_idx for t in run.trades] == [4, 8, 12, 16]
    for before, after in zip(run.trades, run.trades[1:]):
        assert after.entry_idx > before.exit_idx


def test_exit_capped_at_last_bar():
    prices = 100.0 + np.arange(10)
    signal = np.zeros(10, dtype=bool)
    signal[7] = True
    run = run_strategy(signal, prices, StrategyConfig(lookback=3, hold=5))
    assert (run.trades[0].entry_idx, run.trades[0].exit_idx) == (8, 9)

    late = np.zeros(10, dtype=bool)
    late[8] = True
    assert run_strategy(late, prices, StrategyConfig(lookback=3, hold=5)).trades == []


def test_no_trades_keeps_equity_flat(rng):
    prices = _walk(rng, 40)
    run = run_strategy(np.zeros(40, dtype=bool), prices, StrategyConfig())
    assert run.trades == []
    np.testing.assert_array_equal(run.equity, np.ones(40))
    assert run.final_equity == 1.0


def test_length_mismatch_rejected():
    with pytest.raises(ShapeMismatchError):
        run_strategy(np.ones(5, dtype=bool), np.ones(6), StrategyConfig())


def test_equity_matches_compounded_returns(rng):
    for _ in range(20):
        prices = _walk(rng)
        predictions = rng.random(prices.size) < 0.1
        run = run_strategy(predictions, prices, StrategyConfig(hold=int(rng.integers(1, 6))))
        expected = float(np.prod(1.0 + run.returns))
        assert abs(run.final_equity - expected) < 1e-12


def test_no_look_ahead(rng):
    prices = _walk(rng, 200)
    predictions = rng.random(200) < 0.2
    config = StrategyConfig(lookback=3, hold=2)
    cut = 120
    changed = prices.copy()
    changed[cut:] *= 1.5

    before = [t for t in run_strategy(predictions, prices, config).trades if t.exit_idx < cut]
    after = [t for t in run_strategy(predictions, changed, config).trades if t.exit_idx < cut]
    assert before == after


def test_trade_and_equity_csv(tmp_path):
    prices = np.array([100.0, 100, 100, 100, 110, 110, 121])
    signal = np.zeros(7, dtype=bool)
    signal[4] = True
    run = run_strategy(signal, prices, StrategyConfig(lookback=3, hold=1))

    trades = read_csv(write_trades(run.trades, tmp_path / "trades.csv"))
    assert list(trades.columns) == ["entry_idx", "exit_idx", "direction", "entry_vwap", "exit_vwap", "return"]
    assert trades["direction"].tolist() == ["long"]

    equity = read_csv(write_equity(run.equity, tmp_path / "equity.csv"))
    assert list(equity.columns) == ["timestamp_idx", "equity"]
    assert equity["equity"].iloc[-1] == pytest.approx(1.1)


# =============================================================================
# Metrics
# =============================================================================

def _drawdown_oracle(equity):
    worst = 0.0
    for i in range(len(equity)):
        for j in range(i, len(equity)):
            worst = max(worst, 1.0 - equity[j] / equity[i])
    return worst


def test_max_drawdown_matches_oracle(rng):
    for _ in range(20):
        equity = np.cumprod(1.0 + rng.normal(0, 0.02, size=60))
        assert max_drawdown(equity) == pytest.approx(_drawdown_oracle(equity), abs=1e-12)


def test_max_drawdown_scale_invariant(rng):
    equity = np.cumprod(1.0 + rng.normal(0, 0.02, size=100))
    assert max_drawdown(3.0 * equity) == pytest.approx(max_drawdown(equity))


def test_max_drawdown_examples():
    assert max_drawdown(np.array([1.0, 1.2, 0.9, 1.3])) == pytest.approx(0.25)
    assert max_drawdown(np.array([1.0, 1.1, 1.2])) == 0.0


def test_two_trade_metrics():
    report = trading_metrics([0.01, -0.005], [np.array([1.0, 1.01, 1.01 * 0.995])])
    assert report.win_rate == pytest.approx(0.5)
    assert report.profit_factor == pytest.approx(2.0)
    assert report.profit_loss_ratio == pytest.approx(2.0)
    assert report.expectancy == pytest.approx(0.0025)
    assert report.final_equity == pytest.approx(1.00495)
    assert report.cumulative_return == pytest.approx(0.00495)
    assert report.max_drawdown == pytest.approx(0.005)
    assert report.n_trades == 2


def test_metrics_without_trades():
    report = trading_metrics([], [np.ones(10)])
    assert report.cumulative_return == 0.0
    assert report.win_rate is None
    assert report.profit_factor is None
    assert report.expectancy is None
    assert report.max_drawdown == 0.0


def test_profit_factor_undefined_without_losses():
    report = trading_metrics([0.01, 0.02], [np.array([1.0, 1.01, 1.0302])])
    assert report.win_rate == 1.0
    assert report.profit_factor is None
    assert report.profit_loss_ratio is None


def test_sharpe_ratio():
    assert sharpe_ratio([0.01]) is None
    assert sharpe_ratio([0.01, 0.01]) is None
    expected = 0.02 / np.std([0.01, 0.03], ddof=1) * math.sqrt(252)
    assert sharpe_ratio([0.01, 0.03]) == pytest.approx(expected)


def test_chain_equity():
    chained = chain_equity([np.array([1.0, 1.1]), np.array([1.0, 0.5])])
    np.testing.assert_allclose(chained, [1.0, 1.1, 1.1, 0.55])


@pytest.mark.parametrize(
    "expectancy,cumulative_pct",
    [
        (8.15e-6, 15.49),
        (8.15e-6, 15.48),
        (7.17e-6, 13.63),
        (9.18e-6, 17.44),
        (6.55e-6, 12.44),
        (7.10e-6, 13.49),
        (6.69e-6, 12.71),
    ],
)
def test_scaled_return(expectancy, cumulative_pct):
    report = scale_report(TradingReport(expectancy=expectancy), trades_per_day=1000, n_days=19)
    assert abs(report.scaled_cumulative_return * 100 - cumulative_pct) <= 0.0101


def test_scaled_return_edge_cases():
    assert scale_report(TradingReport(expectancy=0.0), 1000, 19).scaled_cumulative_return == 0.0
    assert scale_report(TradingReport(), 1000, 19).scaled_cumulative_return is None


def test_average_reports_skips_undefined():
    averaged = average_reports([
        TradingReport(win_rate=0.4, profit_factor=None, n_trades=2),
        TradingReport(win_rate=0.6, profit_factor=3.0, n_trades=4),
    ])
    assert averaged.win_rate == pytest.approx(0.5)
    assert averaged.profit_factor == pytest.approx(3.0)
    assert averaged.n_trades == pytest.approx(3.0)


# =============================================================================
# Rolling experiment
# =============================================================================

@pytest.fixture
def context(model1_params) -> BacktestContext:
    return BacktestContext(
        model=ModelConfig(variant=ModelVariant.MODEL1, hyperparams=model1_params),
        preprocess=PreprocessConfig(timesteps=10),
        labels=LabelConfig(),
        strategy=StrategyConfig(),
        backtest=BacktestConfig(random_runs=3),
        seed=3,
    )


def test_random_predictions_rate():
    first = random_predictions(20_000, 0.3, seed=1, day_index=0, run=0)
    assert abs(first.mean() - 0.3) < 0.02
    np.testing.assert_array_equal(first, random_predictions(20_000, 0.3, seed=1, day_index=0, run=0))
    assert not np.array_equal(first, random_predictions(20_000, 0.3, seed=1, day_index=0, run=1))


def test_rolling_needs_two_days(small_days, context):
    with pytest.raises(InsufficientHistoryError):
        rolling_experiment(small_days[:1], context)


def test_rolling_pairs_and_baselines(small_days, context):
    result = rolling_experiment(small_days, context)
    report = result.report

    assert report.n_test_days == 2
    assert [c.name for c in report.columns] == ["model", "naive", "random"]
    assert [(d.train_day, d.test_day) for d in report.per_day] == [
        (small_days[0].date, small_days[1].date),
        (small_days[1].date, small_days[2].date),
    ]

    naive = next(c for c in report.columns if c.name == "naive")
    assert naive.metrics.spiking_rate == pytest.approx(1.0)
    assert naive.metrics.spike_accuracy == pytest.approx(naive.metrics.real_spiking_rate)

    assert 0.0 <= report.columns[0].trading.max_drawdown <= 1.0
    assert result.equity[-1] == pytest.approx(
        np.prod([1.0 + t.ret for t in result.trades]), rel=1e-12
    )
    for before, after in zip(result.trades, result.trades[1:]):
        assert after.entry_idx > before.exit_idx


def test_rolling_is_deterministic(small_days, context):
    first = rolling_experiment(small_days, context).report
    second = rolling_experiment(small_days, context).report
    assert first.model_dump() == second.model_dump()


def test_naive_mode_without_baselines(small_days, context):
    naive_context = BacktestContext(
        model=context.model,
        preprocess=context.preprocess,
        labels=context.labels,
        strategy=StrategyConfig(mode=StrategyMode.NAIVE),
        backtest=BacktestConfig(baselines=False),
        seed=context.seed,
    )
    report = rolling_experiment(small_days, naive_context).report
    assert [c.name for c in report.columns] == ["model"]
    assert report.columns[0].metrics.spiking_rate == pytest.approx(1.0)


def test_scaled_return_spans_every_day_of_the_period(context):
    days = generate_synthetic_ticks(SyntheticConfig(
        n_days=19,
        ticks_per_day=1_500,
        noise_volatility=1e-4,
        spike_rate=0.01,
        momentum_persistence=0.8,
        seed=11,
    ))
    naive_context = BacktestContext(
        model=context.model,
        preprocess=context.preprocess,
        labels=context.labels,
        strategy=StrategyConfig(mode=StrategyMode.NAIVE),
        backtest=BacktestConfig(baselines=False, trades_per_day=1000),
        seed=context.seed,
    )
    report = rolling_experiment(days, naive_context).report
    trading = report.columns[0].trading

    assert report.n_test_days == 18
    assert trading.expectancy is not None
    assert trading.scaled_cumulative_return == pytest.approx(trading.expectancy * 19_000, rel=1e-12)
