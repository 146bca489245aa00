"""
Spike Forecaster - report Command

Prints a summary table for a finished run and writes the plot data:
equity with drawdown, and the study's best-so-far objective curve.
"""

from argparse import ArgumentParser, Namespace, _SubParsersAction
from pathlib import Path

import numpy as np
import pandas as pd
import structlog

from app.exceptions import NotFoundError
from app.schemas import BacktestReport, StudyResult
from backtest.metrics import drawdown_series
from commands.common import (
    BEST_CURVE_FILE,
    DRAWDOWN_FILE,
    EQUITY_FILE,
    REPORT_FILE,
    STUDY_SUMMARY_FILE,
    load_run_config,
)
from storage.artifacts import read_csv, read_json, write_csv

logger = structlog.get_logger(__name__)

EXPECTED_ARTIFACTS = (REPORT_FILE, EQUITY_FILE, STUDY_SUMMARY_FILE)

METRIC_ROWS = (
    ("metrics", "spike_accuracy"),
    ("metrics", "psa"),
    ("metrics", "srd"),
    ("metrics", "momentum_spike_pct"),
    ("metrics", "spiking_rate"),
    ("metrics", "real_spiking_rate"),
    ("metrics", "tpr"),
    ("metrics", "fpr"),
    ("trading", "n_trades"),
    ("trading", "cumulative_return"),
    ("trading", "scaled_cumulative_return"),
    ("trading", "final_equity"),
    ("trading", "sharpe"),
    ("trading", "max_drawdown"),
    ("trading", "win_rate"),
    ("trading", "profit_factor"),
    ("trading", "profit_loss_ratio"),
    ("trading", "expectancy"),
)


def summary_table(report: BacktestReport) -> pd.DataFrame:
    """One row per metric, one column per model/baseline."""
    table = {
        column.name: [getattr(getattr(column, section), name) for section, name in METRIC_ROWS]
        for column in report.columns
    }
    return pd.DataFrame(table, index=[name for _, name in METRIC_ROWS], dtype=object)


def format_summary(report: BacktestReport) -> str:
    header = f"{report.variant.value}  test days={report.n_test_days}  mode={report.strategy.mode.value}"
    return header + "\n" + summary_table(report).fillna("n/a").to_string()


def drawdown_frame(equity: pd.DataFrame) -> pd.DataFrame:
    frame = equity[["timestamp_idx", "equity"]].copy()
    frame["drawdown"] = drawdown_series(frame["equity"].to_numpy())
    return frame


def best_curve_frame(study: StudyResult) -> pd.DataFrame:
    curve = np.array(study.best_curve(), dtype=np.float64)
    curve[np.isinf(curve)] = np.nan
    return pd.DataFrame({
        "trial_id": [t.trial_id for t in study.trials],
        "score": [t.score for t in study.trials],
        "best_score": curve,
    })


def register(subparsers: "_SubParsersAction[ArgumentParser]", parents: list[ArgumentParser]) -> None:
    parser = subparsers.add_parser("report", parents=parents, help="Summarise a run directory")
    parser.add_argument("directory", nargs="?", help="Run directory (default: the configured output directory)")
    parser.set_defaults(handler=handle)


def handle(args: Namespace) -> int:
    directory = Path(args.directory) if args.directory else Path(load_run_config(args).out_dir or ".")
    present = [name for name in EXPECTED_ARTIFACTS if (directory / name).is_file()]
    if not present:
        raise NotFoundError(
            f"No run artifacts in {directory}; expected any of: {', '.join(EXPECTED_ARTIFACTS)}",
            details={"directory": str(directory), "expected": list(EXPECTED_ARTIFACTS)},
        )

    if REPORT_FILE in present:
        report = BacktestReport.model_validate(read_json(directory / REPORT_FILE))
        print(format_summary(report))

    if EQUITY_FILE in present:
        frame = drawdown_frame(read_csv(directory / EQUITY_FILE))
        write_csv(frame, directory / DRAWDOWN_FILE)
        print(f"max drawdown {frame['drawdown'].max():.6f} over {len(frame)} bars")

    if STUDY_SUMMARY_FILE in present:
        study = StudyResult.model_validate(read_json(directory / STUDY_SUMMARY_FILE))
        write_csv(best_curve_frame(study), directory / BEST_CURVE_FILE)
        print(f"study: {len(study.trials)} trials, best {study.metric.value}={study.best.score}")

    logger.info("Report written", directory=str(directory), artifacts=present)
    return 0
