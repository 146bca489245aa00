"""
Spike Forecaster - backtest Command

Runs the rolling day-pair experiment and writes the report bundle:
report JSON, trades CSV and equity CSV of the model column.
"""

from argparse import ArgumentParser, BooleanOptionalAction, Namespace, _SubParsersAction

import structlog

from app.schemas import ModelVariant
from backtest.rolling import BacktestContext, rolling_experiment
from backtest.strategy import write_equity, write_trades
from commands.common import (
    EQUITY_FILE,
    REPORT_FILE,
    TRADES_FILE,
    load_days,
    load_run_config,
    out_path,
    resolve_jobs,
    resolve_model,
)
from commands.report import format_summary
from storage.artifacts import write_json

logger = structlog.get_logger(__name__)


def register(subparsers: "_SubParsersAction[ArgumentParser]", parents: list[ArgumentParser]) -> None:
    parser = subparsers.add_parser("backtest", parents=parents, help="Rolling out-of-sample trading experiment")
    parser.add_argument(
        "--baselines",
        action=BooleanOptionalAction,
        default=None,
        help="Include the naive and random baseline columns",
    )
    parser.set_defaults(handler=handle)


def handle(args: Namespace) -> int:
    config = load_run_config(args)
    model = resolve_model(config)
    settings = config.backtest
    if args.baselines is not None:
        settings = settings.model_copy(update={"baselines": args.baselines})

    context = BacktestContext(
        model=model,
        preprocess=config.preprocess,
        labels=config.labels,
        strategy=config.strategy,
        backtest=settings,
        seed=config.seed,
    )
    if model.variant is ModelVariant.MODEL3:
        hyperparams = model.supervised.model_dump(mode="json")
    else:
        hyperparams = model.hyperparams.model_dump(mode="json")

    result = rolling_experiment(load_days(config), context, jobs=resolve_jobs(args), hyperparams=hyperparams)

    target = out_path(config)
    write_json(result.report, target / REPORT_FILE)
    write_trades(result.trades, target / TRADES_FILE)
    write_equity(result.equity, target / EQUITY_FILE)

    logger.info("Backtest finished", test_days=result.report.n_test_days, trades=len(result.trades), path=str(target))
    print(format_summary(result.report))
    return 0
