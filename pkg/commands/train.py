"""
Spike Forecaster - train Command

Fits one model on one day (backtest.train_day) and writes the checkpoint,
the fitted normalization, the training log and in-sample metrics.
"""

from argparse import ArgumentParser, Namespace, _SubParsersAction

import structlog

from app.exceptions import ValidationError
from app.seeding import INIT, TRAIN, derive_seed
from commands.common import (
    CHECKPOINT_FILE,
    LOSS_HISTORY_FILE,
    NORMALIZATION_FILE,
    TRAIN_METRICS_FILE,
    TRAINING_LOG_FILE,
    load_days,
    load_run_config,
    out_path,
    resolve_model,
)
from metrics.evaluation import evaluate
from plasticity.trainer import write_training_log
from services.day_service import prepare_day
from services.model_service import build_network, effective_n_input, fit_day, predict_day
from snn.checkpoint import save_checkpoint
from storage.artifacts import write_json
from supervised.trainer import write_loss_history

logger = structlog.get_logger(__name__)


def register(subparsers: "_SubParsersAction[ArgumentParser]", parents: list[ArgumentParser]) -> None:
    parser = subparsers.add_parser("train", parents=parents, help="Train one model on one day")
    parser.set_defaults(handler=handle)


def handle(args: Namespace) -> int:
    config = load_run_config(args)
    model = resolve_model(config)
    days = load_days(config)
    index = config.backtest.train_day
    if index >= len(days):
        raise ValidationError(
            f"train_day {index} out of range for {len(days)} days",
            details={"train_day": index, "days": len(days)},
        )

    day = prepare_day(
        days[index],
        index,
        variant=model.variant,
        n_input=effective_n_input(model),
        preprocess=config.preprocess,
        labels=config.labels,
        seed=config.seed,
    )
    network = build_network(model, day.features.n_channels, seed=derive_seed(config.seed, INIT, index))
    fitted = fit_day(network, day, model, seed=derive_seed(config.seed, TRAIN, index))

    target = out_path(config)
    save_checkpoint(fitted.network, target / CHECKPOINT_FILE)
    write_json(day.normalization, target / NORMALIZATION_FILE)
    if model.variant.is_unsupervised:
        write_training_log(fitted.training_log, target / TRAINING_LOG_FILE)
    else:
        write_loss_history(fitted.loss_history, target / LOSS_HISTORY_FILE)

    report = evaluate(predict_day(fitted.network, day), day.truth, config.labels.alpha)
    write_json(report, target / TRAIN_METRICS_FILE)
    logger.info("Model trained", variant=model.variant.value, date=day.date, path=str(target))
    print(f"trained {model.variant.value} on {day.date}")
    print(f"in-sample spike accuracy={report.spike_accuracy}  spiking rate={report.spiking_rate}  srd={report.srd}")
    return 0
