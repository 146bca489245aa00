"""
Spike Forecaster - preprocess Command

Turns every day into VWAP bars with labels, normalized features and
encoded spike trains. Each day is normalized on itself.
"""

from argparse import ArgumentParser, Namespace, _SubParsersAction

import pandas as pd
import structlog

from commands.common import PREPROCESS_DIR, load_days, load_run_config, out_path, resolve_jobs
from preprocessing.container import write_features, write_spikes
from services.day_service import PreparedDay, prepare_days
from services.model_service import effective_n_input
from storage.artifacts import write_csv, write_json

logger = structlog.get_logger(__name__)


def bar_frame(day: PreparedDay) -> pd.DataFrame:
    """Bars with their ground-truth labels."""
    truth = day.truth
    return pd.DataFrame({
        "bar_idx": range(day.n_bars),
        "vwap": day.bars.vwap,
        "total_volume": day.bars.total_volume,
        "strength": truth.strength,
        "is_real": truth.is_real,
        "direction": truth.direction,
        "labeled": truth.labeled,
    })


def register(subparsers: "_SubParsersAction[ArgumentParser]", parents: list[ArgumentParser]) -> None:
    parser = subparsers.add_parser("preprocess", parents=parents, help="Build bars, features and spike trains")
    parser.set_defaults(handler=handle)


def handle(args: Namespace) -> int:
    config = load_run_config(args)
    target = out_path(config) / PREPROCESS_DIR
    prepared = prepare_days(
        load_days(config),
        config.model.variant,
        effective_n_input(config.model),
        config.preprocess,
        config.labels,
        config.seed,
        jobs=resolve_jobs(args),
    )

    for day in prepared:
        write_csv(bar_frame(day), target / f"{day.date}.bars.csv")
        write_features(day.features.values, target / f"{day.date}.features.bin")
        write_spikes(day.spikes, target / f"{day.date}.spikes.bin")
        write_json(day.normalization, target / f"{day.date}.normalization.json")
        print(
            f"{day.date}  bars={day.n_bars}  rows={day.features.n_timestamps}  "
            f"channels={day.features.n_channels}  real_rate={day.truth.real_rate or 0.0:.3f}"
        )

    logger.info("Preprocessing finished", days=len(prepared), path=str(target))
    return 0
