"""
Spike Forecaster - synth Command

Writes the configured synthetic days as tick CSV files, one per day.
"""

from argparse import ArgumentParser, Namespace, _SubParsersAction

import numpy as np
import structlog

from app.exceptions import ValidationError
from commands.common import TICKS_DIR, load_run_config, out_path
from sources.csv_file import write_ticks_csv
from sources.synthetic import generate_synthetic_ticks

logger = structlog.get_logger(__name__)


def register(subparsers: "_SubParsersAction[ArgumentParser]", parents: list[ArgumentParser]) -> None:
    parser = subparsers.add_parser("synth", parents=parents, help="Generate synthetic tick CSV files")
    parser.set_defaults(handler=handle)


def handle(args: Namespace) -> int:
    config = load_run_config(args)
    if config.data.synthetic is None:
        raise ValidationError("synth needs a synthetic data source")

    target = out_path(config) / TICKS_DIR
    days = generate_synthetic_ticks(config.data.synthetic)
    for day in days:
        write_ticks_csv(day, target / f"{day.date}.csv")
        returns = np.diff(np.log(day.prices))
        print(
            f"{day.date}  ticks={len(day)}  open={day.prices[0]:.4f}  "
            f"close={day.prices[-1]:.4f}  tick_vol={returns.std():.2e}"
        )

    logger.info("Synthetic days written", days=len(days), path=str(target))
    print(f"{len(days)} days written to {target}")
    return 0
