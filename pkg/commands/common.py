"""
Spike Forecaster - Command Helpers

Run config loading and the artifact layout shared by every subcommand.
Config precedence: CLI flag > config file > environment (Settings) >
schema defaults.
"""

from argparse import Namespace
from pathlib import Path
from typing import Any, Optional

import structlog
from pydantic import ValidationError as PydanticValidationError

from app.config import get_settings
from app.exceptions import DataError, NotFoundError, StudyFailedError, ValidationError
from app.schemas import ModelConfig, RunConfig
from hyperopt.objective import hyperparams_from
from hyperopt.study import best_trial
from sources.base import DayTicks
from sources.registry import get_source
from storage.artifacts import read_json
from storage.trials import TrialStore

logger = structlog.get_logger(__name__)

# Artifact names inside the output directory
TICKS_DIR = "ticks"
PREPROCESS_DIR = "preprocess"
CHECKPOINT_FILE = "model.json"
NORMALIZATION_FILE = "normalization.json"
TRAIN_METRICS_FILE = "train_metrics.json"
TRAINING_LOG_FILE = "training_log.csv"
LOSS_HISTORY_FILE = "loss_history.csv"
STUDY_FILE = "study.ndjson"
STUDY_SUMMARY_FILE = "study.json"
REPORT_FILE = "report.json"
TRADES_FILE = "trades.csv"
EQUITY_FILE = "equity.csv"
DRAWDOWN_FILE = "drawdown.csv"
BEST_CURVE_FILE = "best_curve.csv"


def _describe(error: PydanticValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first["loc"]) or "<root>"
    return f"Invalid config at {location}: {first['msg']}"


def build_run_config(document: dict[str, Any], overrides: Optional[dict[str, Any]] = None) -> RunConfig:
    """
    Merge a config document with environment defaults and CLI overrides.

    Raises:
        ValidationError: the merged document violates the schema.
    """
    settings = get_settings()
    merged = dict(document)
    merged.setdefault("seed", settings.seed)
    merged.setdefault("out_dir", settings.out_dir)
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return RunConfig.model_validate(merged)
    except PydanticValidationError as e:
        raise ValidationError(_describe(e), details={"errors": e.error_count()})


def load_run_config(args: Namespace) -> RunConfig:
    path = getattr(args, "config", None) or get_settings().config_path
    document: Any = read_json(path) if path else {}
    if not isinstance(document, dict):
        raise ValidationError(f"Config {path} must hold a JSON object")
    return build_run_config(document, {"seed": getattr(args, "seed", None), "out_dir": getattr(args, "out", None)})


def resolve_jobs(args: Namespace) -> int:
    jobs = getattr(args, "jobs", None)
    return max(1, jobs if jobs is not None else get_settings().jobs)


def out_path(config: RunConfig) -> Path:
    path = Path(config.out_dir or get_settings().out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def load_days(config: RunConfig) -> list[DayTicks]:
    days = get_source(config.data).load_days()
    if not days:
        raise DataError("Data source produced no trading days")
    return days


def resolve_model(config: RunConfig) -> ModelConfig:
    """
    The model section with hyperparameters taken from the referenced
    study's best trial, when a study is configured.

    Raises:
        NotFoundError: the study file does not exist.
        StudyFailedError: the study holds no completed trial.
    """
    model = config.model
    if model.study_path is None:
        return model
    if not model.variant.is_unsupervised:
        raise ValidationError("study_path applies to Models 1 and 2 only")

    store = TrialStore(model.study_path)
    if not store.exists():
        raise NotFoundError(f"Study not found: {model.study_path}", details={"path": model.study_path})
    best = best_trial(store.load())
    if best is None:
        raise StudyFailedError(f"Study {model.study_path} holds no completed trial")

    logger.info("Using study parameters", path=model.study_path, trial_id=best.trial_id, score=best.score)
    hyperparams = hyperparams_from(best.params, model.hyperparams, model.variant)
    return model.model_copy(update={"hyperparams": hyperparams})
