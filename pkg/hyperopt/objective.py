"""
Spike Forecaster - Tuning Objective

One trial trains a fresh network on batch j of the encoded day stream
and scores it on batch j + 1, both wrapping around the stream. The
cursor j advances by one per trial.
"""

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import structlog

from app.exceptions import InsufficientHistoryError, NoRealSpikesError
from app.schemas import (
    LabelConfig,
    MetricsReport,
    ModelConfig,
    ModelVariant,
    Objective,
    PreprocessConfig,
    UnsupervisedHyperparams,
)
from app.seeding import INIT, derive_seed
from metrics.evaluation import ConfusionCounts, report_from_counts
from metrics.ground_truth import GroundTruth
from plasticity.trainer import train_unsupervised
from preprocessing.encoding import SpikeTensor
from services.day_service import prepare_days, stack_days
from services.model_service import build_network, stdp_params
from snn.engine import predict
from sources.base import DayTicks

logger = structlog.get_logger(__name__)

SILENT_FLAG = "silent"


@dataclass
class ObjectiveResult:
    score: float
    srd: Optional[float] = None
    flag: Optional[str] = None
    metrics: Optional[MetricsReport] = None


def score_report(report: MetricsReport, metric: Objective) -> ObjectiveResult:
    """
    SA or PSA of an evaluation batch.

    A model that never predicts has undefined SA; it scores 0 with the
    "silent" flag.

    Raises:
        NoRealSpikesError: the batch holds no real spikes.
    """
    if not report.real_spiking_rate:
        raise NoRealSpikesError()
    if report.spike_accuracy is None:
        return ObjectiveResult(score=0.0, srd=report.srd, flag=SILENT_FLAG, metrics=report)
    score = report.spike_accuracy if metric is Objective.SA else report.psa
    assert score is not None
    return ObjectiveResult(score=score, srd=report.srd, metrics=report)


def hyperparams_from(params: Mapping[str, Any], base: UnsupervisedHyperparams, variant: ModelVariant) -> UnsupervisedHyperparams:
    merged = {**base.model_dump(), **params}
    if variant is ModelVariant.MODEL1:
        merged["n_input"] = 1
    return UnsupervisedHyperparams.model_validate(merged)


@dataclass
class TuningStream:
    """
    The tuning days encoded as one row stream, rebuilt per lag count
    (N_input changes the features) and cached.
    """
    days: list[DayTicks]
    variant: ModelVariant
    preprocess: PreprocessConfig
    labels: LabelConfig
    seed: int
    batch_size: int
    jobs: int = 1
    _cache: dict[int, tuple[SpikeTensor, GroundTruth]] = field(default_factory=dict, init=False, repr=False)

    def rows(self, n_input: int) -> tuple[SpikeTensor, GroundTruth]:
        if n_input not in self._cache:
            prepared = prepare_days(
                self.days,
                self.variant,
                n_input,
                self.preprocess,
                self.labels,
                self.seed,
                jobs=self.jobs,
            )
            self._cache[n_input] = stack_days(prepared)
        return self._cache[n_input]

    def batches(self, n_input: int, cursor: int) -> tuple[slice, slice]:
        """
        Train and evaluation row slices for a cursor position.

        Raises:
            InsufficientHistoryError: fewer than two full batches.
        """
        spikes, _ = self.rows(n_input)
        n_batches = spikes.n_timestamps // self.batch_size
        if n_batches < 2:
            raise InsufficientHistoryError(
                f"{spikes.n_timestamps} rows hold fewer than two batches of {self.batch_size}",
                details={"rows": spikes.n_timestamps, "batch_size": self.batch_size},
            )
        train_b = cursor % n_batches
        eval_b = (cursor + 1) % n_batches
        size = self.batch_size
        return slice(train_b * size, (train_b + 1) * size), slice(eval_b * size, (eval_b + 1) * size)


@dataclass
class UnsupervisedObjective:
    """Callable objective(params, cursor) for Models 1 and 2."""
    stream: TuningStream
    metric: Objective
    base: UnsupervisedHyperparams = field(default_factory=UnsupervisedHyperparams)
    alpha: float = 0.05
    log_every: int = 100

    def __call__(self, params: Mapping[str, Any], cursor: int) -> ObjectiveResult:
        variant = self.stream.variant
        hp = hyperparams_from(params, self.base, variant)
        spikes, truth = self.stream.rows(hp.n_input)
        train_rows, eval_rows = self.stream.batches(hp.n_input, cursor)

        config = ModelConfig(variant=variant, hyperparams=hp, log_every=self.log_every)
        network = build_network(config, spikes.n_channels, seed=derive_seed(self.stream.seed, INIT, cursor))
        train_unsupervised(network, spikes.take(train_rows), stdp_params(hp), log_every=self.log_every)

        predictions = predict(network, spikes.take(eval_rows))
        counts = ConfusionCounts.from_arrays(predictions, truth.take(eval_rows))
        result = score_report(report_from_counts(counts, self.alpha), self.metric)
        logger.debug("Objective evaluated", cursor=cursor, score=result.score, flag=result.flag)
        return result
