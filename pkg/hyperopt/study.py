"""
Spike Forecaster - Study Runner

Sequential ask/evaluate/tell loop over an optuna study. The TPE sampler
draws its first n_startup trials uniformly, then splits the history at
the gamma quantile of scores and picks, among n_candidates draws from
the good density, the one with the best good/bad density ratio.

Every trial is appended to an NDJSON store as it finishes; a resumed
study replays the stored trials into optuna and continues the trial ids
and the batch cursor.
"""

import math
import time
from functools import partial
from typing import Any, Callable, Mapping, Optional

import optuna
import structlog
from optuna.trial import TrialState as OptunaTrialState

from app.exceptions import AppError, StudyFailedError, UnsatisfiableSpaceError
from app.schemas import ModelVariant, Objective, StudyResult, TrialRecord, TrialState
from app.seeding import TPE, derive_seed
from hyperopt.objective import ObjectiveResult
from hyperopt.space import SearchSpace
from storage.trials import TrialStore
from workers.pool import run_bounded

logger = structlog.get_logger(__name__)

MAX_RESAMPLE = 10
SAMPLER_TPE = "tpe"
SAMPLER_RANDOM = "random"

ObjectiveFn = Callable[[Mapping[str, Any], int], ObjectiveResult]


def _gamma(fraction: float, n: int) -> int:
    return min(math.ceil(fraction * n), n)


def make_sampler(
    kind: str,
    seed: int,
    gamma: float = 0.25,
    n_startup: int = 10,
    n_candidates: int = 24,
) -> optuna.samplers.BaseSampler:
    """TPE (default) or uniform random sampler, seeded from the run seed."""
    # numpy RandomState seeds must fit in 32 bits
    sampler_seed = derive_seed(seed, TPE) % (2**32)
    if kind == SAMPLER_TPE:
        return optuna.samplers.TPESampler(
            n_startup_trials=n_startup,
            n_ei_candidates=n_candidates,
            gamma=partial(_gamma, gamma),
            seed=sampler_seed,
        )
    elif kind == SAMPLER_RANDOM:
        return optuna.samplers.RandomSampler(seed=sampler_seed)
    else:
        raise ValueError(f"Unknown sampler: {kind}")


def _ask(study: optuna.Study, space: SearchSpace) -> tuple[Optional[optuna.Trial], dict[str, Any], Optional[str]]:
    last: Optional[UnsatisfiableSpaceError] = None
    for _ in range(MAX_RESAMPLE):
        trial = study.ask()
        try:
            return trial, space.suggest(trial), None
        except UnsatisfiableSpaceError as e:
            study.tell(trial, state=OptunaTrialState.FAIL)
            last = e
    return None, {}, f"unsatisfiable: {last.message if last else 'empty range'}"


def _evaluate(item: tuple[ObjectiveFn, dict[str, Any], int]) -> tuple[Optional[ObjectiveResult], Optional[str], float]:
    objective, params, cursor = item
    started = time.perf_counter()
    try:
        result: Optional[ObjectiveResult] = objective(params, cursor)
        error = None
        if result is not None and not math.isfinite(result.score):
            result, error = None, f"non-finite score {result.score}"
    except AppError as e:
        result, error = None, e.message
    return result, error, (time.perf_counter() - started) * 1000.0


def _replay(study: optuna.Study, space: SearchSpace, records: list[TrialRecord]) -> None:
    for record in records:
        if record.state is not TrialState.COMPLETE or record.score is None:
            continue
        study.add_trial(optuna.trial.create_trial(
            params=record.params,
            distributions=space.distributions(record.params),
            value=record.score,
        ))


def best_trial(trials: list[TrialRecord]) -> Optional[TrialRecord]:
    """Highest-scoring completed trial; the earliest wins ties."""
    best: Optional[TrialRecord] = None
    for trial in trials:
        if trial.state is not TrialState.COMPLETE or trial.score is None:
            continue
        if best is None or trial.score > best.score:  # type: ignore[operator]
            best = trial
    return best


def run_study(
    variant: ModelVariant,
    metric: Objective,
    space: SearchSpace,
    objective: ObjectiveFn,
    n_trials: int = 100,
    seed: int = 0,
    gamma: float = 0.25,
    n_startup: int = 10,
    n_candidates: int = 24,
    sampler: str = SAMPLER_TPE,
    store: Optional[TrialStore] = None,
    resume: bool = False,
    jobs: int = 1,
) -> StudyResult:
    """
    Run (or resume) a study of n_trials trials.

    With jobs > 1, up to `jobs` trials are asked against the same history
    snapshot, evaluated in parallel and told back in trial-id order.

    Raises:
        StudyFailedError: no trial completed.
    """
    optuna.logging.set_verbosity(optuna.logging.WARNING)
    study = optuna.create_study(
        direction="maximize",
        sampler=make_sampler(sampler, seed, gamma, n_startup, n_candidates),
    )

    records: list[TrialRecord] = []
    if resume and store is not None and store.exists():
        records = store.load()
        _replay(study, space, records)
        logger.info("Resuming study", trials=len(records), path=str(store.path))
    elif store is not None:
        store.reset()

    while len(records) < n_trials:
        width = max(1, min(jobs, n_trials - len(records)))
        asked = [_ask(study, space) for _ in range(width)]
        first_id = len(records)

        runnable = [(objective, params, first_id + i) for i, (trial, params, _) in enumerate(asked) if trial is not None]
        outcomes = iter(run_bounded(_evaluate, runnable, jobs))

        for i, (trial, params, ask_error) in enumerate(asked):
            trial_id = first_id + i
            if trial is None:
                result, error, duration = None, ask_error, 0.0
            else:
                result, error, duration = next(outcomes)

            if result is not None:
                study.tell(trial, result.score)
                record = TrialRecord(
                    trial_id=trial_id,
                    params=params,
                    metric=metric,
                    score=result.score,
                    srd=result.srd,
                    batch_index=trial_id,
                    duration_ms=duration,
                    flag=result.flag,
                )
                logger.info("Trial completed", trial_id=trial_id, score=result.score, srd=result.srd, flag=result.flag)
            else:
                if trial is not None:
                    study.tell(trial, state=OptunaTrialState.FAIL)
                record = TrialRecord(
                    trial_id=trial_id,
                    params=params,
                    metric=metric,
                    batch_index=trial_id,
                    duration_ms=duration,
                    state=TrialState.FAILED,
                    flag=error,
                )
                logger.warning("Trial failed", trial_id=trial_id, error=error)

            records.append(record)
            if store is not None:
                store.append(record)

    best = best_trial(records)
    if best is None:
        raise StudyFailedError(
            f"All {len(records)} trials failed",
            details={"variant": variant.value, "metric": metric.value},
        )
    logger.info("Study finished", variant=variant.value, metric=metric.value, best_score=best.score, best_trial=best.trial_id)
    return StudyResult(variant=variant, metric=metric, trials=records, best=best)
