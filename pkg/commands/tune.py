"""
Spike Forecaster - tune Command

Runs the hyperparameter study for Model 1 or Model 2 and persists every
trial, so an interrupted study can be resumed with --resume.
"""

from argparse import ArgumentParser, Namespace, _SubParsersAction

import structlog

from app.exceptions import ValidationError
from app.schemas import Objective
from commands.common import STUDY_FILE, STUDY_SUMMARY_FILE, load_days, load_run_config, out_path, resolve_jobs
from hyperopt.objective import TuningStream, UnsupervisedObjective
from hyperopt.space import unsupervised_space
from hyperopt.study import run_study
from services.model_service import effective_n_input
from storage.artifacts import write_json
from storage.trials import TrialStore

logger = structlog.get_logger(__name__)


def register(subparsers: "_SubParsersAction[ArgumentParser]", parents: list[ArgumentParser]) -> None:
    parser = subparsers.add_parser("tune", parents=parents, help="Optimise Model 1/2 hyperparameters")
    parser.add_argument("--resume", action="store_true", default=None, help="Continue an existing study")
    parser.add_argument(
        "--metric",
        choices=[o.value for o in Objective],
        default=None,
        help="Objective to maximise (overrides tune.metric)",
    )
    parser.set_defaults(handler=handle)


def handle(args: Namespace) -> int:
    config = load_run_config(args)
    variant = config.model.variant
    if not variant.is_unsupervised:
        raise ValidationError("tune applies to Models 1 and 2; Model 3 is trained with train")

    jobs = resolve_jobs(args)
    tune = config.tune
    if args.metric is not None:
        tune = tune.model_copy(update={"metric": Objective(args.metric)})
    stream = TuningStream(
        days=load_days(config),
        variant=variant,
        preprocess=config.preprocess,
        labels=config.labels,
        seed=config.seed,
        batch_size=tune.batch_size,
        jobs=jobs,
    )
    # prepare the days once up front; trials reuse the cached rows
    stream.rows(effective_n_input(config.model))
    stream.jobs = 1

    objective = UnsupervisedObjective(
        stream=stream,
        metric=tune.metric,
        base=config.model.hyperparams,
        alpha=config.labels.alpha,
        log_every=config.model.log_every,
    )
    target = out_path(config)
    result = run_study(
        variant,
        tune.metric,
        unsupervised_space(variant),
        objective,
        n_trials=tune.n_trials,
        seed=config.seed,
        gamma=tune.gamma,
        n_startup=tune.n_startup,
        n_candidates=tune.n_candidates,
        store=TrialStore(target / STUDY_FILE),
        resume=bool(args.resume if args.resume is not None else tune.resume),
        jobs=jobs,
    )
    write_json(result, target / STUDY_SUMMARY_FILE)

    best = result.best
    logger.info("Study finished", trials=len(result.trials), best_trial=best.trial_id, score=best.score)
    print(f"{len(result.trials)} trials, objective {tune.metric.value}")
    print(f"best trial {best.trial_id}: score={best.score}  srd={best.srd}")
    for name in sorted(best.params):
        print(f"  {name} = {best.params[name]}")
    return 0
