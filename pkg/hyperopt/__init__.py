"""
Spike Forecaster - Hyperparameter Optimisation
"""

from hyperopt.objective import ObjectiveResult, TuningStream, UnsupervisedObjective, score_report
from hyperopt.space import ParamSpec, Scale, SearchSpace, unsupervised_space
from hyperopt.study import best_trial, make_sampler, run_study

__all__ = [
    "ObjectiveResult",
    "ParamSpec",
    "Scale",
    "SearchSpace",
    "TuningStream",
    "UnsupervisedObjective",
    "best_trial",
    "make_sampler",
    "run_study",
    "score_report",
    "unsupervised_space",
]
