"""
Spike Forecaster - Hyperparameter Search Space

Ordered parameter specs drawn through an optuna trial. A spec may depend
on a parameter drawn before it: its range is computed from the parent's
value (e.g. A- in [A+ - 0.001, A+]) and clamped before drawing.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterator, Mapping, Optional, Sequence

import optuna
from optuna.distributions import (
    BaseDistribution,
    CategoricalDistribution,
    FloatDistribution,
    IntDistribution,
)

from app.exceptions import UnsatisfiableSpaceError, ValidationError
from app.schemas import ModelVariant

LOG_FLOOR = 1e-5
TIME_FLOOR = 1

RangeFn = Callable[[Any], tuple[float, float]]


class Scale(str, Enum):
    LOG = "log"
    LINEAR = "linear"
    INT = "int"
    CATEGORICAL = "categorical"


@dataclass(frozen=True)
class ParamSpec:
    name: str
    scale: Scale
    low: float = 0.0
    high: float = 0.0
    step: Optional[float] = None
    choices: tuple[Any, ...] = ()
    parent: Optional[str] = None
    dependent_range: Optional[RangeFn] = None

    def bounds(self, drawn: Mapping[str, Any]) -> tuple[float, float]:
        """
        Range for this draw.

        Raises:
            UnsatisfiableSpaceError: the dependent range is empty.
        """
        if self.parent is None or self.dependent_range is None:
            return self.low, self.high
        low, high = self.dependent_range(drawn[self.parent])
        if low > high:
            raise UnsatisfiableSpaceError(self.name, low, high)
        return low, high

    def distribution(self, drawn: Mapping[str, Any]) -> BaseDistribution:
        if self.scale is Scale.CATEGORICAL:
            return CategoricalDistribution(list(self.choices))
        low, high = self.bounds(drawn)
        if self.scale is Scale.INT:
            return IntDistribution(int(low), int(high), step=int(self.step or 1))
        if self.scale is Scale.LOG:
            return FloatDistribution(low, high, log=True)
        return FloatDistribution(low, high, step=self.step)

    def suggest(self, trial: optuna.Trial, drawn: Mapping[str, Any]) -> Any:
        if self.scale is Scale.CATEGORICAL:
            return trial.suggest_categorical(self.name, list(self.choices))
        low, high = self.bounds(drawn)
        if self.scale is Scale.INT:
            return trial.suggest_int(self.name, int(low), int(high), step=int(self.step or 1))
        if self.scale is Scale.LOG:
            return trial.suggest_float(self.name, low, high, log=True)
        return trial.suggest_float(self.name, low, high, step=self.step)

    def contains(self, value: Any, drawn: Mapping[str, Any]) -> bool:
        if self.scale is Scale.CATEGORICAL:
            return value in self.choices
        low, high = self.bounds(drawn)
        tol = 1e-9 * max(1.0, abs(high))
        if not low - tol <= value <= high + tol:
            return False
        if self.step:
            k = (value - low) / self.step
            return abs(k - round(k)) < 1e-6
        return True


class SearchSpace:
    """Ordered specs; a dependent spec must follow its parent."""

    def __init__(self, specs: Sequence[ParamSpec]):
        seen: set[str] = set()
        for spec in specs:
            if spec.name in seen:
                raise ValidationError(f"Duplicate parameter {spec.name}")
            if spec.parent is not None and spec.parent not in seen:
                raise ValidationError(f"{spec.name} depends on {spec.parent}, which is not drawn before it")
            if spec.scale is Scale.CATEGORICAL and not spec.choices:
                raise ValidationError(f"{spec.name} has no choices")
            if spec.scale is Scale.LOG and spec.parent is None and spec.low <= 0:
                raise ValidationError(f"{spec.name} needs a positive lower bound on a log scale")
            seen.add(spec.name)
        self.specs = tuple(specs)

    def __iter__(self) -> Iterator[ParamSpec]:
        return iter(self.specs)

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.specs]

    def suggest(self, trial: optuna.Trial) -> dict[str, Any]:
        """Draw every parameter in order, resolving dependent ranges."""
        drawn: dict[str, Any] = {}
        for spec in self.specs:
            drawn[spec.name] = spec.suggest(trial, drawn)
        return drawn

    def distributions(self, params: Mapping[str, Any]) -> dict[str, BaseDistribution]:
        """Distributions a stored parameter map was drawn from (for replay)."""
        return {spec.name: spec.distribution(params) for spec in self.specs}

    def contains(self, params: Mapping[str, Any]) -> bool:
        return all(spec.name in params and spec.contains(params[spec.name], params) for spec in self.specs)


def depression_range(parent: float) -> tuple[float, float]:
    """[parent - 0.001, parent], lower end clamped for the log scale."""
    return max(parent - 0.001, LOG_FLOOR), parent


def time_window_range(parent: int) -> tuple[float, float]:
    """[parent - 5, parent + 5] with time constants kept >= 1."""
    return max(parent - 5, TIME_FLOOR), parent + 5


def unsupervised_space(variant: ModelVariant) -> SearchSpace:
    """
    Search space of Models 1 and 2.

    Model 1 has no inhibitory synapses and a single lag, so it omits the
    B/theta parameters and N_input.
    """
    if variant is ModelVariant.MODEL3:
        raise ValidationError("Model 3 hyperparameters are fixed, not tuned")

    specs = [
        ParamSpec("a_plus", Scale.LOG, 1e-4, 1e-2),
        ParamSpec("a_minus", Scale.LOG, parent="a_plus", dependent_range=depression_range),
        ParamSpec("tau_plus", Scale.INT, 5, 100),
        ParamSpec("tau_minus", Scale.INT, parent="tau_plus", dependent_range=time_window_range),
    ]
    if variant is ModelVariant.MODEL2:
        specs += [
            ParamSpec("b_plus", Scale.LOG, 1e-4, 1e-2),
            ParamSpec("b_minus", Scale.LOG, parent="b_plus", dependent_range=depression_range),
            ParamSpec("theta_plus", Scale.INT, 5, 100),
            ParamSpec("theta_minus", Scale.INT, parent="theta_plus", dependent_range=time_window_range),
        ]
    specs += [
        ParamSpec("beta", Scale.LINEAR, 0.5, 0.99, step=0.01),
        ParamSpec("v_thresh", Scale.LINEAR, 0.8, 2.5, step=0.1),
        ParamSpec("d_thresh", Scale.INT, 4, 16),
    ]
    if variant is ModelVariant.MODEL2:
        specs.append(ParamSpec("n_input", Scale.INT, 1, 10))
    specs.append(ParamSpec("n_hidden", Scale.CATEGORICAL, choices=(16, 32, 64, 128)))
    return SearchSpace(specs)
