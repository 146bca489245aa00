"""
Spike Forecaster - Pydantic Schemas

Run configuration, report and persistence models. Everything that is read
from or written to disk goes through one of these models.
"""

from enum import Enum
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# =============================================================================
# Enums
# =============================================================================

class ModelVariant(str, Enum):
    """Network architectures."""
    MODEL1 = "model1"
    MODEL2 = "model2"
    MODEL3 = "model3"

    @property
    def is_unsupervised(self) -> bool:
        return self is not ModelVariant.MODEL3


class Objective(str, Enum):
    """Optimisation objectives."""
    SA = "sa"
    PSA = "psa"


class StrategyMode(str, Enum):
    """Source of the entry signal."""
    SNN = "snn"
    NAIVE = "naive"
    RANDOM = "random"


class Direction(str, Enum):
    """Trade direction."""
    LONG = "long"
    SHORT = "short"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.LONG else -1


class SpikeClass(str, Enum):
    """Direction class of a labelled timestamp."""
    MOMENTUM = "momentum"
    REVERSION = "reversion"
    NONE = "none"


class TrialState(str, Enum):
    """Outcome of one optimisation trial."""
    COMPLETE = "complete"
    FAILED = "failed"


# =============================================================================
# Data Source Schemas
# =============================================================================

class SyntheticConfig(BaseModel):
    """Parameters of the synthetic tick generator."""
    model_config = ConfigDict(extra="forbid")

    n_days: int = Field(default=19, ge=1)
    ticks_per_day: int = Field(default=200_000, ge=0)
    base_price: float = Field(default=128.0, gt=0)
    noise_volatility: float = Field(default=1e-4, ge=0, le=1)
    spike_rate: float = Field(default=0.002, ge=0, le=1)
    spike_multiplier: float = Field(default=5.0, gt=0)
    momentum_persistence: float = Field(default=0.7, ge=0, le=1)
    mean_volume: float = Field(default=100.0, gt=0)
    volume_sigma: float = Field(default=1.0, gt=0)
    session_seconds: int = Field(default=23_400, ge=1)
    start_date: str = "2015-02-02"
    seed: int = 0


class DataSourceConfig(BaseModel):
    """Exactly one of a CSV directory or a synthetic generator."""
    model_config = ConfigDict(extra="forbid")

    csv_dir: Optional[str] = None
    synthetic: Optional[SyntheticConfig] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "DataSourceConfig":
        if (self.csv_dir is None) == (self.synthetic is None):
            raise ValueError("exactly one of csv_dir or synthetic must be set")
        return self


# =============================================================================
# Pipeline Schemas
# =============================================================================

class PreprocessConfig(BaseModel):
    """VWAP, feature, normalisation and encoding parameters."""
    model_config = ConfigDict(extra="forbid")

    window_n: int = Field(default=10, ge=1)
    lag_set: list[int] = Field(default_factory=lambda: [1, 3, 5])
    vol_window: int = Field(default=10, ge=1)
    q_low: float = Field(default=0.1, ge=0, le=1)
    q_high: float = Field(default=0.9, ge=0, le=1)
    upper_bound: float = Field(default=1.0, gt=0, le=1)
    timesteps: int = Field(default=20, ge=1)

    @model_validator(mode="after")
    def _quantiles_ordered(self) -> "PreprocessConfig":
        if self.q_low > self.q_high:
            raise ValueError("q_low must not exceed q_high")
        if not self.lag_set or min(self.lag_set) < 1:
            raise ValueError("lag_set must contain positive lags")
        return self


class LabelConfig(BaseModel):
    """Ground-truth labelling and PSA parameters."""
    model_config = ConfigDict(extra="forbid")

    window: int = Field(default=3, ge=1)
    alpha: float = Field(default=0.05, ge=0)


class UnsupervisedHyperparams(BaseModel):
    """Hyperparameters of Models 1 and 2 (the tuned search space)."""
    model_config = ConfigDict(extra="forbid")

    a_plus: float = Field(default=0.0067, gt=0)
    a_minus: float = Field(default=0.0063, gt=0)
    tau_plus: float = Field(default=71, ge=1)
    tau_minus: float = Field(default=72, ge=1)
    b_plus: float = Field(default=0.0016, gt=0)
    b_minus: float = Field(default=0.0009, gt=0)
    theta_plus: float = Field(default=51, ge=1)
    theta_minus: float = Field(default=51, ge=1)
    eta: float = Field(default=1.0, gt=0)
    beta: float = Field(default=0.79, gt=0, lt=1)
    v_thresh: float = Field(default=0.8, gt=0)
    d_thresh: int = Field(default=4, ge=0)
    n_input: int = Field(default=1, ge=1)
    n_hidden: int = Field(default=32, ge=2)

    @model_validator(mode="after")
    def _depression_bounded(self) -> "UnsupervisedHyperparams":
        if self.a_minus > self.a_plus:
            raise ValueError("a_minus must not exceed a_plus")
        if self.b_minus > self.b_plus:
            raise ValueError("b_minus must not exceed b_plus")
        if self.n_hidden % 2:
            raise ValueError("n_hidden must be even for the two-pathway split")
        return self


class TrainConfig(BaseModel):
    """Supervised (Model 3) training configuration."""
    model_config = ConfigDict(extra="forbid")

    learning_rate: float = Field(default=0.005, ge=0)
    n_hidden: int = Field(default=128, ge=1)
    v_thresh: float = Field(default=1.0, gt=0)
    beta: float = Field(default=0.9, gt=0, lt=1)
    epochs: int = Field(default=10, ge=1)
    batch_size: int = Field(default=64, ge=1)
    target_hi: float = Field(default=0.8, gt=0, le=1)
    target_lo: float = Field(default=0.2, gt=0, le=1)
    surrogate_slope: float = Field(default=25.0, gt=0)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _targets_ordered(self) -> "TrainConfig":
        if not self.target_lo < self.target_hi:
            raise ValueError("target_lo must be below target_hi")
        return self


class ModelConfig(BaseModel):
    """Model variant and where its hyperparameters come from."""
    model_config = ConfigDict(extra="forbid")

    variant: ModelVariant = ModelVariant.MODEL1
    hyperparams: UnsupervisedHyperparams = Field(default_factory=UnsupervisedHyperparams)
    study_path: Optional[str] = None
    supervised: TrainConfig = Field(default_factory=TrainConfig)
    log_every: int = Field(default=100, ge=1)


class TuneConfig(BaseModel):
    """Bayesian optimisation settings."""
    model_config = ConfigDict(extra="forbid")

    metric: Objective = Objective.PSA
    n_trials: int = Field(default=100, ge=1)
    batch_size: int = Field(default=5000, ge=1)
    gamma: float = Field(default=0.25, gt=0, le=1)
    n_startup: int = Field(default=10, ge=0)
    n_candidates: int = Field(default=24, ge=1)
    resume: bool = False


class StrategyConfig(BaseModel):
    """Spike-triggered momentum strategy."""
    model_config = ConfigDict(extra="forbid")

    lookback: int = Field(default=3, ge=1)
    hold: int = Field(default=3, ge=1)
    mode: StrategyMode = StrategyMode.SNN
    random_spike_prob: float = Field(default=0.5, ge=0, le=1)
    invert_direction: bool = False
    cost_bps: float = Field(default=0.0, ge=0)


class BacktestConfig(BaseModel):
    """Rolling experiment settings."""
    model_config = ConfigDict(extra="forbid")

    random_runs: int = Field(default=100, ge=1)
    repeats: int = Field(default=1, ge=1)
    trades_per_day: int = Field(default=1000, ge=1)
    baselines: bool = True
    train_day: int = Field(default=0, ge=0)


class RunConfig(BaseModel):
    """Top-level declarative run configuration (JSON document)."""
    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = 1
    data: DataSourceConfig = Field(
        default_factory=lambda: DataSourceConfig(synthetic=SyntheticConfig())
    )
    preprocess: PreprocessConfig = Field(default_factory=PreprocessConfig)
    labels: LabelConfig = Field(default_factory=LabelConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    tune: TuneConfig = Field(default_factory=TuneConfig)
    strategy: StrategyConfig = Field(default_factory=StrategyConfig)
    backtest: BacktestConfig = Field(default_factory=BacktestConfig)
    seed: int = Field(default=0, ge=0)
    out_dir: Optional[str] = None


# =============================================================================
# Report Schemas
# =============================================================================

def _check_rate(value: Optional[float]) -> Optional[float]:
    if value is not None and not 0.0 <= value <= 1.0:
        raise ValueError(f"rate {value} outside [0, 1]")
    return value


class MetricsReport(BaseModel):
    """Predictive metrics; undefined ratios are None (JSON null)."""
    spike_accuracy: Optional[float] = None
    momentum_spike_pct: Optional[float] = None
    spiking_rate: Optional[float] = None
    real_spiking_rate: Optional[float] = None
    tpr: Optional[float] = None
    fpr: Optional[float] = None
    psa: Optional[float] = None
    srd: Optional[float] = None
    n_labeled: float = 0
    n_predicted: float = 0
    n_real: float = 0

    check_rates = field_validator(
        "spike_accuracy",
        "momentum_spike_pct",
        "spiking_rate",
        "real_spiking_rate",
        "tpr",
        "fpr",
    )(_check_rate)


class TradingReport(BaseModel):
    """Trading performance metrics; undefined ratios are None."""
    cumulative_return: float = 0.0
    final_equity: float = 1.0
    sharpe: Optional[float] = None
    max_drawdown: float = Field(default=0.0, ge=0, le=1)
    win_rate: Optional[float] = None
    profit_factor: Optional[float] = None
    profit_loss_ratio: Optional[float] = None
    expectancy: Optional[float] = None
    n_trades: float = 0
    scaled_cumulative_return: Optional[float] = None

    check_win_rate = field_validator("win_rate")(_check_rate)


class ColumnReport(BaseModel):
    """One column of the model-vs-baseline comparison."""
    name: str
    metrics: MetricsReport
    trading: TradingReport


class DayReport(BaseModel):
    """Out-of-sample results for one train/test day pair."""
    train_day: str
    test_day: str
    metrics: MetricsReport
    trading: TradingReport


class BacktestReport(BaseModel):
    """Aggregate result of the rolling experiment."""
    variant: ModelVariant
    n_test_days: int
    columns: list[ColumnReport]
    per_day: list[DayReport]
    strategy: StrategyConfig
    hyperparams: dict[str, Any] = Field(default_factory=dict)


# =============================================================================
# Training Schemas
# =============================================================================

class EpochStats(BaseModel):
    """One row of the supervised loss history."""
    epoch: int
    mean_loss: float
    train_accuracy: float


class TrainingLogRow(BaseModel):
    """One row of the unsupervised training log."""
    timestamp_index: int
    group: str
    mean_weight: float
    homeostasis_applied: bool


# =============================================================================
# Hyperopt Schemas
# =============================================================================

class TrialRecord(BaseModel):
    """One persisted optimisation trial (one NDJSON line)."""
    trial_id: int
    params: dict[str, Any]
    metric: Objective
    score: Optional[float] = None
    srd: Optional[float] = None
    batch_index: int
    duration_ms: float = 0.0
    state: TrialState = TrialState.COMPLETE
    flag: Optional[str] = None


class StudyResult(BaseModel):
    """All trials of a study plus the best one."""
    variant: ModelVariant
    metric: Objective
    trials: list[TrialRecord]
    best: TrialRecord

    def best_curve(self) -> list[float]:
        """Cumulative best score after each trial (failed trials carry the previous best)."""
        curve: list[float] = []
        best = float("-inf")
        for trial in self.trials:
            if trial.state is TrialState.COMPLETE and trial.score is not None:
                best = max(best, trial.score)
            curve.append(best)
        return curve
