"""
Spike Forecaster - Model Service

Builds, fits and runs the three model variants behind one interface, so
the tuner, the rolling backtest and the CLI treat them alike.
"""

from dataclasses import dataclass, field

import numpy as np
import structlog

from app.schemas import EpochStats, ModelConfig, ModelVariant, TrainingLogRow, UnsupervisedHyperparams
from metrics.evaluation import align_predictions
from plasticity.stdp import StdpParams
from plasticity.trainer import train_unsupervised
from preprocessing.encoding import SpikeTensor
from services.day_service import PreparedDay
from snn.engine import predict
from snn.lif import LifParams
from snn.network import Network, init_network
from snn.topology import build_topology
from supervised.trainer import train_supervised

logger = structlog.get_logger(__name__)


@dataclass
class FitResult:
    network: Network
    training_log: list[TrainingLogRow] = field(default_factory=list)
    loss_history: list[EpochStats] = field(default_factory=list)


def stdp_params(hyperparams: UnsupervisedHyperparams) -> StdpParams:
    return StdpParams(
        a_plus=hyperparams.a_plus,
        a_minus=hyperparams.a_minus,
        tau_plus=hyperparams.tau_plus,
        tau_minus=hyperparams.tau_minus,
        b_plus=hyperparams.b_plus,
        b_minus=hyperparams.b_minus,
        theta_plus=hyperparams.theta_plus,
        theta_minus=hyperparams.theta_minus,
        eta=hyperparams.eta,
    )


def effective_n_input(config: ModelConfig) -> int:
    """Lag count the variant sees; Model 1 always uses a single lag."""
    if config.variant is ModelVariant.MODEL1:
        return 1
    return config.hyperparams.n_input


def build_network(config: ModelConfig, n_channels: int, seed: int) -> Network:
    """
    Fresh network for the configured variant.

    Args:
        config: Model section of the run config.
        n_channels: Input width of the features the network will see.
        seed: Weight initialisation seed.
    """
    if config.variant is ModelVariant.MODEL3:
        train = config.supervised
        topology = build_topology(ModelVariant.MODEL3, n_input=n_channels, n_hidden=train.n_hidden)
        return init_network(topology, LifParams(beta=train.beta, v_thresh=train.v_thresh), seed=seed)

    hp = config.hyperparams
    topology = build_topology(config.variant, n_input=effective_n_input(config), n_hidden=hp.n_hidden)
    return init_network(
        topology,
        LifParams(beta=hp.beta, v_thresh=hp.v_thresh),
        seed=seed,
        d_thresh=hp.d_thresh,
    )


def fit(network: Network, spikes: SpikeTensor, is_real: np.ndarray, labeled: np.ndarray, config: ModelConfig, seed: int) -> FitResult:
    """
    Train a network on one row stream.

    Models 1/2 learn from every row without labels. Model 3 trains on the
    labelled rows only, with class 1 for a real spike.
    """
    if config.variant.is_unsupervised:
        result = train_unsupervised(network, spikes, stdp_params(config.hyperparams), log_every=config.log_every)
        return FitResult(network=result.network, training_log=result.log)

    rows = np.flatnonzero(labeled)
    supervised = train_supervised(
        network,
        spikes.take(rows),
        np.asarray(is_real, dtype=np.int64)[rows],
        config.supervised,
        seed=seed,
    )
    return FitResult(network=supervised.network, loss_history=supervised.history)


def fit_day(network: Network, day: PreparedDay, config: ModelConfig, seed: int) -> FitResult:
    truth = day.row_truth
    logger.info("Fitting model", variant=config.variant.value, date=day.date, rows=day.spikes.n_timestamps)
    return fit(network, day.spikes, truth.is_real, truth.labeled, config, seed)


def predict_day(network: Network, day: PreparedDay) -> np.ndarray:
    """Boolean spike predictions on the day's bar grid."""
    return align_predictions(day.features.row_index, predict(network, day.spikes), day.n_bars)
