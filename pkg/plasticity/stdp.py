"""
Spike Forecaster - Spike-Timing-Dependent Plasticity

Exponential learning window

    W(dt) =  A+ exp(-dt / tau+)   dt > 0  (pre before post)
          = -A- exp( dt / tau-)   dt < 0
          =  0                    dt = 0

applied all-to-all within one timestamp's T-step window. The pairwise
sum is realized with exponential traces: x(t) is the decayed count of
spikes strictly before t, and every post spike collects A+ * x_pre while
every pre spike pays A- * x_post. Inhibitory synapses use (B+-, theta+-)
and have the update subtracted.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from app.exceptions import ShapeMismatchError, ValidationError
from snn.topology import SynapseSign


@dataclass(frozen=True, slots=True)
class StdpParams:
    a_plus: float
    a_minus: float
    tau_plus: float
    tau_minus: float
    b_plus: float = 0.0016
    b_minus: float = 0.0009
    theta_plus: float = 51.0
    theta_minus: float = 51.0
    eta: float = 1.0

    def __post_init__(self) -> None:
        rates = (self.a_plus, self.a_minus, self.b_plus, self.b_minus, self.eta)
        if any(not r > 0 for r in rates):
            raise ValidationError("STDP rates must be positive")
        if self.a_minus > self.a_plus:
            raise ValidationError(
                f"a_minus ({self.a_minus}) must not exceed a_plus ({self.a_plus})",
            )
        if min(self.tau_plus, self.tau_minus, self.theta_plus, self.theta_minus) < 1:
            raise ValidationError("STDP time constants must be >= 1")

    def window_params(self, sign: SynapseSign) -> tuple[float, float, float, float]:
        """(rate+, rate-, tau+, tau-) for a synapse sign."""
        if sign is SynapseSign.INHIBITORY:
            return self.b_plus, self.b_minus, self.theta_plus, self.theta_minus
        return self.a_plus, self.a_minus, self.tau_plus, self.tau_minus


def stdp_window(dt: int, params: StdpParams, sign: SynapseSign = SynapseSign.EXCITATORY) -> float:
    """Weight change for one pre/post pair separated by dt = t_post - t_pre."""
    rate_plus, rate_minus, tau_plus, tau_minus = params.window_params(sign)
    if dt > 0:
        dw = rate_plus * np.exp(-dt / tau_plus)
    elif dt < 0:
        dw = -rate_minus * np.exp(dt / tau_minus)
    else:
        dw = 0.0
    dw = params.eta * float(dw)
    return -dw if sign is SynapseSign.INHIBITORY else dw


@lru_cache(maxsize=64)
def _trace_kernel(timesteps: int, tau: float) -> np.ndarray:
    # kernel[t, s] = exp(-(t - s) / tau) for s < t, else 0
    lag = np.arange(timesteps)[:, None] - np.arange(timesteps)[None, :]
    kernel = np.where(lag > 0, np.exp(-np.maximum(lag, 0) / tau), 0.0)
    kernel.setflags(write=False)
    return kernel


def spike_traces(raster: np.ndarray, tau: float) -> np.ndarray:
    """Trace x(t) per neuron for a T x n raster (spikes before t only)."""
    raster = np.asarray(raster, dtype=np.float64)
    return _trace_kernel(raster.shape[0], float(tau)) @ raster


def apply_stdp(
    pre: np.ndarray,
    post: np.ndarray,
    params: StdpParams,
    sign: SynapseSign = SynapseSign.EXCITATORY,
) -> np.ndarray:
    """
    Weight deltas (n_pre x n_post) for one timestamp.

    Args:
        pre: T x n_pre presynaptic raster.
        post: T x n_post postsynaptic raster.

    Raises:
        ShapeMismatchError: rasters cover different numbers of steps.
    """
    pre = np.asarray(pre, dtype=np.float64)
    post = np.asarray(post, dtype=np.float64)
    if pre.shape[0] != post.shape[0]:
        raise ShapeMismatchError(
            f"Raster lengths differ: {pre.shape[0]} vs {post.shape[0]}",
        )

    rate_plus, rate_minus, tau_plus, tau_minus = params.window_params(sign)
    x_pre = spike_traces(pre, tau_plus)
    x_post = spike_traces(post, tau_minus)
    delta = params.eta * (rate_plus * (x_pre.T @ post) - rate_minus * (pre.T @ x_post))
    return -delta if sign is SynapseSign.INHIBITORY else delta
