"""
Spike Forecaster - Surrogate Spike Function

Heaviside spike on the forward pass, fast-sigmoid derivative
1 / (1 + slope * |x|)^2 on the backward pass.
"""

import torch

DEFAULT_SLOPE = 25.0


def surrogate_grad(x, slope: float = DEFAULT_SLOPE):
    """Fast-sigmoid derivative at x = v - v_thresh (floats, arrays or tensors)."""
    return 1.0 / (1.0 + slope * abs(x)) ** 2


class FastSigmoidSpike(torch.autograd.Function):
    @staticmethod
    def forward(ctx, x: torch.Tensor, slope: float) -> torch.Tensor:
        ctx.save_for_backward(x)
        ctx.slope = slope
        return (x >= 0).to(x.dtype)

    @staticmethod
    def backward(ctx, grad_spikes: torch.Tensor):
        (x,) = ctx.saved_tensors
        return grad_spikes * surrogate_grad(x, ctx.slope), None


def spike_fn(x: torch.Tensor, slope: float = DEFAULT_SLOPE, soft: bool = False) -> torch.Tensor:
    """
    Spike nonlinearity.

    With soft=True the forward pass is the fast sigmoid x / (1 + slope|x|)
    itself, whose exact derivative is the surrogate. Used to check the
    backward pass against finite differences.
    """
    if soft:
        return x / (1.0 + slope * torch.abs(x))
    return FastSigmoidSpike.apply(x, slope)
