"""
Spike Forecaster - Spike-Count Loss
"""

import torch


def count_targets(labels: torch.Tensor, timesteps: int, target_hi: float, target_lo: float) -> torch.Tensor:
    """(B, 2) target counts: target_hi * T for the labelled class, target_lo * T otherwise."""
    labels = labels.long()
    targets = torch.full((labels.shape[0], 2), target_lo * timesteps, dtype=torch.float64)
    targets[torch.arange(labels.shape[0]), labels] = target_hi * timesteps
    return targets


def count_mse_loss(
    counts: torch.Tensor,
    labels: torch.Tensor,
    timesteps: int,
    target_hi: float = 0.8,
    target_lo: float = 0.2,
) -> torch.Tensor:
    """
    Squared count error summed over both output neurons, averaged over
    the batch.

    Args:
        counts: (B, 2) output spike counts.
        labels: (B,) class indices, 1 for a real spike.
    """
    targets = count_targets(labels, timesteps, target_hi, target_lo)
    return ((counts.to(torch.float64) - targets) ** 2).sum(dim=1).mean()
