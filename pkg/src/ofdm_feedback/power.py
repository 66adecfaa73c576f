"""Transmit power allocation across subcarriers under a total power budget."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quantizer import GAIN_QUANTIZER_CEILING

# Cluster averages of unit-mean gains rarely clear 4, so the on/off threshold
# search shares the quantizer's gain range.
DEFAULT_THRESHOLD_GRID = np.linspace(0.0, GAIN_QUANTIZER_CEILING, 200)


@dataclass(frozen=True)
class PowerAllocation:
    powers: np.ndarray
    total_power: float
    water_level: float | None = None

    def __post_init__(self):
        if np.any(self.powers < 0):
            raise ValueError("negative subcarrier power")
        if self.powers.sum() > self.total_power * (1.0 + 1e-9):
            raise ValueError("allocation exceeds the power budget")


def uniform_allocate(num_subcarriers: int, total_power: float) -> PowerAllocation:
    """Spread the budget evenly over all subcarriers."""
    _check_budget(total_power)
    if num_subcarriers < 1:
        raise ValueError("num_subcarriers must be >= 1")
    p = np.full(num_subcarriers, total_power / num_subcarriers)
    return PowerAllocation(powers=p, total_power=total_power)


def waterfill_allocate(
    gains: np.ndarray, noise_var: float, total_power: float
) -> PowerAllocation:
    """Water-filling: P_i = max(0, level - noise_var/gain_i).

    Exact active-set solution. With the noise-to-gain ratios sorted
    ascending, the water level for the n smallest being active is
    level(n) = (P_T + sum of those n ratios) / n, and feasibility
    (level(n) > ratio_n) is monotone in n, so the answer is the largest
    feasible prefix. No bisection, no tolerance on the budget.
    """
    gains = np.asarray(gains, dtype=float)
    _check_budget(total_power)
    if noise_var <= 0:
        raise ValueError("noise_var must be positive")
    if np.any(gains <= 0):
        raise ValueError("gains must be positive; floor them before allocating")
    ratios = noise_var / gains
    sorted_ratios = np.sort(ratios)
    counts = np.arange(1, len(gains) + 1, dtype=float)
    levels = (total_power + np.cumsum(sorted_ratios)) / counts
    feasible = levels > sorted_ratios  # feasible[0] always holds: P_T > 0
    n = int(np.nonzero(feasible)[0][-1]) + 1
    level = float(levels[n - 1])
    powers = np.maximum(level - ratios, 0.0)
    return PowerAllocation(powers=powers, total_power=total_power, water_level=level)


def cluster_averages(gains: np.ndarray, cluster_size: int) -> np.ndarray:
    """Mean gain of each block of ``cluster_size`` adjacent subcarriers.

    Operates on the last axis, so a (trials, N) stack of gain vectors yields
    a (trials, K) stack of averages. The last cluster may be shorter when
    the cluster size does not divide N; it is averaged over its actual size.
    """
    gains = np.asarray(gains, dtype=float)
    n = gains.shape[-1]
    if cluster_size < 1 or cluster_size > n:
        raise ValueError(f"cluster_size must be in [1, {n}]")
    edges = np.arange(0, n, cluster_size)
    sizes = np.diff(np.append(edges, n))
    return np.add.reduceat(gains, edges, axis=-1) / sizes


def onoff_flags_with_fallback(averages: np.ndarray, threshold: float) -> np.ndarray:
    """Receiver-side activation flags: average >= threshold, best forced on.

    When every cluster misses the threshold, the strongest one is activated
    so the transmitter never idles the whole budget. The fallback has to
    happen here, on the receiver side: the transmitter only ever sees the
    flags and could not recover which cluster was best.
    """
    averages = np.asarray(averages, dtype=float)
    flags = averages >= threshold
    if not flags.any():
        flags[int(np.argmax(averages))] = True
    return flags


def onoff_powers_from_flags(
    flags, cluster_size: int, num_subcarriers: int, total_power: float
) -> PowerAllocation:
    """Split the budget evenly over every subcarrier in a flagged cluster."""
    flags = np.asarray(flags, dtype=bool)
    _check_budget(total_power)
    num_clusters = -(-num_subcarriers // cluster_size)
    if len(flags) != num_clusters:
        raise ValueError(f"expected {num_clusters} flags, got {len(flags)}")
    if not flags.any():
        raise ValueError("no active clusters; apply the fallback before allocating")
    per_sub = np.repeat(flags, cluster_size)[:num_subcarriers]
    powers = np.where(per_sub, total_power / per_sub.sum(), 0.0)
    return PowerAllocation(powers=powers, total_power=total_power)


def onoff_allocate(
    averages: np.ndarray, cluster_size: int, num_subcarriers: int,
    threshold: float, total_power: float,
) -> PowerAllocation:
    """Clustered on/off allocation from cluster averages, fallback included."""
    flags = onoff_flags_with_fallback(averages, threshold)
    return onoff_powers_from_flags(flags, cluster_size, num_subcarriers, total_power)


def optimize_threshold(
    training_gains: np.ndarray,
    cluster_size: int,
    noise_var: float,
    total_power: float,
    grid: np.ndarray | None = None,
) -> float:
    """Grid-search the on/off threshold that maximizes mean training capacity.

    Evaluates every candidate on the same (trials, N) stack of training gain
    vectors and returns the capacity-maximizing grid point; exact ties go to
    the smaller threshold. The returned value is meant to be trained once on
    draws disjoint from evaluation and then held fixed.
    """
    gains = np.atleast_2d(np.asarray(training_gains, dtype=float))
    if gains.size == 0:
        raise ValueError("empty training set")
    grid = DEFAULT_THRESHOLD_GRID if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty threshold grid")
    n = gains.shape[-1]
    averages = cluster_averages(gains, cluster_size)
    best_cluster = np.argmax(averages, axis=-1)
    rows = np.arange(len(gains))
    best_capacity = -np.inf
    best_mu = None
    for mu in grid:
        flags = averages >= mu
        dead = ~flags.any(axis=-1)
        flags[rows[dead], best_cluster[dead]] = True
        per_sub = np.repeat(flags, cluster_size, axis=-1)[:, :n]
        active = per_sub.sum(axis=-1, keepdims=True)
        powers = np.where(per_sub, total_power / active, 0.0)
        capacity = np.log2(1.0 + powers * gains / noise_var).sum(axis=-1).mean()
        if capacity > best_capacity:
            best_capacity = capacity
            best_mu = float(mu)
    return best_mu


def _check_budget(total_power: float) -> None:
    if total_power <= 0:
        raise ValueError("total_power must be positive")
