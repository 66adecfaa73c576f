"""Per-realization capacity and BER evaluation, plus seeded Monte Carlo means."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .bitloading import BitLoadResult, qfunc


def sum_capacity(powers, true_squared_gains, noise_var: float) -> float:
    """Sum over subcarriers of log2(1 + P_i * g_i / noise_var), in bits/symbol.

    Always evaluated with the true squared gains: allocation may have acted
    on quantized or interpolated estimates, but the realized rate depends on
    the channel that actually occurred.
    """
    powers = np.asarray(powers, dtype=float)
    gains = np.asarray(true_squared_gains, dtype=float)
    if powers.shape != gains.shape:
        raise ValueError("powers and gains must have matching shapes")
    if noise_var <= 0:
        raise ValueError("noise_var must be positive")
    return float(np.log2(1.0 + powers * gains / noise_var).sum())


def subcarrier_symbol_error(
    power: float, true_gain_sq: float, noise_var: float, bits: int
) -> float:
    """Square-QAM symbol error 4*Q(sqrt(3*P*g / (noise*(2^c - 1)))), clipped to 1.

    Only defined for loaded subcarriers (2, 4, or 6 bits); skip unloaded ones.
    """
    if bits not in (2, 4, 6):
        raise ValueError("bits must be 2, 4, or 6 on a loaded subcarrier")
    if power < 0:
        raise ValueError("power must be non-negative")
    arg = 3.0 * power * true_gain_sq / (noise_var * (2.0**bits - 1.0))
    return float(min(4.0 * qfunc(np.sqrt(arg)), 1.0))


def system_ber(load: BitLoadResult, true_squared_gains, noise_var: float) -> float:
    """Mean over all N subcarriers of symbol error / bits; unloaded ones add 0.

    Per-subcarrier BER is approximated by the Gray-coding bound
    SER_i / c_i; the average still divides by the full N so that leaving
    subcarriers unloaded is not free.
    """
    gains = np.asarray(true_squared_gains, dtype=float)
    bits = load.bits
    loaded = bits > 0
    if not loaded.any():
        raise ValueError("no loaded subcarriers; system BER undefined")
    arg = (
        3.0
        * load.powers[loaded]
        * gains[loaded]
        / (noise_var * (np.exp2(bits[loaded]) - 1.0))
    )
    ser = np.minimum(4.0 * qfunc(np.sqrt(arg)), 1.0)
    return float((ser / bits[loaded]).sum() / len(bits))


def monte_carlo_mean(
    evaluate: Callable[[np.random.Generator], float],
    num_trials: int,
    master_seed: int,
    stream: int = 0,
) -> tuple[float, float]:
    """Sample mean and standard error of ``evaluate`` over seeded trials.

    Trial t draws from default_rng([master_seed, stream, t]), so every trial
    is reproducible in isolation, results cannot depend on execution order,
    and distinct streams (training vs evaluation) never share randomness.
    """
    if num_trials < 1:
        raise ValueError("num_trials must be >= 1")
    samples = np.empty(num_trials)
    for t in range(num_trials):
        samples[t] = evaluate(np.random.default_rng([master_seed, stream, t]))
    mean = float(samples.mean())
    if num_trials == 1:
        return mean, 0.0
    return mean, float(samples.std(ddof=1) / np.sqrt(num_trials))
