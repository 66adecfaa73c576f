"""Greedy discrete bit loading onto square-QAM constellations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

# Square QAM only: 4/16/64-QAM, i.e. 2/4/6 bits, loaded two bits at a time.
BITS_STEP = 2
MAX_BITS_PER_SUBCARRIER = 6


def qfunc(x):
    """Gaussian tail probability Q(x) = P(Z > x) for standard normal Z."""
    return 0.5 * special.erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))


def qfunc_inv(p):
    """Inverse of ``qfunc`` on (0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0) or np.any(p >= 1):
        raise ValueError("qfunc_inv requires 0 < p < 1")
    return np.sqrt(2.0) * special.erfcinv(2.0 * p)


def ser_gap(target_ser: float) -> float:
    """SNR gap factor [Q^-1(target_ser/4)]^2 for square-QAM SER targets."""
    return float(qfunc_inv(target_ser / 4.0) ** 2)


def required_power(
    bits, gain, noise_var: float, target_ser: float, gain_exponent: int = 1
):
    """Transmit power needed to hit the SER target with ``bits`` on one subcarrier.

    f(c) = noise_var * (2^c - 1) * [Q^-1(target_ser/4)]^2 / (3 * gain^e).
    The default exponent e=1 matches the square-QAM SER expression; e=2 is
    kept as a variant that penalizes weak subcarriers harder.
    """
    bits = np.asarray(bits)
    if np.any(bits % BITS_STEP != 0) or np.any(bits < 0) or np.any(
        bits > MAX_BITS_PER_SUBCARRIER
    ):
        raise ValueError(
            f"bits must be even and within [0, {MAX_BITS_PER_SUBCARRIER}]"
        )
    gain = np.asarray(gain, dtype=float)
    kappa = ser_gap(target_ser)
    base = noise_var * kappa / (3.0 * gain**gain_exponent)
    return base * (np.exp2(bits) - 1.0)


@dataclass(frozen=True)
class BitLoadResult:
    """Per-subcarrier constellation sizes and the powers that support them."""

    bits: np.ndarray
    powers: np.ndarray

    @property
    def total_bits(self) -> int:
        return int(self.bits.sum())

    @property
    def total_power(self) -> float:
        return float(self.powers.sum())


def greedy_bitload(
    gains: np.ndarray,
    noise_var: float,
    total_bits: int,
    target_ser: float,
    gain_exponent: int = 1,
    max_bits: int = MAX_BITS_PER_SUBCARRIER,
) -> BitLoadResult:
    """Load ``total_bits`` greedily, two bits at a time, where power is cheapest.

    Each round adds 2 bits to the subcarrier whose power increment is the
    smallest (ties break to the lowest index). The per-subcarrier increment
    f(c+2) - f(c) is geometric in c, so it is just multiplied by 4 each time
    a subcarrier wins a round; rounds are O(N).
    """
    gains = np.asarray(gains, dtype=float)
    n = len(gains)
    if np.any(gains <= 0):
        raise ValueError("gains must be positive; floor them before loading")
    if max_bits < BITS_STEP or max_bits % BITS_STEP != 0:
        raise ValueError("max_bits must be a positive multiple of 2")
    if total_bits < 0 or total_bits % BITS_STEP != 0:
        raise ValueError("total_bits must be a non-negative multiple of 2")
    if total_bits > n * max_bits:
        raise ValueError(
            f"cannot place {total_bits} bits on {n} subcarriers (cap {max_bits} each)"
        )
    kappa = ser_gap(target_ser)
    base = noise_var * kappa / (3.0 * gains**gain_exponent)
    bits = np.zeros(n, dtype=np.int64)
    # Cost of going from 0 to 2 bits: base * (2^2 - 1).
    step = base * 3.0
    for _ in range(total_bits // BITS_STEP):
        i = int(np.argmin(step))
        bits[i] += BITS_STEP
        if bits[i] >= max_bits:
            step[i] = np.inf
        else:
            step[i] *= 4.0
    powers = base * (np.exp2(bits) - 1.0)
    return BitLoadResult(bits=bits, powers=powers)


def scale_to_budget(result: BitLoadResult, total_power: float) -> BitLoadResult:
    """Rescale loaded powers to spend exactly ``total_power``.

    The greedy loader spends whatever the SER target demands; for SNR sweeps
    the powers are renormalized to the actual budget so the realized error
    rate reflects the power constraint.
    """
    if total_power <= 0:
        raise ValueError("total_power must be positive")
    spent = result.total_power
    if spent <= 0:
        raise ValueError("no bits loaded; nothing to scale")
    return BitLoadResult(bits=result.bits, powers=result.powers * (total_power / spent))
