"""Rayleigh multipath channel draws and their OFDM frequency response."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class ChannelTaps:
    """Time-domain impulse response: ``num_taps`` i.i.d. complex Gaussian taps."""

    taps: np.ndarray
    num_taps: int

    def __post_init__(self):
        if self.num_taps < 1:
            raise ValueError("num_taps must be >= 1")
        if len(self.taps) != self.num_taps:
            raise ValueError(
                f"taps has length {len(self.taps)}, expected num_taps={self.num_taps}"
            )


@dataclass(frozen=True)
class ChannelRealization:
    """One channel draw together with its N-point frequency response."""

    taps: ChannelTaps
    response: np.ndarray
    squared_gains: np.ndarray

    @property
    def num_subcarriers(self) -> int:
        return len(self.response)


def sample_taps(num_taps: int, rng: np.random.Generator) -> ChannelTaps:
    """Draw ``num_taps`` i.i.d. circularly-symmetric complex Gaussian taps.

    Uniform power delay profile: each tap has complex variance 1/num_taps
    (real and imaginary parts each 1/(2*num_taps)), so the expected total
    tap energy is 1 regardless of the number of taps.
    """
    if num_taps < 1:
        raise ValueError("num_taps must be >= 1")
    scale = np.sqrt(1.0 / (2.0 * num_taps))
    z = rng.standard_normal((2, num_taps))
    return ChannelTaps(taps=scale * (z[0] + 1j * z[1]), num_taps=num_taps)


@lru_cache(maxsize=32)
def _phase_matrix(num_subcarriers: int, num_taps: int) -> np.ndarray:
    """(N, M) DFT phase factors, cached since Monte Carlo reuses one shape."""
    n, m = num_subcarriers, num_taps
    return np.exp((-2j * np.pi / n) * np.outer(np.arange(n), np.arange(m)))


def frequency_response(taps: ChannelTaps, num_subcarriers: int) -> ChannelRealization:
    """Evaluate the subcarrier response H(i) = sum_m h_m exp(-2j*pi*m*i/N).

    Direct summation over the M tap terms per subcarrier; M is small here
    (<= 20) so an FFT buys nothing.
    """
    m = taps.num_taps
    n = num_subcarriers
    if n < 1:
        raise ValueError("num_subcarriers must be >= 1")
    if m > n:
        raise ValueError(f"number of taps ({m}) exceeds number of subcarriers ({n})")
    response = _phase_matrix(n, m) @ taps.taps
    squared = response.real**2 + response.imag**2
    return ChannelRealization(taps=taps, response=response, squared_gains=squared)
