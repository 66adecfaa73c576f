"""Uniform scalar quantization of channel gains and feedback bit accounting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Squared gains of a unit-energy Rayleigh channel are Exp(1) distributed;
# P(X > 4) is about 1.8%, so the top bin absorbs a thin tail.
GAIN_QUANTIZER_CEILING = 4.0


class InsufficientFeedbackError(ValueError):
    """Feedback budget too small to describe the requested node set."""


@dataclass(frozen=True)
class QuantizerSpec:
    """Uniform quantizer over [lower, upper] with 2**bits_per_value levels."""

    bits_per_value: int
    lower: float
    upper: float

    def __post_init__(self):
        if self.bits_per_value < 1:
            raise ValueError("bits_per_value must be >= 1")
        if not self.upper > self.lower:
            raise ValueError("upper must exceed lower")

    @property
    def num_levels(self) -> int:
        return 2**self.bits_per_value

    @property
    def step(self) -> float:
        return (self.upper - self.lower) / self.num_levels


def gain_quantizer(bits_per_value: int) -> QuantizerSpec:
    """Quantizer spec used for feeding back squared channel gains."""
    return QuantizerSpec(
        bits_per_value=bits_per_value, lower=0.0, upper=GAIN_QUANTIZER_CEILING
    )


def encode(values, spec: QuantizerSpec) -> np.ndarray:
    """Map values to bin indices; values above the range clamp to the top bin."""
    values = np.asarray(values, dtype=float)
    if np.any(values < spec.lower):
        raise ValueError("value below quantizer range")
    scaled = np.floor((values - spec.lower) / spec.step)
    if spec.bits_per_value < 63:
        return np.clip(scaled.astype(np.int64), 0, spec.num_levels - 1)
    # Wide quantizers (budget split over very few nodes) overflow int64, so
    # fall back to Python integers.
    top = spec.num_levels - 1
    return np.array([min(int(v), top) for v in scaled], dtype=object)


def decode(indices, spec: QuantizerSpec) -> np.ndarray:
    """Midpoint reconstruction of quantizer bin indices."""
    indices = np.asarray(indices)
    if np.any(indices < 0) or np.any(indices >= spec.num_levels):
        raise ValueError("quantizer index out of range")
    return spec.lower + (indices.astype(float) + 0.5) * spec.step


def quantize(values, spec: QuantizerSpec) -> np.ndarray:
    """Round values to the midpoints of a uniform quantizer."""
    return decode(encode(values, spec), spec)


def bits_per_node(total_bits: int, num_nodes: int) -> int:
    """Equal split of the feedback budget across nodes; remainder discarded."""
    if num_nodes < 2:
        raise ValueError("num_nodes must be >= 2")
    if total_bits < num_nodes:
        raise InsufficientFeedbackError(
            f"budget of {total_bits} bits cannot give each of "
            f"{num_nodes} nodes at least one bit"
        )
    return total_bits // num_nodes


@dataclass(frozen=True)
class FeedbackWord:
    """One receiver-to-transmitter message: cluster flags or node gain indices.

    bit_cost is the accounting contract: K + ceil(log2 R) for on/off flags,
    K * bits_per_value for quantized gains.
    """

    scheme: str
    num_values: int
    spacing: int
    bits_per_value: int
    payload: tuple
    bit_cost: int

    def as_json_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "K": self.num_values,
            "R": self.spacing,
            "bits_per_value": self.bits_per_value,
            "payload": list(self.payload),
            "bit_cost": self.bit_cost,
        }


def onoff_feedback(flags, cluster_size: int) -> FeedbackWord:
    """K one-bit cluster flags plus ceil(log2 R) bits naming the cluster size."""
    flags = np.asarray(flags, dtype=bool)
    if cluster_size < 1:
        raise ValueError("cluster_size must be >= 1")
    k = len(flags)
    return FeedbackWord(
        scheme="onoff",
        num_values=k,
        spacing=cluster_size,
        bits_per_value=1,
        payload=tuple(bool(f) for f in flags),
        bit_cost=k + (cluster_size - 1).bit_length(),
    )


def gains_feedback(indices, spec: QuantizerSpec, spacing: int) -> FeedbackWord:
    """K quantizer indices describing node gains; costs K * bits_per_value."""
    indices = np.asarray(indices)
    if np.any(indices < 0) or np.any(indices >= spec.num_levels):
        raise ValueError("quantizer index out of range")
    k = len(indices)
    return FeedbackWord(
        scheme="gains",
        num_values=k,
        spacing=spacing,
        bits_per_value=spec.bits_per_value,
        payload=tuple(int(i) for i in indices),
        bit_cost=k * spec.bits_per_value,
    )
