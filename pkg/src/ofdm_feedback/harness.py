"""Named allocation schemes, parameter sweeps, and figure-style experiment bundles."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from . import bitloading, interpolation, metrics, power, quantizer
from .channel import frequency_response, sample_taps

DEFAULT_SEED = 12345
EVAL_STREAM = 0
TRAINING_STREAM = 1

SCHEMES = (
    "uniform",
    "onoff_clustered",
    "waterfill_linear_interp",
    "waterfill_quadratic_interp",
    "waterfill_perfect",
    "bitload_linear_interp",
    "bitload_quadratic_interp",
    "bitload_perfect",
)
INTERP_SCHEMES = frozenset(s for s in SCHEMES if "interp" in s)
BER_SCHEMES = frozenset(s for s in SCHEMES if s.startswith("bitload"))
CLUSTERED_SCHEMES = frozenset(("onoff_clustered",)) | INTERP_SCHEMES


@dataclass(frozen=True)
class SchemeConfig:
    """One experiment operating point.

    num_nodes (k) and cluster_size (r) are alternates: on/off treats the
    cluster size as fundamental (k = ceil(n/r)), interpolation treats the
    node count as fundamental (r = floor((n-1)/(k-1))). Either may be given;
    both together must agree.
    """

    scheme: str
    num_subcarriers: int = 128
    num_taps: int = 10
    num_nodes: int | None = None
    cluster_size: int | None = None
    feedback_bits: int = 128
    total_bits: int = 128
    total_power: float = 1.0
    noise_var: float = 0.1
    target_ser: float = 1e-3
    num_trials: int = 3000
    master_seed: int = DEFAULT_SEED
    threshold_training_trials: int = 500
    gain_exponent: int = 1
    quantize_nodes: bool = True

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(
                f"unknown scheme {self.scheme!r}; expected one of {', '.join(SCHEMES)}"
            )
        if self.num_subcarriers < 1:
            raise ValueError("n must be >= 1")
        if not 1 <= self.num_taps <= self.num_subcarriers:
            raise ValueError("m must satisfy 1 <= m <= n")
        if self.num_nodes is not None and self.num_nodes < 1:
            raise ValueError("k must be >= 1")
        if self.cluster_size is not None and self.cluster_size < 1:
            raise ValueError("r must be >= 1")
        if self.feedback_bits < 0:
            raise ValueError("b must be >= 0")
        if self.total_bits < 0 or self.total_bits % 2 != 0:
            raise ValueError("c_b must be a non-negative even integer")
        if self.total_power <= 0:
            raise ValueError("p_t must be positive")
        if self.noise_var <= 0:
            raise ValueError("noise_var must be positive")
        if not 0 < self.target_ser < 1:
            raise ValueError("p_e must lie in (0, 1)")
        if self.num_trials < 1:
            raise ValueError("trials must be >= 1")
        if self.threshold_training_trials < 1:
            raise ValueError("threshold_training_trials must be >= 1")
        if self.gain_exponent not in (1, 2):
            raise ValueError("gain_exponent must be 1 or 2")

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.total_power / self.noise_var)


@dataclass(frozen=True)
class ExperimentRecord:
    """One evaluated operating point: config snapshot plus the Monte Carlo result."""

    scheme: str
    metric: str
    num_subcarriers: int
    num_taps: int
    num_nodes: int
    cluster_size: int
    feedback_budget: int
    total_bits: int
    total_power: float
    noise_var: float
    num_trials: int
    master_seed: int
    mean: float
    stderr: float
    feedback_bits_used: int
    wall_time: float

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.total_power / self.noise_var)


def resolve_clustering(config: SchemeConfig) -> tuple[int, int]:
    """Resolve (num_nodes, cluster_size) for the scheme, or (0, 0) if unused.

    On/off: k = ceil(n/r); a requested k must be realizable by some integer r.
    Interpolation: nodes are laid out by the node plan, so r is normalized to
    the plan spacing floor((n-1)/(k-1)); a requested r selects k = ceil(n/r).
    A k/r pair satisfying neither relation is rejected as inconsistent.
    """
    n = config.num_subcarriers
    k, r = config.num_nodes, config.cluster_size
    if config.scheme == "onoff_clustered":
        if r is None:
            if k is None:
                k = min(32, n)
            r = -(-n // k)
            if -(-n // r) != k:
                raise ValueError(
                    f"k={k} is not realizable as ceil({n}/r) for any integer r"
                )
        else:
            derived = -(-n // r)
            if k is not None and k != derived:
                raise ValueError(
                    f"inconsistent k={k} and r={r}: ceil({n}/{r}) = {derived}"
                )
            k = derived
        return k, r
    if config.scheme in INTERP_SCHEMES:
        if k is None:
            if r is None:
                k = min(32, n)
            else:
                k = -(-n // r)
        if k < 2:
            raise ValueError("interpolation needs at least 2 nodes")
        if "quadratic" in config.scheme and k < 3:
            raise ValueError("quadratic interpolation needs at least 3 nodes")
        plan_spacing = 1 if k == n else (n - 1) // (k - 1)
        if r is not None and config.num_nodes is not None:
            if r != plan_spacing and -(-n // r) != k:
                raise ValueError(
                    f"inconsistent k={k} and r={r}: node spacing is {plan_spacing}"
                )
        return k, plan_spacing
    return 0, 0


def scheme_label(config: SchemeConfig) -> str:
    if config.scheme in INTERP_SCHEMES and not config.quantize_nodes:
        return config.scheme + "_unquantized"
    return config.scheme


def _draw_squared_gains(config: SchemeConfig, rng: np.random.Generator) -> np.ndarray:
    taps = sample_taps(config.num_taps, rng)
    return frequency_response(taps, config.num_subcarriers).squared_gains


def training_gains(config: SchemeConfig) -> np.ndarray:
    """Channel draws for threshold training, seed-disjoint from evaluation."""
    draws = np.empty((config.threshold_training_trials, config.num_subcarriers))
    for t in range(config.threshold_training_trials):
        rng = np.random.default_rng([config.master_seed, TRAINING_STREAM, t])
        draws[t] = _draw_squared_gains(config, rng)
    return draws


def train_onoff_threshold(config: SchemeConfig, cluster_size: int) -> float:
    return power.optimize_threshold(
        training_gains(config),
        cluster_size,
        config.noise_var,
        config.total_power,
    )


def _feedback_cost(config: SchemeConfig, k: int, r: int) -> int:
    if config.scheme == "onoff_clustered":
        return quantizer.onoff_feedback(np.zeros(k, dtype=bool), r).bit_cost
    if config.scheme in INTERP_SCHEMES and config.quantize_nodes:
        return k * quantizer.bits_per_node(config.feedback_bits, k)
    return 0


def _make_evaluator(config: SchemeConfig, k: int, r: int, threshold: float | None):
    """Build the per-trial closure: rng -> capacity or BER sample."""
    n = config.num_subcarriers
    noise = config.noise_var
    p_t = config.total_power
    scheme = config.scheme

    if scheme == "uniform":
        powers = power.uniform_allocate(n, p_t).powers

        def evaluate(rng):
            return metrics.sum_capacity(powers, _draw_squared_gains(config, rng), noise)

        return evaluate

    if scheme == "waterfill_perfect":

        def evaluate(rng):
            g = _draw_squared_gains(config, rng)
            alloc = power.waterfill_allocate(
                np.maximum(g, interpolation.EPS_GAIN), noise, p_t
            )
            return metrics.sum_capacity(alloc.powers, g, noise)

        return evaluate

    if scheme == "onoff_clustered":
        expected_cost = _feedback_cost(config, k, r)

        def evaluate(rng):
            g = _draw_squared_gains(config, rng)
            flags = power.onoff_flags_with_fallback(
                power.cluster_averages(g, r), threshold
            )
            word = quantizer.onoff_feedback(flags, r)
            assert word.bit_cost == expected_cost
            alloc = power.onoff_powers_from_flags(
                np.asarray(word.payload, dtype=bool), r, n, p_t
            )
            return metrics.sum_capacity(alloc.powers, g, noise)

        return evaluate

    if scheme in INTERP_SCHEMES:
        plan = interpolation.make_node_plan(n, k)
        interp = (
            interpolation.interpolate_linear
            if "linear" in scheme
            else interpolation.interpolate_quadratic
        )
        spec = None
        if config.quantize_nodes:
            spec = quantizer.gain_quantizer(quantizer.bits_per_node(config.feedback_bits, k))

        def estimate_gains(g):
            node_gains = g[plan.node_indices]
            if spec is not None:
                word = quantizer.gains_feedback(
                    quantizer.encode(node_gains, spec), spec, plan.spacing
                )
                assert word.bit_cost <= config.feedback_bits
                node_gains = quantizer.decode(np.asarray(word.payload), spec)
            return interp(plan, node_gains)

        if scheme in BER_SCHEMES:

            def evaluate(rng):
                g = _draw_squared_gains(config, rng)
                load = bitloading.greedy_bitload(
                    estimate_gains(g),
                    noise,
                    config.total_bits,
                    config.target_ser,
                    config.gain_exponent,
                )
                return metrics.system_ber(
                    bitloading.scale_to_budget(load, p_t), g, noise
                )

        else:

            def evaluate(rng):
                g = _draw_squared_gains(config, rng)
                alloc = power.waterfill_allocate(estimate_gains(g), noise, p_t)
                return metrics.sum_capacity(alloc.powers, g, noise)

        return evaluate

    if scheme == "bitload_perfect":

        def evaluate(rng):
            g = _draw_squared_gains(config, rng)
            load = bitloading.greedy_bitload(
                np.maximum(g, interpolation.EPS_GAIN),
                noise,
                config.total_bits,
                config.target_ser,
                config.gain_exponent,
            )
            return metrics.system_ber(bitloading.scale_to_budget(load, p_t), g, noise)

        return evaluate

    raise AssertionError(f"unhandled scheme {scheme!r}")


def run_scheme(config: SchemeConfig) -> ExperimentRecord:
    """Monte Carlo evaluation of one operating point."""
    k, r = resolve_clustering(config)
    threshold = None
    if config.scheme == "onoff_clustered":
        threshold = train_onoff_threshold(config, r)
    evaluate = _make_evaluator(config, k, r, threshold)
    start = time.perf_counter()
    mean, stderr = metrics.monte_carlo_mean(
        evaluate, config.num_trials, config.master_seed, stream=EVAL_STREAM
    )
    wall = time.perf_counter() - start
    # Echo a requested cluster size as-is (it is the sweep coordinate);
    # otherwise report the resolved node spacing.
    r_reported = r
    if config.scheme in INTERP_SCHEMES and config.cluster_size is not None:
        r_reported = config.cluster_size
    return ExperimentRecord(
        scheme=scheme_label(config),
        metric="ber" if config.scheme in BER_SCHEMES else "capacity",
        num_subcarriers=config.num_subcarriers,
        num_taps=config.num_taps,
        num_nodes=k,
        cluster_size=r_reported,
        feedback_budget=config.feedback_bits,
        total_bits=config.total_bits,
        total_power=config.total_power,
        noise_var=config.noise_var,
        num_trials=config.num_trials,
        master_seed=config.master_seed,
        mean=mean,
        stderr=stderr,
        feedback_bits_used=_feedback_cost(config, k, r),
        wall_time=wall,
    )


SWEEP_AXES = ("K", "R", "B", "M", "SNR")


def _apply_axis(base: SchemeConfig, axis: str, value) -> SchemeConfig:
    if axis == "K":
        return replace(base, num_nodes=int(value), cluster_size=None)
    if axis == "R":
        return replace(base, cluster_size=int(value), num_nodes=None)
    if axis == "B":
        return replace(base, feedback_bits=int(value))
    if axis == "M":
        return replace(base, num_taps=int(value))
    if axis == "SNR":
        # Linear total SNR: P_T = SNR * noise_var.
        return replace(base, total_power=float(value) * base.noise_var)
    raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def sweep(axis: str, values, base: SchemeConfig) -> list[ExperimentRecord]:
    """Run the base config once per axis value, sharing the master seed."""
    axis = axis.strip().upper()
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    return [run_scheme(_apply_axis(base, axis, v)) for v in values]


def _snr_db_to_linear(values_db) -> list[float]:
    return [10.0 ** (db / 10.0) for db in values_db]


def _figure1(trials: int, seed: int) -> list[ExperimentRecord]:
    """On/off capacity vs cluster count, two delay spreads, water-filling bound."""
    ks = [1, 2, 4, 8, 16, 32, 64, 128]
    records = []
    for m in (5, 10):
        base = SchemeConfig(
            scheme="onoff_clustered", num_taps=m, num_trials=trials, master_seed=seed
        )
        records += sweep("K", ks, base)
        records.append(
            run_scheme(
                SchemeConfig(
                    scheme="waterfill_perfect",
                    num_taps=m,
                    num_trials=trials,
                    master_seed=seed,
                )
            )
        )
    return records


def _figure2(trials: int, seed: int) -> list[ExperimentRecord]:
    """Linear vs quadratic interpolation capacity over node count at B=128."""
    # Table-style K grid; quadratic needs K >= 3, so K in {1, 2} is dropped.
    ks = [4, 8, 16, 32, 64, 128]
    records = []
    for scheme in ("waterfill_linear_interp", "waterfill_quadratic_interp"):
        base = SchemeConfig(
            scheme=scheme, feedback_bits=128, num_trials=trials, master_seed=seed
        )
        records += sweep("K", ks, base)
    for scheme in ("waterfill_perfect", "uniform"):
        records.append(
            run_scheme(SchemeConfig(scheme=scheme, num_trials=trials, master_seed=seed))
        )
    return records


def _figure3(trials: int, seed: int) -> list[ExperimentRecord]:
    """Linear interpolation over node count for several feedback budgets."""
    all_ks = [2, 4, 8, 16, 32, 64, 128]
    records = []
    for b in (32, 64, 128):
        base = SchemeConfig(
            scheme="waterfill_linear_interp",
            feedback_bits=b,
            num_trials=trials,
            master_seed=seed,
        )
        records += sweep("K", [k for k in all_ks if k <= b], base)
    unquantized = SchemeConfig(
        scheme="waterfill_linear_interp",
        quantize_nodes=False,
        num_trials=trials,
        master_seed=seed,
    )
    records += sweep("K", all_ks, unquantized)
    records.append(
        run_scheme(
            SchemeConfig(scheme="waterfill_perfect", num_trials=trials, master_seed=seed)
        )
    )
    return records


def _figure4(trials: int, seed: int) -> list[ExperimentRecord]:
    """Capacity of every scheme against total SNR at B=128, K=32."""
    snrs = _snr_db_to_linear([0, 5, 10, 15, 20, 25, 30])
    records = []
    for scheme in (
        "uniform",
        "onoff_clustered",
        "waterfill_linear_interp",
        "waterfill_quadratic_interp",
        "waterfill_perfect",
    ):
        kwargs = {} if scheme in ("uniform", "waterfill_perfect") else {"num_nodes": 32}
        base = SchemeConfig(
            scheme=scheme, num_trials=trials, master_seed=seed, **kwargs
        )
        records += sweep("SNR", snrs, base)
    return records


def _figure5(trials: int, seed: int) -> list[ExperimentRecord]:
    """Bit-loading BER against total SNR for several cluster sizes at M=6."""
    snrs = _snr_db_to_linear([15.0, 17.5, 20.0, 22.5, 25.0, 27.5, 30.0])
    records = []
    for scheme in ("bitload_linear_interp", "bitload_quadratic_interp"):
        for r in (4, 8, 16):
            base = SchemeConfig(
                scheme=scheme,
                num_taps=6,
                cluster_size=r,
                num_trials=trials,
                master_seed=seed,
            )
            records += sweep("SNR", snrs, base)
    records += sweep(
        "SNR",
        snrs,
        SchemeConfig(
            scheme="bitload_perfect", num_taps=6, num_trials=trials, master_seed=seed
        ),
    )
    return records


def _figure6(trials: int, seed: int) -> list[ExperimentRecord]:
    """Bit-loading BER against cluster size for several delay spreads at 30 dB."""
    p_t = 10.0 ** (30.0 / 10.0) * 0.1
    rs = [2, 4, 8, 16, 32, 64]
    records = []
    for m in (3, 12, 20):
        base = SchemeConfig(
            scheme="bitload_linear_interp",
            num_taps=m,
            feedback_bits=64,
            total_power=p_t,
            num_trials=trials,
            master_seed=seed,
        )
        records += sweep("R", rs, base)
        records.append(
            run_scheme(
                SchemeConfig(
                    scheme="bitload_perfect",
                    num_taps=m,
                    total_power=p_t,
                    num_trials=trials,
                    master_seed=seed,
                )
            )
        )
    return records


_FIGURES = {
    1: _figure1,
    2: _figure2,
    3: _figure3,
    4: _figure4,
    5: _figure5,
    6: _figure6,
}


def figure_bundle(
    figure: int, num_trials: int | None = None, master_seed: int | None = None
) -> list[ExperimentRecord]:
    """All curves of one result figure, in deterministic record order."""
    if figure not in _FIGURES:
        raise ValueError(f"figure must be in 1..6, got {figure}")
    trials = 3000 if num_trials is None else num_trials
    seed = DEFAULT_SEED if master_seed is None else master_seed
    return _FIGURES[figure](trials, seed)
