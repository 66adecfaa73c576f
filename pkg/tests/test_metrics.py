"""Capacity/BER evaluation and the seeded Monte Carlo loop."""

import numpy as np
import pytest

from ofdm_feedback.bitloading import (
    BitLoadResult,
    greedy_bitload,
    qfunc,
    required_power,
)
from ofdm_feedback.metrics import (
    monte_carlo_mean,
    subcarrier_symbol_error,
    sum_capacity,
    system_ber,
)


class TestSumCapacity:
    def test_hand_values(self):
        assert sum_capacity([1.0], [1.0], 0.1) == pytest.approx(np.log2(11.0))
        assert sum_capacity([0.5, 0.5], [1.0, 1.0], 0.1) == pytest.approx(
            2 * np.log2(6.0)
        )
        assert sum_capacity([0.0, 1.0], [5.0, 0.0], 0.1) == 0.0

    def test_shape_and_noise_validation(self):
        with pytest.raises(ValueError):
            sum_capacity([1.0, 2.0], [1.0], 0.1)
        with pytest.raises(ValueError):
            sum_capacity([1.0], [1.0], 0.0)


class TestSubcarrierSymbolError:
    def test_zero_power_is_certain_error(self):
        # Q(0) = 1/2, so 4Q(0) clips at 1.
        assert subcarrier_symbol_error(0.0, 1.0, 0.1, 2) == 1.0

    def test_matches_formula(self):
        # 3 * P * g / (noise * 3) = 10 with P=1, g=1, noise=0.1, c=2.
        expected = 4.0 * qfunc(np.sqrt(10.0))
        assert subcarrier_symbol_error(1.0, 1.0, 0.1, 2) == pytest.approx(
            expected, rel=1e-12
        )

    def test_monotone_in_power_and_bits(self):
        errs = [subcarrier_symbol_error(p, 1.0, 0.1, 4) for p in (0.5, 1.0, 2.0)]
        assert errs[0] > errs[1] > errs[2]
        assert subcarrier_symbol_error(1.0, 1.0, 0.1, 6) > subcarrier_symbol_error(
            1.0, 1.0, 0.1, 2
        )

    def test_only_loaded_constellations_allowed(self):
        for bad in (0, 1, 3, 8):
            with pytest.raises(ValueError):
                subcarrier_symbol_error(1.0, 1.0, 0.1, bad)


class TestSystemBer:
    def test_single_loaded_subcarrier_hand_value(self):
        # One of two subcarriers carries 2 bits at SER target power, so its
        # SER is the target and the system average is target/2/2.
        target = 1e-3
        power = required_power(2, 1.0, 0.1, target)
        load = BitLoadResult(
            bits=np.array([2, 0]), powers=np.array([float(power), 0.0])
        )
        ber = system_ber(load, np.array([1.0, 1.0]), 0.1)
        assert ber == pytest.approx(target / 2.0 / 2.0, rel=1e-9)

    def test_matches_plain_loop(self, rng):
        gains = rng.exponential(size=32) + 1e-9
        load = greedy_bitload(gains, 0.1, 64, 1e-3)
        acc = 0.0
        for i in range(32):
            if load.bits[i] == 0:
                continue
            acc += (
                subcarrier_symbol_error(
                    float(load.powers[i]), float(gains[i]), 0.1, int(load.bits[i])
                )
                / load.bits[i]
            )
        assert system_ber(load, gains, 0.1) == pytest.approx(acc / 32, rel=1e-12)

    def test_unloaded_subcarriers_still_count_in_denominator(self):
        power = float(required_power(2, 1.0, 0.1, 1e-3))
        one_of_two = BitLoadResult(
            bits=np.array([2, 0]), powers=np.array([power, 0.0])
        )
        one_of_eight = BitLoadResult(
            bits=np.array([2] + [0] * 7), powers=np.array([power] + [0.0] * 7)
        )
        b2 = system_ber(one_of_two, np.ones(2), 0.1)
        b8 = system_ber(one_of_eight, np.ones(8), 0.1)
        assert b2 == pytest.approx(4 * b8, rel=1e-12)

    def test_no_loaded_subcarriers_rejected(self):
        empty = BitLoadResult(bits=np.zeros(4, dtype=int), powers=np.zeros(4))
        with pytest.raises(ValueError):
            system_ber(empty, np.ones(4), 0.1)


class TestMonteCarlo:
    def test_constant_evaluator(self):
        mean, stderr = monte_carlo_mean(lambda rng: 7.0, 25, master_seed=1)
        assert mean == 7.0
        assert stderr == 0.0

    def test_single_trial_has_zero_stderr(self):
        mean, stderr = monte_carlo_mean(lambda rng: rng.normal(), 1, master_seed=3)
        assert stderr == 0.0

    def test_reproducible_and_stream_separated(self):
        def draw(rng):
            return float(rng.normal())

        a = monte_carlo_mean(draw, 100, master_seed=5, stream=0)
        b = monte_carlo_mean(draw, 100, master_seed=5, stream=0)
        c = monte_carlo_mean(draw, 100, master_seed=5, stream=1)
        d = monte_carlo_mean(draw, 100, master_seed=6, stream=0)
        assert a == b
        assert a != c
        assert a != d

    def test_each_trial_seeded_independently(self):
        """Trial t is a pure function of (seed, stream, t), not of history."""
        seen = {}

        def record(rng):
            value = float(rng.normal())
            seen[len(seen)] = value
            return value

        monte_carlo_mean(record, 5, master_seed=42, stream=0)
        direct = float(np.random.default_rng([42, 0, 3]).normal())
        assert seen[3] == direct

    def test_stderr_matches_manual_formula(self):
        values = iter([1.0, 2.0, 3.0, 4.0])
        mean, stderr = monte_carlo_mean(lambda rng: next(values), 4, master_seed=0)
        assert mean == pytest.approx(2.5)
        assert stderr == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2.0)

    def test_zero_trials_rejected(self):
        with pytest.raises(ValueError):
            monte_carlo_mean(lambda rng: 0.0, 0, master_seed=1)
