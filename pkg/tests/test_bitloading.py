"""Q-function numerics and greedy QAM bit loading."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from ofdm_feedback.bitloading import (
    BitLoadResult,
    greedy_bitload,
    qfunc,
    qfunc_inv,
    required_power,
    scale_to_budget,
    ser_gap,
)


def qfunc_integral_oracle(x):
    """Numerical integration of the Gaussian tail density from x to infinity."""
    val, _ = integrate.quad(
        lambda t: np.exp(-(t**2) / 2.0) / np.sqrt(2.0 * np.pi), x, np.inf
    )
    return val


def exhaustive_bitload(gains, noise_var, total_bits, target_ser):
    """Minimum total power over every even bit vector hitting the budget."""
    best = np.inf
    for combo in itertools.product((0, 2, 4, 6), repeat=len(gains)):
        if sum(combo) != total_bits:
            continue
        power = required_power(
            np.array(combo), gains, noise_var, target_ser
        ).sum()
        best = min(best, power)
    return best


class TestQFunction:
    def test_known_values(self):
        assert qfunc(0.0) == pytest.approx(0.5, abs=1e-15)
        assert qfunc(1.2815515655446004) == pytest.approx(0.1, abs=1e-12)
        assert qfunc_inv(1e-3) == pytest.approx(3.0902, abs=1e-3)

    def test_matches_integral_oracle_on_grid(self):
        for x in np.linspace(-8.0, 8.0, 41):
            assert abs(qfunc(x) - qfunc_integral_oracle(x)) <= 1e-9

    @given(x=st.floats(min_value=-8.0, max_value=8.0))
    def test_tail_symmetry(self, x):
        assert qfunc(x) + qfunc(-x) == pytest.approx(1.0, abs=1e-12)

    @given(p=st.floats(min_value=1e-12, max_value=0.999))
    def test_inverse_roundtrip(self, p):
        assert qfunc(qfunc_inv(p)) == pytest.approx(p, rel=1e-9)

    def test_inverse_domain(self):
        with pytest.raises(ValueError):
            qfunc_inv(0.0)
        with pytest.raises(ValueError):
            qfunc_inv(1.0)
        assert qfunc_inv(0.5) == pytest.approx(0.0, abs=1e-15)


class TestRequiredPower:
    def test_zero_bits_costs_nothing(self):
        assert required_power(0, 1.0, 0.1, 1e-3) == 0.0

    def test_hand_value(self):
        # Target chosen so the SNR gap is exactly 30: with g=1 and
        # noise 0.1, two bits cost 0.1 * 30 * 3 / 3 = 3.
        target = 4.0 * qfunc(np.sqrt(30.0))
        assert ser_gap(target) == pytest.approx(30.0, rel=1e-12)
        assert required_power(2, 1.0, 0.1, target) == pytest.approx(3.0, rel=1e-12)

    def test_strictly_increasing_in_bits(self):
        costs = required_power(np.array([0, 2, 4, 6]), 1.3, 0.1, 1e-3)
        assert np.all(np.diff(costs) > 0)

    def test_gain_exponent_variant(self):
        p1 = required_power(4, 2.0, 0.1, 1e-3, gain_exponent=1)
        p2 = required_power(4, 2.0, 0.1, 1e-3, gain_exponent=2)
        assert p2 == pytest.approx(p1 / 2.0)

    def test_invalid_bit_counts(self):
        for bad in (1, 3, -2, 8):
            with pytest.raises(ValueError):
                required_power(bad, 1.0, 0.1, 1e-3)


class TestGreedy:
    @given(
        gains=st.lists(
            st.floats(min_value=1e-2, max_value=30.0), min_size=1, max_size=4
        ).map(np.array),
        budget=st.sampled_from([0, 2, 4, 6, 8]),
    )
    @settings(max_examples=150)
    def test_matches_exhaustive_minimum(self, gains, budget):
        if budget > 6 * len(gains):
            return
        load = greedy_bitload(gains, 0.1, budget, 1e-3)
        ref = exhaustive_bitload(gains, 0.1, budget, 1e-3)
        if budget == 0:
            assert load.total_power == ref == 0.0
        else:
            assert load.total_power == pytest.approx(ref, rel=1e-9)

    @given(
        seed=st.integers(min_value=0, max_value=10_000),
        budget=st.sampled_from([16, 64, 128]),
    )
    @settings(max_examples=30)
    def test_budget_and_cap_respected(self, seed, budget):
        gains = np.random.default_rng(seed).exponential(size=32) + 1e-9
        load = greedy_bitload(gains, 0.1, budget, 1e-3)
        assert load.total_bits == budget
        assert np.all(load.bits % 2 == 0)
        assert np.all(load.bits <= 6)
        assert np.array_equal(
            load.powers, required_power(load.bits, gains, 0.1, 1e-3)
        )

    def test_stronger_subcarriers_get_at_least_as_many_bits(self, rng):
        gains = np.sort(rng.exponential(size=16) + 1e-9)
        load = greedy_bitload(gains, 0.1, 32, 1e-3)
        assert np.all(np.diff(load.bits) >= 0)

    def test_gain_scale_invariance(self, rng):
        gains = rng.exponential(size=8) + 1e-9
        a = greedy_bitload(gains, 0.1, 24, 1e-3)
        b = greedy_bitload(gains * 137.0, 0.1, 24, 1e-3)
        assert np.array_equal(a.bits, b.bits)

    def test_ties_break_to_lowest_index(self):
        load = greedy_bitload(np.ones(3), 0.1, 2, 1e-3)
        assert list(load.bits) == [2, 0, 0]

    def test_single_strong_subcarrier_saturates(self):
        load = greedy_bitload(np.array([100.0, 1e-4]), 0.1, 8, 1e-3)
        assert list(load.bits) == [6, 2]

    def test_max_bits_parameter(self, rng):
        gains = rng.exponential(size=8) + 1e-9
        load = greedy_bitload(gains, 0.1, 16, 1e-3, max_bits=2)
        assert np.all(load.bits == 2)

    def test_invalid_budgets(self):
        with pytest.raises(ValueError):
            greedy_bitload(np.ones(4), 0.1, 3, 1e-3)
        with pytest.raises(ValueError):
            greedy_bitload(np.ones(4), 0.1, 26, 1e-3)
        with pytest.raises(ValueError):
            greedy_bitload(np.ones(4), 0.1, -2, 1e-3)
        with pytest.raises(ValueError):
            greedy_bitload(np.array([1.0, 0.0]), 0.1, 2, 1e-3)


class TestScaleToBudget:
    def test_rescales_to_exact_budget(self, rng):
        gains = rng.exponential(size=16) + 1e-9
        load = greedy_bitload(gains, 0.1, 48, 1e-3)
        scaled = scale_to_budget(load, 2.0)
        assert scaled.total_power == pytest.approx(2.0, rel=1e-12)
        assert np.array_equal(scaled.bits, load.bits)
        # Relative power shares are preserved.
        ratio = scaled.powers[load.powers > 0] / load.powers[load.powers > 0]
        assert np.allclose(ratio, ratio[0])

    def test_empty_load_rejected(self):
        empty = BitLoadResult(bits=np.zeros(4, dtype=int), powers=np.zeros(4))
        with pytest.raises(ValueError):
            scale_to_budget(empty, 1.0)
        load = greedy_bitload(np.ones(2), 0.1, 4, 1e-3)
        with pytest.raises(ValueError):
            scale_to_budget(load, 0.0)
