"""Fast built-in checks of the worked examples each module is contracted to hit.

These run from the CLI (`ofdm-feedback selftest`) without pytest installed;
the full property-based suite lives in tests/.
"""

from __future__ import annotations

import numpy as np

from . import bitloading, channel, interpolation, metrics, power, quantizer

_CHECKS = []


def _check(fn):
    _CHECKS.append(fn)
    return fn


@_check
def single_unit_tap_gives_flat_response():
    taps = channel.ChannelTaps(taps=np.array([1.0 + 0j]), num_taps=1)
    real = channel.frequency_response(taps, 8)
    assert np.allclose(real.squared_gains, 1.0, atol=1e-12)


@_check
def pure_delay_has_unit_magnitude():
    taps = channel.ChannelTaps(taps=np.array([0.0 + 0j, 1.0 + 0j]), num_taps=2)
    real = channel.frequency_response(taps, 8)
    expected = np.exp(-2j * np.pi * np.arange(8) / 8)
    assert np.allclose(real.response, expected, atol=1e-12)
    assert np.allclose(real.squared_gains, 1.0, atol=1e-12)


@_check
def parseval_holds_on_a_random_draw():
    rng = np.random.default_rng(7)
    taps = channel.sample_taps(10, rng)
    real = channel.frequency_response(taps, 128)
    lhs = real.squared_gains.mean()
    rhs = np.abs(taps.taps) ** 2
    assert abs(lhs - rhs.sum()) <= 1e-10 * rhs.sum()


@_check
def tap_energy_is_unit_on_average():
    rng = np.random.default_rng(11)
    total = 0.0
    draws = 4000
    for _ in range(draws):
        total += (np.abs(channel.sample_taps(10, rng).taps) ** 2).sum()
    assert abs(total / draws - 1.0) < 0.05


@_check
def quantizer_encode_matches_hand_arithmetic():
    assert quantizer.encode(1.0, quantizer.gain_quantizer(1)) == 0
    assert quantizer.encode(9.0, quantizer.gain_quantizer(2)) == 3
    assert quantizer.encode(2.5, quantizer.gain_quantizer(3)) == 5


@_check
def quantizer_decode_matches_hand_arithmetic():
    assert quantizer.decode(0, quantizer.gain_quantizer(1)) == 1.0
    assert quantizer.decode(5, quantizer.gain_quantizer(3)) == 2.75


@_check
def quantizer_round_trip_stays_within_half_step():
    spec = quantizer.gain_quantizer(4)
    x = np.linspace(0.0, spec.upper, 101)
    err = np.abs(quantizer.quantize(x, spec) - x)
    assert np.all(err <= spec.step / 2 + 1e-12)


@_check
def feedback_bit_split_matches_floor():
    assert quantizer.bits_per_node(128, 32) == 4
    assert quantizer.bits_per_node(128, 128) == 1
    assert quantizer.bits_per_node(64, 8) == 8
    try:
        quantizer.bits_per_node(16, 32)
    except quantizer.InsufficientFeedbackError:
        pass
    else:
        raise AssertionError("budget smaller than node count must raise")


@_check
def node_plans_match_hand_layouts():
    plan = interpolation.make_node_plan(128, 32)
    assert plan.spacing == 4
    assert plan.node_indices[0] == 0 and plan.node_indices[-1] == 127
    assert list(interpolation.make_node_plan(8, 2).node_indices) == [0, 7]
    plan15 = interpolation.make_node_plan(128, 15)
    assert plan15.spacing == 9 and plan15.node_indices[-1] == 127


@_check
def linear_ramp_interpolates_exactly():
    plan = interpolation.make_node_plan(8, 2)
    est = interpolation.interpolate_linear(plan, np.array([0.0, 7.0]))
    expected = np.arange(8, dtype=float)
    expected[0] = interpolation.EPS_GAIN
    assert np.allclose(est, expected, atol=1e-12)


@_check
def constant_nodes_reproduce_constants():
    plan = interpolation.make_node_plan(16, 4)
    values = np.full(4, 2.5)
    assert np.allclose(interpolation.interpolate_linear(plan, values), 2.5)
    assert np.allclose(interpolation.interpolate_quadratic(plan, values), 2.5)


@_check
def quadratic_reproduces_a_parabola():
    plan = interpolation.make_node_plan(9, 3)
    values = plan.node_indices.astype(float) ** 2
    est = interpolation.interpolate_quadratic(plan, values)
    assert np.allclose(est, np.arange(9, dtype=float) ** 2, atol=1e-9)


@_check
def waterfill_on_equal_gains_is_uniform():
    alloc = power.waterfill_allocate(np.ones(8), 0.1, 1.0)
    assert np.allclose(alloc.powers, 1.0 / 8, atol=1e-12)


@_check
def waterfill_matches_two_carrier_hand_solutions():
    alloc = power.waterfill_allocate(np.array([1.0, 0.1]), 0.1, 1.0)
    assert np.allclose(alloc.powers, [0.95, 0.05], atol=1e-12)
    assert abs(alloc.water_level - 1.05) < 1e-12
    alloc = power.waterfill_allocate(np.array([1.0, 0.01]), 0.1, 1.0)
    assert np.allclose(alloc.powers, [1.0, 0.0], atol=1e-12)
    assert abs(alloc.water_level - 1.1) < 1e-12


@_check
def cluster_averages_handle_a_short_tail():
    assert np.allclose(
        power.cluster_averages(np.arange(8.0), 4), [1.5, 5.5], atol=1e-12
    )
    assert np.allclose(
        power.cluster_averages(np.arange(7.0), 4), [1.5, 5.0], atol=1e-12
    )


@_check
def onoff_splits_power_over_active_clusters():
    alloc = power.onoff_allocate(np.array([1.5, 5.5]), 4, 8, 2.0, 1.0)
    assert np.allclose(alloc.powers, [0, 0, 0, 0, 0.25, 0.25, 0.25, 0.25])


@_check
def onoff_fallback_keeps_the_best_cluster():
    alloc = power.onoff_allocate(np.array([1.5, 5.5]), 4, 8, 1e9, 1.0)
    assert np.allclose(alloc.powers, [0, 0, 0, 0, 0.25, 0.25, 0.25, 0.25])


@_check
def uniform_allocation_sums_to_budget():
    alloc = power.uniform_allocate(128, 1.0)
    assert np.allclose(alloc.powers, 1.0 / 128)
    assert alloc.powers.sum() == 1.0
    assert power.uniform_allocate(1, 1.0).powers[0] == 1.0


@_check
def qfunc_hits_known_values():
    assert abs(bitloading.qfunc(0.0) - 0.5) < 1e-15
    x = np.array([-2.3, -0.4, 0.9, 3.1])
    assert np.allclose(bitloading.qfunc(x) + bitloading.qfunc(-x), 1.0, atol=1e-14)
    assert abs(bitloading.qfunc(1.2815515655) - 0.1) < 1e-9


@_check
def qfunc_inverse_round_trips():
    assert bitloading.qfunc_inv(0.5) == 0.0
    assert abs(bitloading.qfunc_inv(bitloading.qfunc(2.0)) - 2.0) < 1e-9
    assert abs(bitloading.qfunc_inv(1e-3) - 3.0902) < 1e-3


@_check
def required_power_matches_hand_arithmetic():
    assert bitloading.required_power(0, 1.0, 0.1, 1e-3) == 0.0
    p_e = float(4.0 * bitloading.qfunc(np.sqrt(30.0)))
    assert abs(bitloading.required_power(2, 1.0, 0.1, p_e) - 3.0) < 1e-9
    f = [bitloading.required_power(c, 1.0, 0.1, 1e-3) for c in (2, 4, 6)]
    assert f[0] < f[1] < f[2]


@_check
def greedy_prefers_the_stronger_subcarrier():
    res = bitloading.greedy_bitload(np.array([4.0, 1.0]), 0.1, 2, 1e-3)
    assert list(res.bits) == [2, 0]
    res = bitloading.greedy_bitload(np.array([1.0, 1.0]), 0.1, 4, 1e-3)
    assert list(res.bits) == [2, 2]
    res = bitloading.greedy_bitload(np.array([1.0, 1.0]), 0.1, 0, 1e-3)
    assert res.total_bits == 0 and res.total_power == 0.0


@_check
def scaled_powers_meet_the_budget_exactly():
    res = bitloading.greedy_bitload(np.array([2.0, 1.0, 0.5]), 0.1, 8, 1e-3)
    scaled = bitloading.scale_to_budget(res, 1.0)
    assert abs(scaled.total_power - 1.0) < 1e-12
    assert list(scaled.bits) == list(res.bits)


@_check
def capacity_matches_direct_substitution():
    assert metrics.sum_capacity(np.zeros(4), np.ones(4), 0.1) == 0.0
    got = metrics.sum_capacity(np.array([1.0]), np.array([1.0]), 0.1)
    assert abs(got - np.log2(11.0)) < 1e-12
    got = metrics.sum_capacity(np.full(2, 0.5), np.ones(2), 0.1)
    assert abs(got - 2 * np.log2(6.0)) < 1e-12


@_check
def symbol_error_clips_and_decreases():
    assert metrics.subcarrier_symbol_error(0.0, 1.0, 0.1, 2) == 1.0
    a = metrics.subcarrier_symbol_error(1.0, 1.0, 0.1, 2)
    b = metrics.subcarrier_symbol_error(2.0, 1.0, 0.1, 2)
    assert b < a < 1.0


@_check
def system_ber_matches_hand_cases():
    load = bitloading.BitLoadResult(
        bits=np.full(4, 2, dtype=np.int64), powers=np.full(4, 1.0)
    )
    gains = np.ones(4)
    ser = metrics.subcarrier_symbol_error(1.0, 1.0, 0.1, 2)
    assert abs(metrics.system_ber(load, gains, 0.1) - ser / 2) < 1e-15
    load = bitloading.BitLoadResult(
        bits=np.array([2, 0, 0, 0], dtype=np.int64), powers=np.array([1.0, 0, 0, 0])
    )
    assert abs(metrics.system_ber(load, gains, 0.1) - ser / 8) < 1e-15


@_check
def monte_carlo_mean_is_exact_for_constants():
    mean, stderr = metrics.monte_carlo_mean(lambda rng: 7.0, 5, 0)
    assert mean == 7.0 and stderr == 0.0


@_check
def monte_carlo_mean_is_seed_reproducible():
    f = lambda rng: float(rng.standard_normal())
    first = metrics.monte_carlo_mean(f, 100, 42)
    second = metrics.monte_carlo_mean(f, 100, 42)
    assert first == second


def run_selftest() -> list[tuple[str, bool, str]]:
    """Run every check; returns (name, passed, detail) per check."""
    results = []
    for fn in _CHECKS:
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - report, don't crash the runner
            results.append((fn.__name__, False, f"{type(exc).__name__}: {exc}"))
        else:
            results.append((fn.__name__, True, ""))
    return results
