import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ifsod.signal import (HybridSignal, SpikeTrain, StepFunction, accumulate, alexiewicz_distance,
                          alexiewicz_norm_signal, alexiewicz_norm_spikes, l1_norm, quantize_trunc,
                          sup_distance, tv_norm)
from ifsod.encoders import if_encode, sod_encode
from ifsod.reconstruct import sod_step_reconstruct
from ifsod import synth

from conftest import brute_integral, hybrid_signals

thetas = st.sampled_from([0.1, 0.25, 0.5, 1.0, 3.0])


# -- quantizer ---------------------------------------------------------------

@pytest.mark.parametrize("x, theta, expected", [(0, 1, 0), (2.5, 1, 2), (-1.3, 0.5, -1.0)])
def test_quantize_examples(x, theta, expected):
    assert quantize_trunc(x, theta) == expected


@pytest.mark.parametrize("x, theta", [(math.nan, 1.0), (math.inf, 1.0), (1.0, 0.0), (1.0, -2.0)])
def test_quantize_rejects_bad_arguments(x, theta):
    with pytest.raises(ValueError):
        quantize_trunc(x, theta)


@given(st.floats(-1e6, 1e6), thetas)
def test_quantize_odd_and_bounded(x, theta):
    q = quantize_trunc(x, theta)
    assert q == -quantize_trunc(-x, theta)
    assert abs(q) <= abs(x) + 1e-9 * max(1.0, abs(x))
    assert abs(x - q) < theta * (1 + 1e-9)
    assert round(q / theta) * theta == pytest.approx(q)


@given(st.integers(-10_000, 10_000), thetas)
def test_quantize_idempotent_on_grid(k, theta):
    assert quantize_trunc(k * theta, theta) == pytest.approx(k * theta)


@given(st.floats(-100, 100), st.integers(-50, 50), thetas)
def test_quantize_shift_equivariance_when_sign_is_kept(x, m, theta):
    # Truncation commutes with shifts by multiples of theta only when x and x - m*theta
    # lie on the same side of zero.
    y = x - m * theta
    if x * y > 0 and abs(y) > 1e-6 and abs(x) > 1e-6:
        assert quantize_trunc(y, theta) == pytest.approx(quantize_trunc(x, theta) - m * theta)


def test_quantize_shift_equivariance_fails_across_zero():
    # q(0.5 - 1) = 0, but q(0.5) - 1 = -1
    assert quantize_trunc(0.5 - 1.0, 1.0) == 0
    assert quantize_trunc(0.5, 1.0) - 1.0 == -1


def test_quantize_vectorized():
    np.testing.assert_array_equal(quantize_trunc(np.array([-2.7, 0.3, 1.0, 4.99]), 1.0),
                                  [-2, 0, 1, 4])


# -- types -------------------------------------------------------------------

def test_signal_invariants():
    f = HybridSignal(np.ones(4), 0.5, 1.0, ((3.0, 1.0), (1.5, 2.0)))
    assert f.t_end == 3.0
    assert f.impulses == ((1.5, 2.0), (3.0, 1.0))
    with pytest.raises(ValueError):
        HybridSignal(np.ones(4), 0.5, 0.0, ((2.5, 1.0),))
    with pytest.raises(ValueError):
        HybridSignal(np.ones(4), 0.5, 0.0, ((0.0, 1.0),))
    with pytest.raises(ValueError):
        HybridSignal(np.ones(4), 0.0)
    with pytest.raises(ValueError):
        HybridSignal(np.ones(4), 0.5, 0.0, ((1.0, 1.0), (1.0, 2.0)))


def test_spike_train_invariants():
    s = SpikeTrain.from_amplitudes(0.5, [1.0, 2.0], [1.0, -1.5])
    assert s.counts.tolist() == [2, -3]
    with pytest.raises(ValueError):
        SpikeTrain.from_amplitudes(0.5, [1.0], [0.7])
    with pytest.raises(ValueError):
        SpikeTrain(1.0, [2.0, 1.0], [1, 1])
    with pytest.raises(ValueError):
        SpikeTrain(1.0, [1.0], [0])
    with pytest.raises(ValueError):
        SpikeTrain(0.0)


def test_spike_train_arithmetic():
    a = SpikeTrain(1.0, [1.0, 2.0], [1, 1])
    b = SpikeTrain(1.0, [2.0, 3.0], [-1, 2])
    assert a + b == SpikeTrain(1.0, [1.0, 3.0], [1, 2])
    assert a - a == SpikeTrain.empty(1.0)
    assert 3 * a == SpikeTrain(1.0, [1.0, 2.0], [3, 3])
    assert a.rescale(-2.0) == SpikeTrain(2.0, [1.0, 2.0], [-1, -1])


def test_step_function_invariants():
    with pytest.raises(ValueError):
        StepFunction([0.0, 1.0], [1.0], 2.0)
    with pytest.raises(ValueError):
        StepFunction([1.0, 0.0], [1.0, 2.0], 2.0)


# -- accumulate --------------------------------------------------------------

def test_accumulate_constant():
    assert accumulate(HybridSignal(np.ones(2), 1.0))(2.0) == 2.0


def test_accumulate_single_dirac():
    a = accumulate(HybridSignal(np.zeros(200), 0.01, 0.0, ((1.0, 2.5),)))
    assert a(0.0) == 0.0
    assert a(0.999) == 0.0
    assert a(1.0) == 2.5
    assert a(1.5) == 2.5


def test_accumulate_random_total(rng):
    f = HybridSignal(rng.normal(size=10), 0.1, 0.0, ((0.35, 1.5), (0.7, -0.25)))
    expected = 0.1 * sum(f.samples) + 1.5 - 0.25
    assert accumulate(f)(f.t_end) == pytest.approx(expected, rel=1e-12)


@given(hybrid_signals(on_grid=False))
def test_accumulate_matches_term_by_term_sum(f):
    a = accumulate(f)
    probe = np.concatenate([f.edges, a.times, np.linspace(f.t_start, f.t_end, 37)])
    np.testing.assert_allclose(a(probe), brute_integral(f, probe), atol=1e-9)
    total = f.dt * f.samples.sum() + sum(w for _, w in f.impulses)
    assert a.values[-1] == pytest.approx(total, rel=1e-12, abs=1e-12)


# -- norms -------------------------------------------------------------------

def test_alexiewicz_signal_examples():
    assert alexiewicz_norm_signal(HybridSignal(np.ones(2), 1.0)) == 2.0
    assert alexiewicz_norm_signal(HybridSignal(np.array([1.0, -1.0]), 1.0)) == 1.0


def test_alexiewicz_signal_counts_left_limit_at_impulse():
    # integral rises to 1 inside the sample interval, then the impulse cancels it
    f = HybridSignal(np.ones(1), 1.0, 0.0, ((1.0, -1.0),))
    assert alexiewicz_norm_signal(f) == 1.0


def test_alexiewicz_signal_matches_dense_evaluation(rng):
    f = HybridSignal(rng.normal(size=50), 0.02)
    t = np.linspace(f.t_start, f.t_end, 50 * 2000 + 1)
    dense = np.max(np.abs(brute_integral(f, t)))
    assert alexiewicz_norm_signal(f) == pytest.approx(dense, abs=1e-9)


@settings(max_examples=60)
@given(hybrid_signals(max_n=12, on_grid=False))
def test_alexiewicz_signal_dense_oracle_with_impulses(f):
    t = np.linspace(f.t_start, f.t_end, f.n * 400 + 1)
    # left limits at impulses are approached from just before each impulse time
    near = np.array([tj + d for tj, _ in f.impulses for d in (-1e-10, 0.0)])
    dense = np.max(np.abs(brute_integral(f, np.concatenate([t, near]))))
    assert alexiewicz_norm_signal(f) == pytest.approx(dense, abs=1e-8)


@pytest.mark.parametrize("times, counts, expected", [
    ([1, 2], [1, -1], 1), ([1, 2], [1, 1], 2), ([], [], 0)])
def test_alexiewicz_spike_examples(times, counts, expected):
    assert alexiewicz_norm_spikes(SpikeTrain(1.0, times, counts)) == expected


@st.composite
def trains(draw, theta=0.5):
    k = draw(st.integers(0, 8))
    times = sorted(draw(st.lists(st.integers(1, 40), min_size=k, max_size=k, unique=True)))
    counts = draw(st.lists(st.integers(-4, 4).filter(bool), min_size=k, max_size=k))
    return SpikeTrain(theta, [0.25 * t for t in times], counts)


@given(trains(), trains(), st.integers(-5, 5))
def test_alexiewicz_spike_norm_axioms(s, r, c):
    assert alexiewicz_norm_spikes(s + r) <= alexiewicz_norm_spikes(s) + alexiewicz_norm_spikes(r) + 1e-12
    assert alexiewicz_norm_spikes(c * s) == pytest.approx(abs(c) * alexiewicz_norm_spikes(s))
    assert (alexiewicz_norm_spikes(s) == 0) == (len(s) == 0)


@given(hybrid_signals(max_n=15))
def test_alexiewicz_signal_seminorm(f):
    g = HybridSignal(f.samples[::-1].copy(), f.dt)
    lhs = alexiewicz_norm_signal(f + g)
    assert lhs <= alexiewicz_norm_signal(f) + alexiewicz_norm_signal(g) + 1e-9
    assert alexiewicz_norm_signal(f.scaled(-2.0)) == pytest.approx(2 * alexiewicz_norm_signal(f))


def test_alexiewicz_distance_examples():
    assert alexiewicz_distance(HybridSignal(np.zeros(5), 1.0), SpikeTrain.empty(1.0)) == 0.0
    f = HybridSignal(np.zeros(200), 0.01, 0.0, ((1.0, 2.5),))
    assert alexiewicz_distance(f, SpikeTrain(1.0, [1.0], [2])) == pytest.approx(0.5)


def test_alexiewicz_distance_rejects_spikes_outside_domain():
    f = HybridSignal(np.zeros(10), 0.1)
    with pytest.raises(ValueError):
        alexiewicz_distance(f, SpikeTrain(1.0, [1.5], [1]))


def test_alexiewicz_distance_is_merged_signal_norm_for_sampled_world(rng):
    # on a grid where every spike sits on a sample edge, the distance equals the
    # norm of f minus the spikes viewed as impulses, evaluated after each jump
    f = synth.random_hybrid(rng, on_grid=True)
    s = if_encode(f, 0.5)
    t = f.edges
    brute = np.max(np.abs(brute_integral(f, t) - np.array(
        [s.amplitudes[s.times <= ti + 1e-9].sum() for ti in t])))
    assert alexiewicz_distance(f, s) == pytest.approx(brute, abs=1e-9)
    merged = HybridSignal(f.samples, f.dt, f.t_start, ()) + HybridSignal(
        np.zeros(f.n), f.dt, f.t_start, tuple(f.impulses)) - HybridSignal(
        np.zeros(f.n), f.dt, f.t_start, s.as_impulses())
    assert alexiewicz_distance(f, s, left_limits=True) == pytest.approx(
        alexiewicz_norm_signal(merged), abs=1e-9)


def test_l1_examples():
    assert l1_norm(SpikeTrain.empty(1.0)) == 0
    assert l1_norm(SpikeTrain(1.0, [1, 3], [2, -1])) == 3
    ramp = HybridSignal(0.01 * np.arange(1, 301), 0.01)
    assert l1_norm(sod_encode(ramp, 1.0)) == 3


def test_tv_examples(rng):
    assert tv_norm(StepFunction([0.0], [0.0], 1.0)) == 0
    assert tv_norm(StepFunction([0.0, 1.0, 2.0], [0.0, 1.0, 0.0], 3.0)) == 2
    g = synth.random_continuous(rng)
    s = sod_encode(g, 0.25)
    assert tv_norm(sod_step_reconstruct(s, g.t_end)) == pytest.approx(l1_norm(s))


def test_sup_distance_examples(rng):
    one = HybridSignal(np.ones(10), 0.1)
    assert sup_distance(one, StepFunction([0.0], [1.0], 1.0)) == 0
    ramp = HybridSignal(np.linspace(0.1, 1.0, 10), 0.1)
    assert sup_distance(ramp, StepFunction([0.0], [0.0], 1.0)) == pytest.approx(1.0)
    g = synth.random_continuous(rng)
    assert sup_distance(g, sod_step_reconstruct(sod_encode(g, 0.5), g.t_end)) < 0.5
    with pytest.raises(ValueError):
        sup_distance(HybridSignal(np.ones(3), 1.0, 0.0, ((1.0, 1.0),)), lambda t: t)
