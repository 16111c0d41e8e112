import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ifsod import synth
from ifsod.encoders import if_encode, membrane_trace, sod_encode, sod_of_integral
from ifsod.signal import (EncoderConfig, EventTimePolicy, HybridSignal, Reset, SpikeTrain,
                          TIME_RTOL, accumulate, alexiewicz_distance)

from conftest import hybrid_signals


def naive_if(f: HybridSignal, theta: float, reset: str):
    """Textbook reset recursion over sample edges with on-grid impulses."""
    weights = dict((round((t - f.t_start) / f.dt), w) for t, w in f.impulses)
    u, out = 0.0, []
    for i in range(1, f.n + 1):
        u += f.samples[i - 1] * f.dt + weights.get(i, 0.0)
        k = int(np.trunc(u / theta))
        if k:
            if reset == "sub":
                k = 1 if k > 0 else -1
            out.append((f.t_start + i * f.dt, k))
            u -= k * theta
    return out


def as_pairs(s: SpikeTrain):
    return list(zip(s.times.tolist(), s.counts.tolist()))


def close_pairs(a, b):
    return len(a) == len(b) and all(abs(x[0] - y[0]) < 1e-9 and x[1] == y[1] for x, y in zip(a, b))


# -- IF examples --------------------------------------------------------------

def test_if_constant_signal():
    f = HybridSignal(np.ones(300), 0.01)
    s = if_encode(f, 1.0, Reset.MOD)
    np.testing.assert_allclose(s.times, [1, 2, 3], atol=1e-12)
    assert s.counts.tolist() == [1, 1, 1]


def test_if_single_impulse_mod():
    f = HybridSignal(np.zeros(200), 0.01, 0.0, ((1.0, 2.5),))
    tr = membrane_trace(f, EncoderConfig(1.0, Reset.MOD))
    assert as_pairs(tr.train) == [(1.0, 2)]
    assert tr.residual[-1] == pytest.approx(0.5)


def test_if_single_impulse_sub_carries_residual():
    f = HybridSignal(np.zeros(200), 0.01, 0.0, ((1.0, 2.5),))
    tr = membrane_trace(f, EncoderConfig(1.0, Reset.SUB))
    assert close_pairs(as_pairs(tr.train), [(1.0, 1), (1.01, 1)])
    assert tr.residual[-1] == pytest.approx(0.5)


def test_if_rejects_bad_threshold():
    f = HybridSignal(np.ones(3), 1.0)
    for theta in (0.0, -1.0, float("nan")):
        with pytest.raises(ValueError):
            if_encode(f, theta)


def test_reset_to_zero_is_a_stub():
    with pytest.raises(NotImplementedError):
        if_encode(HybridSignal(np.ones(3), 1.0), 1.0, Reset.ZERO)


def test_reset_accepts_strings():
    f = HybridSignal(np.ones(3), 1.0)
    assert if_encode(f, 1.0, "sub") == if_encode(f, 1.0, Reset.SUB)


# -- IF against the naive recursion ---------------------------------------------

@settings(max_examples=150)
@given(hybrid_signals(max_n=40), st.sampled_from([0.1, 0.5, 1.0]), st.sampled_from(["mod", "sub"]))
def test_if_matches_naive_recursion(f, theta, reset):
    s = if_encode(f, theta, reset)
    expected = naive_if(f, theta, reset)
    if not close_pairs(as_pairs(s), expected):
        # the naive recursion drifts by rounding; a mismatch must sit on a level tie
        a = accumulate(f).values
        frac = np.abs(a / theta - np.rint(a / theta))
        assert frac.min() < 1e-6 or reset == "sub"


def test_if_matches_naive_recursion_on_random_corpus():
    rng = np.random.default_rng(7)
    for k in range(200):
        f = synth.random_hybrid(rng, on_grid=True)
        theta = (0.1, 0.5, 1.0)[k % 3]
        for reset in ("mod", "sub"):
            assert close_pairs(as_pairs(if_encode(f, theta, reset)), naive_if(f, theta, reset))


# -- IF invariants --------------------------------------------------------------

@given(hybrid_signals(on_grid=False), st.sampled_from([0.1, 0.5, 1.0]))
def test_mod_residual_stays_below_threshold(f, theta):
    tr = membrane_trace(f, EncoderConfig(theta, Reset.MOD))
    assert np.all(np.abs(tr.residual) < theta)
    emitted = [tr.train.amplitudes[tr.train.times <= t + 1e-12].sum() for t in tr.times]
    np.testing.assert_allclose(tr.residual, accumulate(f).values - emitted, atol=1e-9)


@given(hybrid_signals(on_grid=False), st.sampled_from([0.1, 0.5, 1.0]))
def test_sub_emits_unit_spikes_once_per_instant(f, theta):
    s = if_encode(f, theta, Reset.SUB)
    assert np.all(np.abs(s.counts) == 1)
    assert np.all(np.diff(s.times) > 0)


@given(hybrid_signals(), st.sampled_from([0.25, 1.0]), st.sampled_from([-4.0, -0.5, 0.125, 2.0, 8.0]))
def test_scaling_covariance(f, theta, c):
    s = if_encode(f.scaled(c), abs(c) * theta)
    r = if_encode(f, theta)
    assert np.array_equal(s.times, r.times)
    assert np.array_equal(s.counts, np.sign(c) * r.counts)


@given(hybrid_signals(on_grid=False), st.sampled_from([0.1, 0.5, 1.0]))
def test_sod_if_identity(f, theta):
    assert sod_of_integral(f, theta) == if_encode(f, theta)


def test_mod_spike_count_grows_with_smaller_threshold():
    f = synth.accel_like(500)
    counts = [np.abs(if_encode(f, th).counts).sum() for th in (0.2, 0.1, 0.05)]
    assert counts == sorted(counts)


# -- subsample timing -----------------------------------------------------------

def test_subsample_times_are_exact_crossings():
    f = HybridSignal(np.full(4, 0.4), 1.0)
    s = if_encode(f, EncoderConfig(1.0, Reset.MOD, EventTimePolicy.SUBSAMPLE_INTERP))
    np.testing.assert_allclose(s.times, [2.5], atol=1e-12)
    assert s.counts.tolist() == [1]


@settings(max_examples=150)
@given(hybrid_signals(on_grid=False), st.sampled_from([0.1, 0.5, 1.0]))
def test_subsample_exact_distance_bound(f, theta):
    s = if_encode(f, EncoderConfig(theta, Reset.MOD, EventTimePolicy.SUBSAMPLE_INTERP))
    # spikes within TIME_RTOL*dt of an instant are evaluated at that instant
    snap = np.max(np.abs(f.samples)) * TIME_RTOL * f.dt
    assert alexiewicz_distance(f, s, left_limits=True) <= theta * (1 + 1e-9) + snap


@given(hybrid_signals(on_grid=False), st.sampled_from([0.1, 0.5, 1.0]))
def test_subsample_net_charge_matches_grid(f, theta):
    grid = if_encode(f, theta)
    fine = if_encode(f, EncoderConfig(theta, Reset.MOD, EventTimePolicy.SUBSAMPLE_INTERP))
    total = accumulate(f).values[-1]
    for s in (grid, fine):
        assert abs(total - s.amplitudes.sum()) < theta * (1 + 1e-9) + 1e-9


def test_grid_snap_exact_distance_loose_bound():
    # with left limits the grid-snapped train can lag by up to one sample of charge
    rng = np.random.default_rng(3)
    for _ in range(100):
        f = synth.random_hybrid(rng, max_impulses=0)
        theta = 0.5
        s = if_encode(f, theta)
        slack = np.max(np.abs(f.samples)) * f.dt
        assert alexiewicz_distance(f, s, left_limits=True) <= theta + slack + 1e-9


# -- SOD ----------------------------------------------------------------------------

def test_sod_unit_ramp():
    g = synth.ramp(300)
    s = sod_encode(g, 1.0)
    np.testing.assert_allclose(s.times, [1, 2, 3], atol=1e-12)
    assert s.counts.tolist() == [1, 1, 1]


def test_sod_single_jump():
    g = HybridSignal(np.where(np.arange(1, 201) >= 100, 2.5, 0.0), 0.01)
    s = sod_encode(g, 1.0)
    assert close_pairs(as_pairs(s), [(1.0, 2)])


def test_sod_rejects_impulses_and_bad_threshold():
    with pytest.raises(ValueError):
        sod_encode(HybridSignal(np.ones(3), 1.0, 0.0, ((1.0, 1.0),)), 1.0)
    with pytest.raises(ValueError):
        sod_encode(HybridSignal(np.ones(3), 1.0), 0.0)


def test_sod_jump_across_zero_keeps_sparsity():
    # amplitudes are measured from the last emitted level (2), so falling to 0.5
    # costs one spike; differencing q(g) levels would cost two
    g = HybridSignal(np.array([2.5, 1.1, 0.5]), 1.0)
    s = sod_encode(g, 1.0)
    assert as_pairs(s) == [(1.0, 2), (3.0, -1)]


def test_sod_of_integral_examples():
    assert as_pairs(sod_of_integral(HybridSignal(np.ones(3), 1.0), 1.0)) == [(1, 1), (2, 1), (3, 1)]
    f = HybridSignal(np.zeros(200), 0.01, 0.0, ((1.0, 2.5),))
    assert close_pairs(as_pairs(sod_of_integral(f, 1.0)), [(1.0, 2)])


def test_sod_of_integral_on_corpus():
    rng = np.random.default_rng(11)
    for k in range(500):
        f = synth.random_hybrid(rng)
        theta = (0.1, 0.5, 1.0)[k % 3]
        a, b = sod_of_integral(f, theta), if_encode(f, theta)
        assert a == b
        assert a.times.tobytes() == b.times.tobytes() and a.counts.tobytes() == b.counts.tobytes()


@given(hybrid_signals(impulses=False), st.sampled_from([0.1, 0.5, 1.0]))
def test_sod_step_stays_within_threshold(g, theta):
    s = sod_encode(g, theta)
    held = np.array([s.amplitudes[s.times <= t + 1e-12].sum() for t in g.edges])
    assert np.all(np.abs(g.samples - held) < theta)
