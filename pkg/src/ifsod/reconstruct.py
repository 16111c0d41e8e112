"""Reconstructions from spike trains: SOD step and piecewise-linear, IF/mod and IF/sub rates.

Every reconstruction starts from ``(t_start, 0)``, so the first spike is reached
from the start of the signal like any later one.
"""
from __future__ import annotations

import numpy as np

from .signal import HybridSignal, PiecewiseLinear, SpikeTrain, StepFunction, TIME_RTOL


def _check_end(s: SpikeTrain, t_start: float, t_end: float) -> None:
    if t_end < t_start:
        raise ValueError("t_end before t_start")
    if len(s) and s.times[-1] > t_end + 1e-9 * max(1.0, abs(t_end)):
        raise ValueError(f"t_end={t_end} is before the last spike at {s.times[-1]}")
    if len(s) and s.times[0] <= t_start:
        raise ValueError("spikes must come after t_start")


def sod_step_reconstruct(s: SpikeTrain, t_end: float, t_start: float = 0.0) -> StepFunction:
    """Running sum of the spike amplitudes, held between spikes."""
    _check_end(s, t_start, t_end)
    bp = np.concatenate([[t_start], s.times])
    vals = np.concatenate([[0.0], np.cumsum(s.counts) * s.theta])
    return StepFunction(bp, vals, t_end)


def sod_pwl_reconstruct(s: SpikeTrain, t_end: float, t_start: float = 0.0) -> PiecewiseLinear:
    """Running sum plus a ramp of height theta toward each following unit spike.

    Spikes larger than theta are jumps and get no ramp.  After the last spike
    the value is held.
    """
    _check_end(s, t_start, t_end)
    knots = np.concatenate([[t_start], s.times])
    base = np.concatenate([[0.0], np.cumsum(s.counts) * s.theta])
    slope = np.zeros(len(knots))
    if len(s):
        gaps = np.diff(knots)
        unit = np.abs(s.counts) == 1
        slope[:-1] = np.where(unit, s.theta * np.sign(s.counts) / gaps, 0.0)
    return PiecewiseLinear(knots, base, slope, t_end)


def _grid_index(s: SpikeTrain, dt: float, t_start: float, n: int) -> np.ndarray:
    idx = np.rint((s.times - t_start) / dt).astype(np.int64)
    if len(s):
        off = np.abs(t_start + idx * dt - s.times) > TIME_RTOL * dt
        if np.any(off):
            raise ValueError(f"spike at t={s.times[np.argmax(off)]} is off the reconstruction grid")
        if np.any(np.diff(idx) < 1):
            raise ValueError("spike spacing below dt")
        if idx[0] < 1 or idx[-1] > n:
            raise ValueError("spike outside the reconstruction grid")
    return idx


def _rate_signal(s: SpikeTrain, t_end: float, dt: float, t_start: float,
                 impulses_for_jumps: bool) -> HybridSignal:
    n = int(round((t_end - t_start) / dt))
    idx = _grid_index(s, dt, t_start, n)
    samples = np.zeros(n)
    impulses = []
    prev = 0
    for i, c in zip(idx.tolist(), s.counts.tolist()):
        if abs(c) == 1 or not impulses_for_jumps:
            samples[prev:i] = s.theta * np.sign(c) / ((i - prev) * dt)
        else:
            impulses.append((t_start + i * dt, c * s.theta))
        prev = i
    return HybridSignal(samples, dt, t_start, tuple(impulses))


def if_mod_reconstruct(z: SpikeTrain, t_end: float, dt: float, t_start: float = 0.0) -> HybridSignal:
    """Signal whose IF/mod encoding is ``z`` again.

    A unit spike becomes a constant rate spreading theta over the interval since
    the previous spike.  A larger spike becomes a Dirac impulse of the same weight.
    Spike times must lie on the grid ``t_start + i*dt``.
    """
    _check_end(z, t_start, t_end)
    return _rate_signal(z, t_end, dt, t_start, impulses_for_jumps=True)


def if_sub_reconstruct(z: SpikeTrain, t_end: float, dt: float, t_start: float = 0.0) -> HybridSignal:
    """Rate reconstruction for reset-by-subtraction trains (all amplitudes +-theta)."""
    if np.any(np.abs(z.counts) != 1):
        raise ValueError("reset-by-subtraction trains carry amplitudes +-theta only")
    _check_end(z, t_start, t_end)
    return _rate_signal(z, t_end, dt, t_start, impulses_for_jumps=False)
