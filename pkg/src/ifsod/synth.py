"""Reproducible synthetic signals.  Default rate is 100 Hz."""
from __future__ import annotations

import numpy as np

from .signal import HybridSignal

DEFAULT_DT = 0.01
KINDS = ("accel-like", "ramp", "impulse-train", "mixed")


def random_hybrid(rng: np.random.Generator, n: int = 200, dt: float = DEFAULT_DT,
                  max_impulses: int = 3, on_grid: bool = False, scale: float = 1.0,
                  impulse_scale: float = 1.0) -> HybridSignal:
    """Gaussian random walk samples plus 0..max_impulses Dirac impulses.

    With ``on_grid`` the impulses sit on sample edges, otherwise anywhere in
    ``(t_start, t_end]``.
    """
    samples = scale * np.cumsum(rng.normal(0.0, 1.0, n)) / np.sqrt(max(n, 1)) * 3.0
    samples += scale * rng.normal(0.0, 0.5, n)
    k = int(rng.integers(0, max_impulses + 1)) if max_impulses else 0
    impulses = []
    if k and n:
        if on_grid:
            idx = rng.choice(n, size=min(k, n), replace=False) + 1
            times = np.sort(idx * dt)
        else:
            times = np.sort(rng.uniform(0.0, n * dt, size=k))
            times = times[(times > 0) & (np.diff(np.concatenate([[-1.0], times])) > 1e-6 * dt)]
        weights = impulse_scale * rng.normal(0.0, 1.5, len(times))
        impulses = list(zip(times.tolist(), weights.tolist()))
    return HybridSignal(samples, dt, 0.0, tuple(impulses))


def random_continuous(rng: np.random.Generator, n: int = 200, dt: float = DEFAULT_DT,
                      scale: float = 1.0) -> HybridSignal:
    """Amplitude signal for send-on-delta: smooth-ish random path, no impulses."""
    steps = rng.normal(0.0, 1.0, n) * scale * 0.3
    return HybridSignal(np.cumsum(steps), dt, 0.0)


def accel_like(n: int, dt: float = DEFAULT_DT, seed: int = 0, amplitude: float = 2.0) -> HybridSignal:
    """Vibration-like acceleration: a few damped sinusoid bursts plus sensor noise."""
    rng = np.random.default_rng(seed)
    t = dt * np.arange(1, n + 1)
    x = np.zeros(n)
    for _ in range(4):
        f0 = rng.uniform(0.3, 3.0)
        t0 = rng.uniform(0.0, max(n * dt, dt))
        tau = rng.uniform(0.5, 3.0)
        env = np.exp(-np.clip(t - t0, 0.0, None) / tau) * (t >= t0)
        x += amplitude * rng.uniform(0.3, 1.0) * env * np.sin(2 * np.pi * f0 * (t - t0))
    x += 0.05 * amplitude * rng.normal(size=n)
    return HybridSignal(x, dt, 0.0)


def ramp(n: int, dt: float = DEFAULT_DT) -> HybridSignal:
    """Values equal to the sample time: ``f_i = i*dt``."""
    return HybridSignal(dt * np.arange(1, n + 1), dt, 0.0)


def impulse_train(n: int, dt: float = DEFAULT_DT, seed: int = 0, count: int = 5,
                  weight: float = 1.0) -> HybridSignal:
    """Zero bounded part with Dirac impulses on random sample edges."""
    rng = np.random.default_rng(seed)
    k = min(count, n)
    idx = np.sort(rng.choice(n, size=k, replace=False)) + 1 if k else np.zeros(0, int)
    w = weight * rng.choice([-1.0, 1.0], size=k) * rng.uniform(0.5, 2.0, size=k)
    return HybridSignal(np.zeros(n), dt, 0.0, tuple(zip((idx * dt).tolist(), w.tolist())))


def mixed(n: int, dt: float = DEFAULT_DT, seed: int = 0) -> HybridSignal:
    base = accel_like(n, dt, seed)
    imp = impulse_train(n, dt, seed + 1, count=3, weight=0.5)
    return HybridSignal(base.samples, dt, 0.0, imp.impulses)


def generate(kind: str, n: int, dt: float = DEFAULT_DT, seed: int = 0) -> HybridSignal:
    if kind == "accel-like":
        return accel_like(n, dt, seed)
    if kind == "ramp":
        return ramp(n, dt)
    if kind == "impulse-train":
        return impulse_train(n, dt, seed)
    if kind == "mixed":
        return mixed(n, dt, seed)
    raise ValueError(f"unknown signal kind {kind!r}; choose from {', '.join(KINDS)}")


def velocity_study_signal(n: int = 1000, dt: float = DEFAULT_DT, seed: int = 4,
                          amplitude: float = 10.0, impulse_weight: float = 0.2) -> HybridSignal:
    """Accelerometer-like signal with two opposite impulses at 30% and 60% of the span.

    The impulses are small against the integrated velocity, which is the regime
    where IF/sub reconstructions degrade for small thresholds.
    """
    base = accel_like(n, dt, seed, amplitude)
    i1, i2 = int(0.3 * n), int(0.6 * n)
    return HybridSignal(base.samples, dt, 0.0,
                        ((i1 * dt, impulse_weight), (i2 * dt, -impulse_weight)))
