"""Integrate-and-fire (reset-to-mod, reset-by-subtraction) and send-on-delta encoders."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal import (DEFAULT_EPS, EncoderConfig, EventTimePolicy, HybridSignal, Reset, SpikeTrain,
                     accumulate, level)


@dataclass(frozen=True)
class MembraneTrace:
    """Potential after each event instant (after any reset), next to the spike train."""

    times: np.ndarray
    residual: np.ndarray
    train: SpikeTrain


def _config(theta_or_cfg, reset=None, **kw) -> EncoderConfig:
    if isinstance(theta_or_cfg, EncoderConfig):
        return theta_or_cfg
    return EncoderConfig(float(theta_or_cfg), reset if reset is not None else Reset.MOD, **kw)


def if_encode(f: HybridSignal, cfg: EncoderConfig | float, reset: Reset | str | None = None,
              **kw) -> SpikeTrain:
    """Integrate-and-fire encoding of ``f``.

    ``cfg`` may be an :class:`EncoderConfig` or a bare threshold, in which case
    ``reset`` and further config fields come from the keyword arguments.
    """
    return membrane_trace(f, _config(cfg, reset, **kw)).train


def membrane_trace(f: HybridSignal, cfg: EncoderConfig) -> MembraneTrace:
    if cfg.reset is Reset.ZERO:
        raise NotImplementedError("reset-to-zero is unsupported")
    if cfg.event_time_policy is EventTimePolicy.SUBSAMPLE_INTERP:
        return _if_subsample(f, cfg)
    return _if_grid(f, cfg)


def _if_grid(f: HybridSignal, cfg: EncoderConfig) -> MembraneTrace:
    # The potential is tracked as A(t_j) - m*theta with m the integer sum of the
    # emitted counts; this is the reset recursion without accumulated rounding.
    theta, eps, sub = cfg.theta, cfg.eps, cfg.reset is Reset.SUB
    a = accumulate(f)
    g = a.values.tolist()
    times, counts = [], []
    residual = np.empty(len(g))
    m = 0
    for j, gj in enumerate(g):
        k = level(gj - m * theta, theta, eps)
        if k:
            if sub:
                k = 1 if k > 0 else -1
            times.append(a.times[j])
            counts.append(k)
            m += k
        residual[j] = gj - m * theta
    return MembraneTrace(a.times, residual, SpikeTrain(theta, times, counts))


def _if_subsample(f: HybridSignal, cfg: EncoderConfig) -> MembraneTrace:
    """Exact event times for the piecewise-constant part.

    Within an interval the potential is linear, so each crossing of +-theta is
    located in closed form and fires a single +-theta spike.  Impulses fire at
    their own time.  A Sub residual still at or above theta is carried and fires
    at the end of the next interval.
    """
    theta, eps, sub = cfg.theta, cfg.eps, cfg.reset is Reset.SUB
    a = accumulate(f)
    times_inst, cont, weights, piece = f._table
    out_t: list[float] = []
    out_c: list[int] = []
    residual = np.empty(len(times_inst))
    m = 0
    t_prev = f.t_start
    g_prev = 0.0

    def emit(t, k):
        if out_t and t <= out_t[-1]:
            out_c[-1] += k
            if out_c[-1] == 0:
                out_t.pop()
                out_c.pop()
        else:
            out_t.append(t)
            out_c.append(k)

    for j, tj in enumerate(times_inst.tolist()):
        slope = f.samples[piece[j]]
        z0 = g_prev - m * theta
        z_cont = a.left[j] - m * theta
        fired_here = False
        if level(z0, theta, eps) != 0:
            # carried Sub residual
            k = level(a.values[j] - m * theta, theta, eps)
            if k:
                k = 1 if k > 0 else -1
                emit(tj, k)
                m += k
            residual[j] = a.values[j] - m * theta
            g_prev, t_prev = a.values[j], tj
            continue
        n_cross = level(z_cont, theta, eps)
        if n_cross and slope != 0.0:
            sgn = 1 if n_cross > 0 else -1
            for c in range(1, abs(n_cross) + 1):
                tc = t_prev + (sgn * c * theta - z0) / slope
                tc = min(max(tc, t_prev), tj)
                emit(tc, sgn)
                fired_here = tc >= tj
            m += n_cross
        if weights[j] != 0.0:
            k = level(a.values[j] - m * theta, theta, eps)
            if k:
                if sub:
                    k = 1 if k > 0 else -1
                    if fired_here:
                        k = 0  # one spike per instant; the residual carries
                if k:
                    emit(tj, k)
                    m += k
        residual[j] = a.values[j] - m * theta
        g_prev, t_prev = a.values[j], tj
    return MembraneTrace(times_inst, residual, SpikeTrain(theta, out_t, out_c))


def _sod_levels(times: np.ndarray, values: np.ndarray, theta: float, eps: float) -> SpikeTrain:
    # a = m*theta is the running sum of emitted amplitudes; a spike fires when the
    # signal has moved at least theta away from it and carries q(g - a).
    out_t, out_c = [], []
    m = 0
    for t, v in zip(times.tolist(), values.tolist()):
        d = v - m * theta
        k = level(d, theta, eps)
        if k:
            out_t.append(t)
            out_c.append(k)
            m += k
    return SpikeTrain(theta, out_t, out_c)


def sod_encode(g: HybridSignal, theta: float, eps: float = DEFAULT_EPS) -> SpikeTrain:
    """Send-on-delta sampling of the amplitude signal ``g``, read at its sample edges.

    The process starts from ``(t_start, 0)``.
    """
    if not theta > 0:
        raise ValueError(f"theta must be positive, got {theta}")
    if g.has_impulses:
        raise ValueError("send-on-delta reads amplitudes; Dirac impulses are not allowed")
    return _sod_levels(g.edges, g.samples, theta, eps)


def sod_of_integral(f: HybridSignal, theta: float, eps: float = DEFAULT_EPS) -> SpikeTrain:
    """Send-on-delta applied to ``A(f)`` sampled at the event instants of ``f``."""
    if not theta > 0:
        raise ValueError(f"theta must be positive, got {theta}")
    a = accumulate(f)
    return _sod_levels(a.times, a.values, theta, eps)
