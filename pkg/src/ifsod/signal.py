"""Signals, spike trains, the truncating quantizer, the integral operator and norms.

Signals are piecewise constant on a uniform grid with optional Dirac impulses, so
every integral is exact.  Times are in seconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

DEFAULT_EPS = 1e-12
# relative (to dt or to the signal span) tolerance used to identify coinciding times
TIME_RTOL = 1e-6


class Reset(str, Enum):
    MOD = "mod"
    SUB = "sub"
    ZERO = "zero"


class EventTimePolicy(str, Enum):
    GRID_SNAP = "grid"
    SUBSAMPLE_INTERP = "subsample"


@dataclass(frozen=True)
class EncoderConfig:
    theta: float
    reset: Reset = Reset.MOD
    event_time_policy: EventTimePolicy = EventTimePolicy.GRID_SNAP
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        if not (math.isfinite(self.theta) and self.theta > 0):
            raise ValueError(f"theta must be positive and finite, got {self.theta}")
        if not self.eps >= 0:
            raise ValueError(f"eps must be non-negative, got {self.eps}")
        object.__setattr__(self, "reset", Reset(self.reset))
        object.__setattr__(self, "event_time_policy", EventTimePolicy(self.event_time_policy))


# ---------------------------------------------------------------------------
# quantizer


def level(x: float, theta: float, eps: float = DEFAULT_EPS) -> int:
    """Signed number of whole thresholds contained in ``x`` (truncation toward zero).

    A ratio within ``eps`` below the next integer counts as reaching it.
    """
    r = x / theta
    a = abs(r)
    k = math.floor(a)
    if a - k >= 1.0 - eps:
        k += 1
    return k if r >= 0 else -k


def levels(x: np.ndarray, theta: float, eps: float = DEFAULT_EPS) -> np.ndarray:
    r = np.asarray(x, dtype=float) / theta
    a = np.abs(r)
    k = np.floor(a)
    k = np.where(a - k >= 1.0 - eps, k + 1, k)
    return (np.sign(r) * k).astype(np.int64)


def quantize_trunc(x, theta: float, eps: float = DEFAULT_EPS):
    """``theta * sgn(x) * floor(|x| / theta)``; works on scalars and arrays."""
    if not (np.isfinite(theta) and theta > 0):
        raise ValueError(f"theta must be positive and finite, got {theta}")
    if not np.all(np.isfinite(x)):
        raise ValueError("quantize_trunc: non-finite input")
    if np.ndim(x) == 0:
        return theta * level(float(x), theta, eps)
    return theta * levels(x, theta, eps)


# ---------------------------------------------------------------------------
# signals


@dataclass(frozen=True, eq=False)
class HybridSignal:
    """Piecewise-constant samples plus finitely many Dirac impulses.

    ``samples[i]`` is the value on ``(t_start + i*dt, t_start + (i+1)*dt]``.
    ``impulses`` holds ``(time, weight)`` pairs with times in ``(t_start, t_end]``.
    """

    samples: np.ndarray
    dt: float
    t_start: float = 0.0
    impulses: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float).reshape(-1)
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        imps = tuple(sorted((float(t), float(w)) for t, w in self.impulses))
        t_end = self.t_end
        tol = TIME_RTOL * self.dt
        for i, (t, w) in enumerate(imps):
            if not (math.isfinite(t) and math.isfinite(w)):
                raise ValueError("impulses must be finite")
            if not (self.t_start + tol < t <= t_end + tol):
                raise ValueError(f"impulse time {t} outside ({self.t_start}, {t_end}]")
            if i and t - imps[i - 1][0] <= tol:
                raise ValueError("impulse times must be strictly increasing")
        object.__setattr__(self, "impulses", imps)

    @property
    def n(self) -> int:
        return len(self.samples)

    @property
    def t_end(self) -> float:
        return self.t_start + self.n * self.dt

    @cached_property
    def edges(self) -> np.ndarray:
        """Right edges of the sample intervals."""
        return self.t_start + self.dt * np.arange(1, self.n + 1)

    @property
    def has_impulses(self) -> bool:
        return len(self.impulses) > 0

    @cached_property
    def _table(self):
        # Event instants: the sample edges plus off-grid impulse times.  Per instant,
        # the integral of the bounded part since the previous instant and the impulse weight.
        edges = self.edges
        tol = TIME_RTOL * self.dt
        weights = np.zeros(self.n)
        extra_t, extra_w = [], []
        for t, w in self.impulses:
            i = int(round((t - self.t_start) / self.dt)) - 1
            if 0 <= i < self.n and abs(edges[i] - t) <= tol:
                weights[i] += w
            else:
                extra_t.append(t)
                extra_w.append(w)
        if not extra_t:
            cont = self.samples * self.dt
            return edges, cont, weights, np.arange(self.n)
        times = np.concatenate([edges, extra_t])
        w_all = np.concatenate([weights, extra_w])
        order = np.argsort(times, kind="stable")
        times, w_all = times[order], w_all[order]
        piece = np.searchsorted(edges, times - tol, side="left")
        prev = np.concatenate([[self.t_start], times[:-1]])
        width = times - prev
        is_edge = order < self.n
        prev_edge = np.concatenate([[True], is_edge[:-1]])
        width = np.where(is_edge & prev_edge, self.dt, width)
        cont = self.samples[piece] * width
        return times, cont, w_all, piece

    @property
    def instants(self) -> np.ndarray:
        return self._table[0]

    @cached_property
    def increments(self) -> np.ndarray:
        """Integral of the signal over ``(previous instant, instant]``, jumps included."""
        _, cont, w, _ = self._table
        return cont + w

    def with_samples(self, samples) -> "HybridSignal":
        return HybridSignal(samples, self.dt, self.t_start, self.impulses)

    def scaled(self, c: float) -> "HybridSignal":
        return HybridSignal(
            self.samples * c, self.dt, self.t_start, tuple((t, w * c) for t, w in self.impulses)
        )

    def same_grid(self, other: "HybridSignal") -> bool:
        return (
            self.n == other.n
            and abs(self.dt - other.dt) <= TIME_RTOL * self.dt * 1e-3
            and abs(self.t_start - other.t_start) <= TIME_RTOL * self.dt
        )

    def __add__(self, other: "HybridSignal") -> "HybridSignal":
        _check_grid(self, other)
        merged = _merge_pairs(list(self.impulses) + list(other.impulses), TIME_RTOL * self.dt)
        return HybridSignal(self.samples + other.samples, self.dt, self.t_start, merged)

    def __neg__(self) -> "HybridSignal":
        return self.scaled(-1.0)

    def __sub__(self, other: "HybridSignal") -> "HybridSignal":
        return self + (-other)

    def __repr__(self) -> str:
        return (f"HybridSignal(n={self.n}, dt={self.dt}, t_start={self.t_start}, "
                f"impulses={len(self.impulses)})")


def _check_grid(f: HybridSignal, g: HybridSignal) -> None:
    if not f.same_grid(g):
        raise ValueError("signals do not share a sample grid")


def _merge_pairs(pairs, tol) -> tuple[tuple[float, float], ...]:
    pairs = sorted(pairs)
    out: list[list[float]] = []
    for t, w in pairs:
        if out and t - out[-1][0] <= tol:
            out[-1][1] += w
        else:
            out.append([t, w])
    return tuple((t, w) for t, w in out if w != 0.0)


# ---------------------------------------------------------------------------
# spike trains


@dataclass(frozen=True, eq=False)
class SpikeTrain:
    """Spikes ``counts[k] * theta`` at strictly increasing ``times[k]``.

    Amplitudes are stored as integer multiples of ``theta`` so that cumulative
    sums are exact.
    """

    theta: float
    times: np.ndarray = field(default_factory=lambda: np.zeros(0))
    counts: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __post_init__(self):
        if not (math.isfinite(self.theta) and self.theta > 0):
            raise ValueError(f"theta must be positive, got {self.theta}")
        times = np.asarray(self.times, dtype=float).reshape(-1)
        counts = np.asarray(self.counts).reshape(-1)
        if counts.size and not np.issubdtype(counts.dtype, np.integer):
            if not np.all(counts == np.round(counts)):
                raise ValueError("counts must be integers")
        counts = counts.astype(np.int64)
        if times.shape != counts.shape:
            raise ValueError("times and counts differ in length")
        if np.any(counts == 0):
            raise ValueError("spike amplitudes must be nonzero")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise ValueError("spike times must be strictly increasing")
        times.setflags(write=False)
        counts.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_amplitudes(cls, theta: float, times: Iterable[float], amplitudes: Iterable[float],
                        eps: float = 1e-9) -> "SpikeTrain":
        amps = np.asarray(list(amplitudes), dtype=float)
        k = np.round(amps / theta)
        bad = np.abs(amps / theta - k) > eps * np.maximum(1.0, np.abs(k))
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ValueError(f"amplitude {amps[i]} is not a multiple of theta={theta}")
        return cls(theta, np.asarray(list(times), dtype=float), k.astype(np.int64))

    @classmethod
    def empty(cls, theta: float) -> "SpikeTrain":
        return cls(theta)

    @property
    def amplitudes(self) -> np.ndarray:
        return self.counts * self.theta

    def __len__(self) -> int:
        return len(self.times)

    def __iter__(self):
        return iter(zip(self.times.tolist(), self.amplitudes.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpikeTrain):
            return NotImplemented
        return (self.theta == other.theta
                and np.array_equal(self.times, other.times)
                and np.array_equal(self.counts, other.counts))

    def __repr__(self) -> str:
        body = ", ".join(f"({t:.6g}, {a:.6g})" for t, a in list(self)[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"SpikeTrain(theta={self.theta:g}, [{body}{more}])"

    def _combine(self, other: "SpikeTrain", sign: int, tol: float) -> "SpikeTrain":
        if self.theta != other.theta:
            raise ValueError("spike trains use different thresholds")
        times = np.concatenate([self.times, other.times])
        counts = np.concatenate([self.counts, sign * other.counts])
        order = np.argsort(times, kind="stable")
        times, counts = times[order], counts[order]
        out_t: list[float] = []
        out_c: list[int] = []
        for t, c in zip(times.tolist(), counts.tolist()):
            if out_t and t - out_t[-1] <= tol:
                out_c[-1] += c
            else:
                out_t.append(t)
                out_c.append(c)
        keep = [i for i, c in enumerate(out_c) if c != 0]
        return SpikeTrain(self.theta, [out_t[i] for i in keep], [out_c[i] for i in keep])

    def add(self, other: "SpikeTrain", tol: float = 0.0) -> "SpikeTrain":
        """Sum of two trains; spikes closer than ``tol`` are treated as simultaneous."""
        return self._combine(other, 1, tol)

    def __add__(self, other: "SpikeTrain") -> "SpikeTrain":
        return self._combine(other, 1, 0.0)

    def __sub__(self, other: "SpikeTrain") -> "SpikeTrain":
        return self._combine(other, -1, 0.0)

    def __neg__(self) -> "SpikeTrain":
        return SpikeTrain(self.theta, self.times, -self.counts)

    def __mul__(self, k: int) -> "SpikeTrain":
        if int(k) != k:
            raise TypeError("spike trains scale by integers; use rescale() for real factors")
        if k == 0:
            return SpikeTrain.empty(self.theta)
        return SpikeTrain(self.theta, self.times, self.counts * int(k))

    __rmul__ = __mul__

    def rescale(self, c: float) -> "SpikeTrain":
        """The same train viewed in ``S_{|c| theta}``: amplitudes times ``c``."""
        if c == 0:
            raise ValueError("rescale factor must be nonzero")
        return SpikeTrain(abs(c) * self.theta, self.times, self.counts * int(np.sign(c)))

    def as_impulses(self, sign: float = 1.0) -> tuple[tuple[float, float], ...]:
        return tuple((t, sign * a) for t, a in self)


# ---------------------------------------------------------------------------
# piecewise functions of time


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Right-open pieces ``[breakpoints[k], breakpoints[k+1])``; the last piece runs to ``t_end``.

    Before the first breakpoint the function is 0.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    t_end: float
    tol: float = 0.0

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float).reshape(-1)
        v = np.asarray(self.values, dtype=float).reshape(-1)
        if b.shape != v.shape:
            raise ValueError("breakpoint count must equal value count")
        if b.size > 1 and np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)
        if self.tol == 0.0 and b.size:
            object.__setattr__(self, "tol", 1e-9 * max(1.0, abs(self.t_end - b[0])))

    @property
    def t_start(self) -> float:
        return float(self.breakpoints[0]) if self.breakpoints.size else self.t_end

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breakpoints, t + self.tol, side="right") - 1
        vals = np.concatenate([[0.0], self.values])
        return vals[idx + 1]


@dataclass(frozen=True, eq=False)
class PiecewiseLinear:
    """Value ``base[k] + slope[k] * (t - knots[k])`` on ``[knots[k], knots[k+1])``; 0 before ``knots[0]``."""

    knots: np.ndarray
    base: np.ndarray
    slope: np.ndarray
    t_end: float
    tol: float = 0.0

    def __post_init__(self):
        if self.tol == 0.0 and len(self.knots):
            object.__setattr__(self, "tol", 1e-9 * max(1.0, abs(self.t_end - self.knots[0])))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.knots, t + self.tol, side="right") - 1
        j = np.clip(idx, 0, len(self.knots) - 1)
        val = self.base[j] + self.slope[j] * (t - self.knots[j])
        return np.where(idx < 0, 0.0, val)


@dataclass(frozen=True, eq=False)
class Integral:
    """``A(f)(t)``: the integral of ``f`` over ``(t_start, t]``, jumps at ``t`` included."""

    signal: HybridSignal
    times: np.ndarray   # event instants
    values: np.ndarray  # A at each instant (right values)
    left: np.ndarray    # A just before each instant's impulse

    def __call__(self, t):
        f = self.signal
        t = np.asarray(t, dtype=float)
        tol = TIME_RTOL * f.dt
        j = np.searchsorted(self.times, t - tol, side="left")
        out = np.zeros_like(t)
        hit = (j < len(self.times)) & (np.abs(self.times[np.minimum(j, len(self.times) - 1)] - t) <= tol)
        jj = np.minimum(j, len(self.times) - 1)
        g_prev = np.where(j > 0, self.values[np.maximum(j - 1, 0)], 0.0)
        t_prev = np.where(j > 0, self.times[np.maximum(j - 1, 0)], f.t_start)
        piece = np.clip(np.ceil((t - f.t_start) / f.dt - 1e-12).astype(np.int64) - 1, 0, max(f.n - 1, 0))
        slope = f.samples[piece] if f.n else np.zeros_like(t)
        inside = g_prev + slope * (t - t_prev)
        out = np.where(hit, self.values[jj] if len(self.times) else 0.0, inside)
        out = np.where(t <= f.t_start + tol, 0.0, out)
        return out if out.ndim else float(out)

    def as_signal(self) -> HybridSignal:
        """The integral sampled at the sample edges, as a new signal on the same grid."""
        f = self.signal
        if len(self.times) != f.n:
            raise ValueError("integral has off-grid instants; it cannot be resampled exactly")
        return HybridSignal(self.values.copy(), f.dt, f.t_start)


def accumulate(f: HybridSignal) -> Integral:
    g = np.cumsum(f.increments)
    times, cont, _, _ = f._table
    prev = np.concatenate([[0.0], g[:-1]])
    return Integral(f, times, g, prev + cont)


# ---------------------------------------------------------------------------
# norms


def alexiewicz_norm_signal(f: HybridSignal) -> float:
    """``sup_T |A(f)(T)|``, exact: A is linear between instants, so checking each
    instant with and without its jump suffices."""
    a = accumulate(f)
    if not len(a.values):
        return 0.0
    return float(max(np.max(np.abs(a.values)), np.max(np.abs(a.left))))


def alexiewicz_norm_spikes(s: SpikeTrain) -> float:
    if not len(s):
        return 0.0
    return float(s.theta * np.max(np.abs(np.cumsum(s.counts))))


def alexiewicz_distance(f: HybridSignal, s: SpikeTrain, *, left_limits: bool = False) -> float:
    """``||f - s||_A``.

    By default the supremum runs over the signal's event instants and the spike
    times, with every jump at a time included: the potential a sampler observes.
    ``left_limits=True`` adds the value just before each jump, giving the
    continuous-time supremum.
    """
    a = accumulate(f)
    tol = TIME_RTOL * f.dt
    if len(s) and (s.times[0] <= f.t_start + tol or s.times[-1] > f.t_end + tol):
        raise ValueError("spike times outside the signal domain")
    # spike times that coincide with an instant take that instant's exact time
    j = np.searchsorted(a.times, s.times - tol, side="left")
    jj = np.minimum(j, max(len(a.times) - 1, 0))
    on = (j < len(a.times)) & (np.abs(a.times[jj] - s.times) <= tol) if len(a.times) else np.zeros(len(s), bool)
    st = np.where(on, a.times[jj] if len(a.times) else s.times, s.times)
    off = st[~on]
    times = np.union1d(a.times, off)
    k = np.searchsorted(a.times, times)
    on_inst = (k < len(a.times)) & (a.times[np.minimum(k, len(a.times) - 1)] == times)
    af_right = np.where(on_inst, a.values[np.minimum(k, len(a.values) - 1)], a(times))
    csum = np.cumsum(s.counts)
    idx = np.searchsorted(st, times, side="right") - 1
    as_right = np.where(idx >= 0, csum[np.maximum(idx, 0)] if len(s) else 0, 0) * s.theta
    d = np.abs(af_right - as_right)
    best = float(np.max(d)) if d.size else 0.0
    if left_limits and times.size:
        af_left = np.where(on_inst, a.left[np.minimum(k, len(a.left) - 1)], a(times))
        idx_l = np.searchsorted(st, times, side="left") - 1
        as_left = np.where(idx_l >= 0, csum[np.maximum(idx_l, 0)] if len(s) else 0, 0) * s.theta
        best = max(best, float(np.max(np.abs(af_left - as_left))))
    return best


def l1_norm(s: SpikeTrain) -> float:
    return float(s.theta * np.sum(np.abs(s.counts)))


def tv_norm(x: StepFunction) -> float:
    """Sum of jump heights, counting the jump from 0 at the start."""
    return float(np.sum(np.abs(np.diff(np.concatenate([[0.0], x.values])))))


def sup_distance(f: HybridSignal, x: Callable) -> float:
    """``max_i |f_i - x(t_i)|`` over the sample edges ``t_i``."""
    if f.has_impulses:
        raise ValueError("sup distance is undefined for signals with Dirac impulses")
    if not f.n:
        return 0.0
    return float(np.max(np.abs(f.samples - x(f.edges))))


def signal_from_values(values: Sequence[float], dt: float, t_start: float = 0.0,
                       impulses=()) -> HybridSignal:
    return HybridSignal(np.asarray(values, dtype=float), dt, t_start, tuple(impulses))
