"""Property checks, the exhaustive sparsity oracle, regularization sweeps and threshold studies."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .encoders import if_encode, sod_encode
from .reconstruct import if_mod_reconstruct, if_sub_reconstruct, sod_step_reconstruct
from .signal import (DEFAULT_EPS, EncoderConfig, HybridSignal, Reset, SpikeTrain, accumulate,
                     alexiewicz_distance, alexiewicz_norm_signal, alexiewicz_norm_spikes, l1_norm,
                     levels, sup_distance, tv_norm)


class QuantizationCheck(NamedTuple):
    distance: float
    holds: bool


class QuasiIsometryCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def check_quantization_bound(f: HybridSignal, theta: float, eps: float = DEFAULT_EPS,
                             cfg: EncoderConfig | None = None) -> QuantizationCheck:
    """Distance from ``f`` to its IF/mod train and whether it is below ``theta*(1 - eps)``."""
    cfg = cfg or EncoderConfig(theta, Reset.MOD, eps=eps)
    d = alexiewicz_distance(f, if_encode(f, cfg))
    return QuantizationCheck(d, d < theta - eps * theta)


def check_quasi_isometry(f: HybridSignal, g: HybridSignal, theta: float) -> QuasiIsometryCheck:
    """Compare ``||IF(g) - IF(f)||_A`` with ``||g - f||_A``.

    Both sides are read the way the encoder sees them: right values at the
    event instants of ``f`` and ``g``.
    """
    if not f.same_grid(g):
        raise ValueError("signals do not share a sample grid")
    lhs = alexiewicz_norm_spikes(if_encode(g, theta).add(-if_encode(f, theta), tol=1e-6 * f.dt))
    af, ag = accumulate(f), accumulate(g)
    t = np.union1d(af.times, ag.times)
    rhs = float(np.max(np.abs(ag(t) - af(t)), initial=0.0))
    return QuasiIsometryCheck(lhs, rhs, abs(lhs - rhs) < 2 * theta)


# ---------------------------------------------------------------------------
# exhaustive sparsity oracle


class OracleMode(str, Enum):
    SUP_NORM_SOD = "sod"
    ALEX_IF = "if"


class SearchTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    min_l1: float
    witness: SpikeTrain
    unique: bool
    n_candidates: int


@lru_cache(maxsize=16)
def _candidates(n: int, max_mult: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    c = np.array(list(itertools.product(range(-max_mult, max_mult + 1), repeat=n)),
                 dtype=np.int64).reshape(-1, n)
    return c, np.cumsum(c, axis=1), np.abs(c).sum(axis=1)


def sparsity_oracle(f: HybridSignal, theta: float, mode: OracleMode | str = OracleMode.ALEX_IF,
                    max_mult: int = 3, cap: int = 5_000_000,
                    eps: float = DEFAULT_EPS) -> OracleResult:
    """Smallest l1 norm over every spike train on the event grid with amplitudes
    in ``theta*{-max_mult..max_mult}`` that lies in the open theta-ball around ``f``.

    ``sod`` mode measures the ball in the sup norm against the step function of
    the train (``f`` is the amplitude signal); ``if`` mode uses the Alexiewicz
    norm.  Ties go to the lexicographically first candidate.
    """
    mode = OracleMode(mode)
    if mode is OracleMode.SUP_NORM_SOD:
        if f.has_impulses:
            raise ValueError("sup-norm oracle needs an impulse-free amplitude signal")
        times, target = f.edges, f.samples
    else:
        a = accumulate(f)
        times, target = a.times, a.values
    n = len(times)
    size = (2 * max_mult + 1) ** n
    if size > cap:
        raise SearchTooLarge(f"{size} candidates exceed the cap of {cap}")
    cand, csum, l1 = _candidates(n, max_mult)
    feasible = np.all(levels(target[None, :] - theta * csum, theta, eps) == 0, axis=1)
    if not feasible.any():
        raise ValueError("no feasible train within the amplitude bound")
    cost = np.where(feasible, l1, np.iinfo(np.int64).max)
    best = int(np.argmin(cost))
    unique = int(np.count_nonzero(cost == cost[best])) == 1
    row = cand[best]
    nz = row != 0
    witness = SpikeTrain(theta, times[nz], row[nz])
    return OracleResult(float(theta * l1[best]), witness, unique, size)


# ---------------------------------------------------------------------------
# regularization sweeps and the fixed point u = ||encode_u(f)||_1


class NoFixedPoint(RuntimeError):
    pass


@dataclass(frozen=True)
class FixedPoint:
    u: float
    lo: float
    hi: float
    initial_width: float
    iterations: int
    status: str  # "ok" | "degenerate"

    @property
    def width_ratio(self) -> float:
        return (self.hi - self.lo) / self.initial_width if self.initial_width else 0.0


def _encoder(kind: str):
    if kind == "sod":
        return lambda f, u: sod_encode(f, u)
    if kind == "if":
        return lambda f, u: if_encode(f, u)
    raise ValueError(f"unknown encoder kind {kind!r}")


def _scale(f: HybridSignal, kind: str) -> float:
    if kind == "sod":
        return float(np.max(np.abs(f.samples))) if f.n else 0.0
    return alexiewicz_norm_signal(f)


def find_fixed_point(f: HybridSignal, kind: str = "sod", bracket: tuple[float, float] | None = None,
                     rel_tol: float = 1e-6, max_iter: int = 60) -> FixedPoint:
    """Bisection for the sign change of ``h(u) = u - ||encode_u(f)||_1``.

    The l1 norm is piecewise constant in ``u``, so the result is the location of
    the sign change (smallest bracketed ``u`` with ``h >= 0``), not a zero.
    """
    enc = _encoder(kind)
    scale = _scale(f, kind)
    if scale == 0.0:
        return FixedPoint(0.0, 0.0, 0.0, 0.0, 0, "degenerate")
    if bracket is None:
        lo = f.dt * float(np.min(np.abs(f.samples))) if f.n else 0.0
        lo = max(lo, 1e-6 * scale)
        hi = 2.0 * scale
    else:
        lo, hi = bracket

    def h(u):
        return u - l1_norm(enc(f, u))

    if h(lo) >= 0 or h(hi) < 0:
        raise NoFixedPoint(f"h has no sign change on [{lo:g}, {hi:g}]")
    width0 = hi - lo
    it = 0
    while hi - lo > rel_tol * width0 and it < max_iter:
        mid = 0.5 * (lo + hi)
        if h(mid) >= 0:
            hi = mid
        else:
            lo = mid
        it += 1
    return FixedPoint(hi, lo, hi, width0, it, "ok")


def is_nonincreasing(x: Sequence[float], tol: float = 1e-12) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(np.all(np.diff(x) <= tol * np.maximum(1.0, np.abs(x[:-1]))))


@dataclass
class RegularizationResult:
    kind: str
    lam: float
    u_grid: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    l1: np.ndarray
    objective: np.ndarray
    u_min_objective: float
    fixed_point: FixedPoint | None
    fixed_point_error: str | None = None

    @property
    def u_fixed_point(self) -> float | None:
        return self.fixed_point.u if self.fixed_point else None

    @property
    def l1_nonincreasing(self) -> bool:
        return is_nonincreasing(self.l1)

    @property
    def beta_nonincreasing(self) -> bool:
        return is_nonincreasing(self.beta)

    def to_dict(self) -> dict:
        fp = self.fixed_point
        return {
            "kind": self.kind,
            "lambda": self.lam,
            "u_grid": self.u_grid.tolist(),
            "alpha": self.alpha.tolist(),
            "beta": self.beta.tolist(),
            "l1": self.l1.tolist(),
            "objective": self.objective.tolist(),
            "u_min_objective": self.u_min_objective,
            "fixed_point": None if fp is None else {
                "u": fp.u, "lo": fp.lo, "hi": fp.hi, "initial_width": fp.initial_width,
                "iterations": fp.iterations, "status": fp.status,
            },
            "fixed_point_error": self.fixed_point_error,
        }


def _sweep(f: HybridSignal, lam: float, u_grid, kind: str) -> RegularizationResult:
    u_grid = np.asarray(u_grid, dtype=float)
    if np.any(u_grid <= 0) or np.any(np.diff(u_grid) <= 0):
        raise ValueError("u_grid must be positive and increasing")
    alpha, beta, l1 = [], [], []
    for u in u_grid:
        if kind == "sod":
            s = sod_encode(f, u)
            chi = sod_step_reconstruct(s, f.t_end, f.t_start)
            alpha.append(sup_distance(f, chi))
            beta.append(tv_norm(chi) / u)
        else:
            s = if_encode(f, u)
            alpha.append(alexiewicz_distance(f, s))
            beta.append(l1_norm(s) / u)
        l1.append(l1_norm(s))
    alpha, beta, l1 = np.array(alpha), np.array(beta), np.array(l1)
    objective = alpha + lam * beta
    try:
        fp, err = find_fixed_point(f, kind), None
    except NoFixedPoint as exc:
        fp, err = None, str(exc)
    return RegularizationResult(kind, lam, u_grid, alpha, beta, l1, objective,
                                float(u_grid[int(np.argmin(objective))]), fp, err)


def regularization_sweep(f: HybridSignal, lam: float, u_grid) -> RegularizationResult:
    """Sup-norm error, TV sparsity and the weighted objective of the SOD step function per ``u``."""
    if f.has_impulses:
        raise ValueError("the send-on-delta sweep needs an impulse-free signal")
    return _sweep(f, lam, u_grid, "sod")


def if_regularization_sweep(f: HybridSignal, lam: float, u_grid) -> RegularizationResult:
    """Alexiewicz error and l1 sparsity of the IF/mod train per ``u``."""
    return _sweep(f, lam, u_grid, "if")


# ---------------------------------------------------------------------------
# threshold sweep: IF/mod vs IF/sub reconstruction error


@dataclass
class SweepResult:
    thresholds: np.ndarray
    max_err_mod: np.ndarray
    max_err_sub: np.ndarray
    spike_count_mod: np.ndarray
    spike_count_sub: np.ndarray
    theta_star: float = field(init=False)

    def __post_init__(self):
        self.theta_star = float(self.thresholds[int(np.argmin(self.max_err_sub))])

    def to_dict(self) -> dict:
        return {
            "thresholds": self.thresholds.tolist(),
            "max_err_mod": self.max_err_mod.tolist(),
            "max_err_sub": self.max_err_sub.tolist(),
            "spike_count_mod": self.spike_count_mod.tolist(),
            "spike_count_sub": self.spike_count_sub.tolist(),
            "theta_star": self.theta_star,
        }


def integral_errors(f: HybridSignal, theta: float) -> tuple[float, float, int, int]:
    """Max deviation of the integral of the IF/mod and IF/sub reconstructions from ``A(f)``."""
    a = accumulate(f)
    zm = if_encode(f, theta, Reset.MOD)
    zs = if_encode(f, theta, Reset.SUB)
    rm = accumulate(if_mod_reconstruct(zm, f.t_end, f.dt, f.t_start))(a.times)
    rs = accumulate(if_sub_reconstruct(zs, f.t_end, f.dt, f.t_start))(a.times)
    return (float(np.max(np.abs(rm - a.values), initial=0.0)),
            float(np.max(np.abs(rs - a.values), initial=0.0)), len(zm), len(zs))


def threshold_sweep(f: HybridSignal, thetas: Sequence[float]) -> SweepResult:
    thetas = np.asarray(thetas, dtype=float)
    if np.any(thetas <= 0):
        raise ValueError("thresholds must be positive")
    rows = [integral_errors(f, th) for th in thetas]
    em, es, cm, cs = (np.array(c) for c in zip(*rows)) if rows else ([],) * 4
    return SweepResult(thetas, np.asarray(em, float), np.asarray(es, float),
                       np.asarray(cm, int), np.asarray(cs, int))
