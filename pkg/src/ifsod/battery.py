"""Seeded battery of randomized property checks, shared by the ``verify`` command."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import synth
from .analysis import check_quantization_bound, check_quasi_isometry, sparsity_oracle
from .encoders import if_encode, sod_encode, sod_of_integral
from .reconstruct import (if_mod_reconstruct, if_sub_reconstruct, sod_pwl_reconstruct,
                          sod_step_reconstruct)
from .signal import HybridSignal, Reset, accumulate, l1_norm, sup_distance

THETAS = (0.1, 0.5, 1.0)


@dataclass
class PropertyOutcome:
    name: str
    trials: int = 0
    failures: int = 0
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


def signal_to_dict(f: HybridSignal) -> dict:
    return {
        "dt": f.dt,
        "t_start": f.t_start,
        "samples": f.samples.tolist(),
        "impulses": [list(p) for p in f.impulses],
    }


def _quantization(rng, i):
    f = synth.random_hybrid(rng)
    th = THETAS[i % 3]
    return check_quantization_bound(f, th).holds, {"theta": th, "f": signal_to_dict(f)}


def _identity(rng, i):
    f = synth.random_hybrid(rng)
    th = THETAS[i % 3]
    return sod_of_integral(f, th) == if_encode(f, th), {"theta": th, "f": signal_to_dict(f)}


def _quasi_isometry(rng, i):
    f, g = synth.random_hybrid(rng), synth.random_hybrid(rng)
    th = THETAS[i % 3]
    ok = check_quasi_isometry(f, g, th).holds
    return ok, {"theta": th, "f": signal_to_dict(f), "g": signal_to_dict(g)}


def _sod_bounds(rng, i):
    g = synth.random_continuous(rng)
    th = THETAS[i % 3]
    s = sod_encode(g, th)
    ok = (sup_distance(g, sod_step_reconstruct(s, g.t_end, g.t_start)) < th
          and sup_distance(g, sod_pwl_reconstruct(s, g.t_end, g.t_start)) < 2 * th)
    return ok, {"theta": th, "g": signal_to_dict(g)}


def _roundtrip(rng, i):
    f = synth.random_hybrid(rng, on_grid=True)
    th = THETAS[i % 3]
    z = if_encode(f, th)
    fr = if_mod_reconstruct(z, f.t_end, f.dt, f.t_start)
    ok = if_encode(fr, th) == z
    p = sod_pwl_reconstruct(z, f.t_end, f.t_start)
    ok = ok and float(np.max(np.abs(accumulate(fr)(f.edges) - p(f.edges)))) <= 1e-9
    return ok, {"theta": th, "f": signal_to_dict(f)}


def _sparsity(rng, i):
    n = int(rng.integers(1, 6))
    th = THETAS[i % 3]
    f = HybridSignal(rng.uniform(-2.9, 2.9, n) * th, 1.0)
    ok = sparsity_oracle(f, th, "if").min_l1 == l1_norm(if_encode(f, th))
    g = accumulate(f).as_signal()
    ok = ok and sparsity_oracle(g, th, "sod").min_l1 == l1_norm(sod_encode(g, th))
    return ok, {"theta": th, "f": signal_to_dict(f)}


def _slow_signal_condition(rng, i):
    th = THETAS[i % 3]
    f = synth.random_hybrid(rng, max_impulses=0)
    # rescale so that max|f_i| * dt < theta
    peak = float(np.max(np.abs(f.samples))) * f.dt
    f = f.scaled(0.9 * th / peak) if peak else f
    zm, zs = if_encode(f, th, Reset.MOD), if_encode(f, th, Reset.SUB)
    rm = if_mod_reconstruct(zm, f.t_end, f.dt, f.t_start)
    rs = if_sub_reconstruct(zs, f.t_end, f.dt, f.t_start)
    ok = zm == zs and np.array_equal(rm.samples, rs.samples) and rm.impulses == rs.impulses
    return ok, {"theta": th, "f": signal_to_dict(f)}


PROPERTIES: dict[str, Callable] = {
    "quantization_bound": _quantization,
    "sod_if_identity": _identity,
    "quasi_isometry": _quasi_isometry,
    "sod_reconstruction_bounds": _sod_bounds,
    "if_mod_roundtrip": _roundtrip,
    "maximal_sparsity": _sparsity,
    "slow_signal_sub_equals_mod": _slow_signal_condition,
}


def run_battery(seed: int, trials: int) -> list[PropertyOutcome]:
    """Run every property ``trials`` times; each property draws from its own seeded stream."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    outcomes = []
    for k, (name, check) in enumerate(PROPERTIES.items()):
        rng = np.random.default_rng([seed, k])
        out = PropertyOutcome(name)
        for i in range(trials):
            ok, example = check(rng, i)
            out.trials += 1
            if not ok:
                out.failures += 1
                if out.counterexample is None:
                    out.counterexample = {"trial": i, **example}
        outcomes.append(out)
    return outcomes
