"""Regenerate the golden files under tests/data from the library API.

Run after an intentional output change:  python3 scripts/make_goldens.py
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from ifsod import io, synth
from ifsod.encoders import if_encode
from ifsod.reconstruct import if_mod_reconstruct, sod_pwl_reconstruct, sod_step_reconstruct
from ifsod.signal import Reset

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"
THETA = 0.05
GENERATE_CASES = {
    "accel-like": dict(n=500, seed=0),
    "ramp": dict(n=100, seed=0),
    "impulse-train": dict(n=300, seed=2),
    "mixed": dict(n=400, seed=1),
}


def sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    f = synth.accel_like(500, seed=0)
    io.write_signal(DATA / "accel_fixture.csv", f)
    z = if_encode(f, THETA, Reset.MOD)
    io.write_spikes(DATA / "accel_fixture_mod_0.05.csv", z)
    io.write_spikes(DATA / "accel_fixture_sub_0.05.csv", if_encode(f, THETA, Reset.SUB))
    grid = f.t_start + f.dt * np.arange(f.n + 1)
    io.write_function(DATA / "accel_fixture_sod_step.csv", sod_step_reconstruct(z, f.t_end), grid)
    io.write_function(DATA / "accel_fixture_sod_pwl.csv", sod_pwl_reconstruct(z, f.t_end), grid)
    io.write_rate_signal(DATA / "accel_fixture_if_mod.csv", if_mod_reconstruct(z, f.t_end, f.dt))

    sums = {}
    tmp = DATA / "_tmp"
    tmp.mkdir(exist_ok=True)
    for kind, kw in GENERATE_CASES.items():
        g = synth.generate(kind, kw["n"], synth.DEFAULT_DT, kw["seed"])
        out = tmp / f"{kind}.csv"
        side = out.with_suffix(".impulses.csv") if g.has_impulses else None
        io.write_signal(out, g, side)
        sums[kind] = {**kw, "sha256": sha256(out),
                      "impulses_sha256": sha256(side) if side else None}
        for p in tmp.iterdir():
            p.unlink()
    tmp.rmdir()
    (DATA / "generate_checksums.json").write_text(json.dumps(sums, indent=2, sort_keys=True) + "\n")
    print(f"wrote goldens to {DATA}")


if __name__ == "__main__":
    main()
