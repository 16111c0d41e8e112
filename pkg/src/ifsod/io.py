"""CSV reading and writing for signals, impulses, spike trains and reconstructions.

Numbers are written with 12 significant digits, '.' as decimal separator and LF
line endings so output files are byte-stable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

import numpy as np

from .signal import HybridSignal, PiecewiseLinear, SpikeTrain, StepFunction


class ParseError(ValueError):
    pass


class SignalFormat(str, Enum):
    TWO_COLUMN = "two-column"
    ONE_COLUMN = "one-column"


@dataclass(frozen=True)
class SignalFileSpec:
    path: Path
    format: SignalFormat = SignalFormat.TWO_COLUMN
    rate_hz: float | None = None
    impulses_path: Path | None = None

    def __post_init__(self):
        if self.format is SignalFormat.ONE_COLUMN and not (self.rate_hz and self.rate_hz > 0):
            raise ValueError("one-column signal files need a positive rate")


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _rows(path: Path) -> Iterable[tuple[int, list[str]]]:
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, [c.strip() for c in line.split(",")]


def read_pairs(path: Path, ncols: int = 2) -> list[tuple[int, list[float]]]:
    out = []
    for lineno, cells in _rows(path):
        if len(cells) != ncols:
            raise ParseError(f"{path}:{lineno}: expected {ncols} column(s), got {len(cells)}")
        try:
            out.append((lineno, [float(c) for c in cells]))
        except ValueError:
            if not out:  # header line
                continue
            raise ParseError(f"{path}:{lineno}: cannot parse {','.join(cells)!r}") from None
        for c, v in zip(cells, out[-1][1]):
            if not math.isfinite(v):
                raise ParseError(f"{path}:{lineno}: non-finite value {c!r}")
    return out


def read_impulses(path: Path) -> tuple[tuple[float, float], ...]:
    return tuple((v[0], v[1]) for _, v in read_pairs(path, 2))


def read_signal(spec: SignalFileSpec) -> HybridSignal:
    """Load a signal.

    Two-column files hold ``t,value`` with ``t`` the right edge of each sample
    interval; the grid must be uniform.  One-column files hold values only and
    start at ``t = 0``.
    """
    path = Path(spec.path)
    if spec.format is SignalFormat.ONE_COLUMN:
        rows = read_pairs(path, 1)
        if not rows:
            raise ParseError(f"{path}: no samples")
        values = np.array([v[0] for _, v in rows])
        dt, t_start = 1.0 / spec.rate_hz, 0.0
    else:
        rows = read_pairs(path, 2)
        if not rows:
            raise ParseError(f"{path}: no samples")
        t = np.array([v[0] for _, v in rows])
        values = np.array([v[1] for _, v in rows])
        if len(t) > 1:
            steps = np.diff(t)
            dt = float((t[-1] - t[0]) / (len(t) - 1))
            bad = np.abs(steps - steps[0]) > 1e-6 * abs(steps[0])
            if steps[0] <= 0 or np.any(bad):
                lineno = rows[int(np.argmax(bad)) + 1][0] if np.any(bad) else rows[1][0]
                raise ParseError(f"{path}:{lineno}: sample times are not uniformly increasing")
        elif spec.rate_hz:
            dt = 1.0 / spec.rate_hz
        else:
            raise ParseError(f"{path}: a single sample needs --rate to fix the interval")
        t_start = float(t[0] - dt)
    impulses = read_impulses(spec.impulses_path) if spec.impulses_path else ()
    try:
        return HybridSignal(values, dt, t_start, impulses)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


def read_spikes(path: Path, theta: float) -> SpikeTrain:
    rows = read_pairs(path, 2)
    try:
        return SpikeTrain.from_amplitudes(theta, [v[0] for _, v in rows], [v[1] for _, v in rows])
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _write(path: Path | None, lines: list[str]) -> str:
    text = "".join(line + "\n" for line in lines)
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def write_signal(path: Path, f: HybridSignal, impulses_path: Path | None = None) -> None:
    _write(path, ["t,value"] + [f"{fmt(t)},{fmt(v)}" for t, v in zip(f.edges, f.samples)])
    if impulses_path is not None:
        _write(impulses_path, ["t,weight"] + [f"{fmt(t)},{fmt(w)}" for t, w in f.impulses])


def write_spikes(path: Path | None, s: SpikeTrain) -> str:
    return _write(path, ["t,amplitude"] + [f"{fmt(t)},{fmt(a)}" for t, a in s])


def write_function(path: Path | None, x: StepFunction | PiecewiseLinear, grid: np.ndarray) -> str:
    return _write(path, ["t,value"] + [f"{fmt(t)},{fmt(v)}" for t, v in zip(grid, x(grid))])


def write_rate_signal(path: Path | None, f: HybridSignal) -> str:
    lines = ["t,value"] + [f"{fmt(t)},{fmt(v)}" for t, v in zip(f.edges, f.samples)]
    lines += ["#impulses", "t,weight"] + [f"{fmt(t)},{fmt(w)}" for t, w in f.impulses]
    return _write(path, lines)


def write_columns(path: Path | None, header: list[str], columns: list[Iterable[float]]) -> str:
    rows = zip(*columns)
    return _write(path, [",".join(header)] + [",".join(fmt(v) for v in r) for r in rows])
