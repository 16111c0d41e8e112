"""Command-line front end: ``ifsod {generate,encode,reconstruct,sweep,regularize,verify}``."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import io, synth
from .analysis import (NoFixedPoint, find_fixed_point, if_regularization_sweep,
                       regularization_sweep, threshold_sweep)
from .battery import run_battery
from .encoders import if_encode
from .reconstruct import (if_mod_reconstruct, if_sub_reconstruct, sod_pwl_reconstruct,
                          sod_step_reconstruct)
from .signal import EncoderConfig, EventTimePolicy, HybridSignal, Reset, accumulate

SCHEMA_VERSION = 1
SCHEMA_PATH = Path(__file__).parent / "schema" / "report.schema.json"


class UsageError(Exception):
    pass


def _positive(name):
    def conv(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number") from None
        if not (math.isfinite(v) and v > 0):
            raise argparse.ArgumentTypeError(f"{name} must be positive, got {text}")
        return v
    return conv


def _load(args) -> HybridSignal:
    fmt = io.SignalFormat.ONE_COLUMN if args.rate else io.SignalFormat.TWO_COLUMN
    spec = io.SignalFileSpec(Path(args.input), fmt, args.rate,
                             Path(args.impulses) if args.impulses else None)
    return io.read_signal(spec)


def _add_signal_args(p):
    p.add_argument("input", help="signal CSV")
    p.add_argument("--rate", type=_positive("--rate"), help="sampling rate for one-column CSV")
    p.add_argument("--impulses", metavar="PATH", help="CSV of Dirac impulses 't,weight'")


def _fixed_point_record(f: HybridSignal, kind: str) -> dict:
    try:
        fp = find_fixed_point(f, kind)
    except NoFixedPoint as exc:
        return {"status": "no-fixed-point", "u": None, "message": str(exc)}
    return {"status": fp.status, "u": fp.u, "lo": fp.lo, "hi": fp.hi, "iterations": fp.iterations}


def _dump_json(path: Path, report: dict) -> None:
    _check_finite(report)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _check_finite(obj) -> None:
    if isinstance(obj, float) and not math.isfinite(obj):
        raise ValueError("report contains a non-finite number")
    if isinstance(obj, dict):
        for v in obj.values():
            _check_finite(v)
    elif isinstance(obj, list):
        for v in obj:
            _check_finite(v)


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    f = synth.generate(args.kind, args.n, args.dt, args.seed)
    out = Path(args.out)
    side = None
    if f.has_impulses:
        side = Path(args.impulses_out) if args.impulses_out else out.with_suffix(".impulses.csv")
    io.write_signal(out, f, side)
    if side is not None:
        print(f"impulses written to {side}")
    return 0


def cmd_encode(args) -> int:
    f = _load(args)
    policy = EventTimePolicy.SUBSAMPLE_INTERP if args.subsample_times else EventTimePolicy.GRID_SNAP
    s = if_encode(f, EncoderConfig(args.theta, Reset(args.reset), policy))
    text = io.write_spikes(Path(args.out) if args.out else None, s)
    if not args.out:
        sys.stdout.write(text)
    return 0


def cmd_reconstruct(args) -> int:
    s = io.read_spikes(Path(args.spikes), args.theta)
    t_end = args.t_end if args.t_end is not None else (float(s.times[-1]) if len(s) else args.t_start)
    out = Path(args.out) if args.out else None
    n = int(round((t_end - args.t_start) / args.dt))
    if args.kind in ("sod-step", "sod-pwl"):
        fn = (sod_step_reconstruct if args.kind == "sod-step" else sod_pwl_reconstruct)(
            s, t_end, args.t_start)
        text = io.write_function(out, fn, args.t_start + args.dt * np.arange(n + 1))
    else:
        rec = if_mod_reconstruct if args.kind == "if-mod" else if_sub_reconstruct
        text = io.write_rate_signal(out, rec(s, t_end, args.dt, args.t_start))
    if out is None:
        sys.stdout.write(text)
    return 0


def cmd_sweep(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if not args.theta_min < args.theta_max:
        raise UsageError("--theta-min must be below --theta-max")
    f = _load(args)
    thetas = np.linspace(args.theta_min, args.theta_max, args.steps)
    res = threshold_sweep(f, thetas)
    fixed = {"if_mod": _fixed_point_record(f, "if")}
    if not f.has_impulses:
        fixed["sod"] = _fixed_point_record(f, "sod")
    props = {
        "mod_within_2theta": bool(np.all(res.max_err_mod <= 2 * res.thresholds)),
        "curves_identical": bool(np.array_equal(res.max_err_mod, res.max_err_sub)),
    }
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": {"command": "sweep", "input": str(args.input), "rate": args.rate,
                   "impulses": args.impulses, "theta_min": args.theta_min,
                   "theta_max": args.theta_max, "steps": args.steps},
        "sweep": res.to_dict(),
        "fixed_point": fixed,
        "properties": props,
    }
    _dump_json(Path(args.out), report)
    print(f"theta* = {io.fmt(res.theta_star)}")
    print(f"{'theta':>18} {'max_err_mod':>18} {'max_err_sub':>18} {'n_mod':>7} {'n_sub':>7}")
    for row in zip(res.thresholds, res.max_err_mod, res.max_err_sub,
                   res.spike_count_mod, res.spike_count_sub):
        print(f"{io.fmt(row[0]):>18} {io.fmt(row[1]):>18} {io.fmt(row[2]):>18} "
              f"{row[3]:>7d} {row[4]:>7d}")
    return 0


def cmd_regularize(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    f = _load(args)
    quantum = f.dt * float(np.max(np.abs(f.samples)))
    if args.integrate:
        f = accumulate(f).as_signal()
    top = float(np.max(np.abs(f.samples)))
    u_min = args.u_min if args.u_min else 2 * quantum
    u_max = args.u_max if args.u_max else top
    if not 0 < u_min < u_max:
        raise UsageError(f"empty u range [{u_min}, {u_max}]")
    grid = np.geomspace(u_min, u_max, args.steps)
    sweep = (regularization_sweep if args.kind == "sod" else if_regularization_sweep)
    res = sweep(f, args.lam, grid)
    fp = res.fixed_point
    fixed = {args.kind: ({"status": "no-fixed-point", "u": None, "message": res.fixed_point_error}
                         if fp is None else
                         {"status": fp.status, "u": fp.u, "lo": fp.lo, "hi": fp.hi,
                          "iterations": fp.iterations})}
    reg = res.to_dict()
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": {"command": "regularize", "input": str(args.input), "kind": args.kind,
                   "lambda": args.lam, "integrate": args.integrate, "grid_quantum": quantum,
                   "u_min": u_min, "u_max": u_max, "steps": args.steps},
        "sweep": None,
        "fixed_point": fixed,
        "properties": {
            "alpha_within_one_quantum": bool(np.all(np.abs(res.alpha - res.u_grid) <= quantum * (1 + 1e-9))),
            "beta_nonincreasing": res.beta_nonincreasing,
            "l1_nonincreasing": res.l1_nonincreasing,
        },
        "regularization": {k: reg[k] for k in ("lambda", "u_grid", "alpha", "beta", "l1",
                                                 "objective", "u_min_objective")},
    }
    _dump_json(Path(args.out), report)
    if args.csv:
        io.write_columns(Path(args.csv), ["u", "alpha", "beta", "l1", "objective"],
                         [res.u_grid, res.alpha, res.beta, res.l1, res.objective])
    print(f"u_min_objective = {io.fmt(res.u_min_objective)}")
    print(f"u_fixed_point = {io.fmt(fp.u) if fp else 'none'}")
    return 0


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    outcomes = run_battery(args.seed, args.trials)
    for o in outcomes:
        status = "PASS" if o.passed else "FAIL"
        print(f"{status} {o.name} ({o.trials - o.failures}/{o.trials})")
    failed = [o for o in outcomes if not o.passed]
    if failed:
        print(json.dumps({o.name: o.counterexample for o in failed}, sort_keys=True))
        return 1
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ifsod", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic signal CSV")
    p.add_argument("--kind", required=True, choices=synth.KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dt", type=_positive("--dt"), default=synth.DEFAULT_DT)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--impulses-out", help="impulse sidecar path (default: OUT.impulses.csv)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("encode", help="integrate-and-fire encode a signal")
    _add_signal_args(p)
    p.add_argument("--theta", type=_positive("--theta"), required=True)
    p.add_argument("--reset", choices=["mod", "sub"], default="mod")
    p.add_argument("--subsample-times", action="store_true",
                   help="exact crossing times instead of sample edges")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("reconstruct", help="reconstruct a signal from a spike CSV")
    p.add_argument("spikes")
    p.add_argument("--theta", type=_positive("--theta"), required=True)
    p.add_argument("--kind", required=True, choices=["sod-step", "sod-pwl", "if-mod", "if-sub"])
    p.add_argument("--dt", type=_positive("--dt"), default=synth.DEFAULT_DT, help="output grid step")
    p.add_argument("--t-start", type=float, default=0.0)
    p.add_argument("--t-end", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("sweep", help="IF/mod vs IF/sub reconstruction error over thresholds")
    _add_signal_args(p)
    p.add_argument("--theta-min", type=_positive("--theta-min"), required=True)
    p.add_argument("--theta-max", type=_positive("--theta-max"), required=True)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--out", required=True, help="JSON report path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("regularize", help="regularization curves and the fixed point")
    _add_signal_args(p)
    p.add_argument("--lambda", dest="lam", type=float, default=0.002)
    p.add_argument("--kind", choices=["sod", "if"], default="sod")
    p.add_argument("--integrate", action="store_true", help="sweep the integral of the input")
    p.add_argument("--u-min", type=_positive("--u-min"))
    p.add_argument("--u-max", type=_positive("--u-max"))
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--out", required=True, help="JSON report path")
    p.add_argument("--csv", help="plot-ready CSV path")
    p.set_defaults(func=cmd_regularize)

    p = sub.add_parser("verify", help="run the randomized property battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"ifsod: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
