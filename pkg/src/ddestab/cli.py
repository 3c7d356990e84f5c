"""Command-line front end.

Four subcommands: `check` prints a stability verdict as JSON, `simulate`
integrates one trajectory and reports tail metrics, `sweep` rasterizes a
parameter grid into per-cell convergence fractions, and `bounds` tabulates
the envelope transforms on a grid.

Exit codes: 0 success (and GloballyStable for check), 1 usage or input
error, 2 Inconclusive verdict, 3 simulation ended by an event.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .bounds import RationalBound, build_bound_table, derived_constants
from .criterion import decide_for_model
from .errors import DdestabError, TailEventError
from .integrator import (
    constant_history,
    history_from_knots,
    integrate,
    random_history,
    tail_metrics,
)
from .models import default_history_range, model_from_config


def _load_config(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _history_for(model, cfg: dict, seed: int):
    spec = cfg.get("history")
    span = model.span
    if spec is None:
        lo, hi = default_history_range(model)
        return random_history(seed, span, lo, hi)
    kind = spec.get("kind", "constant")
    if kind == "constant":
        return constant_history(float(spec["value"]), span)
    if kind == "random":
        lo, hi = default_history_range(model)
        lo = float(spec.get("lo", lo))
        hi = float(spec.get("hi", hi))
        return random_history(seed, span, lo, hi)
    if kind == "knots":
        return history_from_knots([float(t) for t in spec["times"]],
                                  [float(v) for v in spec["values"]])
    raise ValueError(f"unknown history kind {kind!r}")


# --------------------------------------------------------------------------
# check

def cmd_check(args) -> int:
    model = model_from_config(_load_config(args.config))
    verdict = decide_for_model(model)
    print(json.dumps(verdict.to_json(), indent=2))
    return 0 if verdict.globally_stable else 2


# --------------------------------------------------------------------------
# simulate

def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    model = model_from_config(cfg)
    span = model.span
    t_end = args.t_end if args.t_end is not None else 400.0 * span
    if args.dt is not None:
        dt = args.dt
    elif model.meta.base_delay is None:
        dt = span / 200.0  # variable delay: no grid alignment possible
    else:
        dt = span / 100.0
    init = _history_for(model, cfg, args.seed)
    traj = integrate(model, init, t_end, dt)
    csv = traj.to_csv(resample=args.resample)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv)
    else:
        sys.stdout.write(csv)
    if traj.events:
        print(json.dumps({
            "status": "event",
            "events": [{"kind": e.kind, "time": e.time} for e in traj.events],
        }, indent=2))
        return 3
    metrics = tail_metrics(traj, model.equilibrium, tail_fraction=0.2)
    print(json.dumps(metrics.to_json(), indent=2))
    return 0


# --------------------------------------------------------------------------
# sweep

@dataclass(frozen=True)
class AxisSpec:
    param: str
    values: tuple

    @classmethod
    def from_config(cls, ax: dict) -> "AxisSpec":
        param = str(ax["param"])
        if "values" in ax:
            return cls(param, tuple(float(v) for v in ax["values"]))
        lo, hi = (float(v) for v in ax["range"])
        steps = int(ax["steps"])
        if steps < 2:
            raise ValueError("axis needs steps >= 2")
        return cls(param, tuple(lo + (hi - lo) * i / (steps - 1) for i in range(steps)))


@dataclass(frozen=True)
class SweepSpec:
    base: dict
    axes: tuple  # one or two AxisSpec
    trials_per_cell: int
    t_end: Optional[float]
    dt: Optional[float]
    convergence_tol: float
    seed: int


def _parse_sweep(cfg: dict, args) -> SweepSpec:
    raw = cfg.get("sweep")
    if not raw:
        raise ValueError("sweep config needs a 'sweep' entry "
                         "(list of {param, range, steps} or {param, values})")
    if isinstance(raw, dict):
        raw = [raw]
    axes = tuple(AxisSpec.from_config(ax) for ax in raw)
    base = {k: v for k, v in cfg.items() if k not in ("sweep", "trials_per_cell")}
    if args.tol <= 0.0:
        raise ValueError("convergence tol must be positive")
    return SweepSpec(base, axes, int(cfg.get("trials_per_cell", 5)),
                     args.t_end, args.dt, args.tol, args.seed)


def run_sweep(spec: SweepSpec):
    """Yield one row dict per grid cell; events never abort the sweep."""
    for idx, combo in enumerate(itertools.product(*(ax.values for ax in spec.axes))):
        cfg = dict(spec.base)
        params = dict(cfg.get("params", {}))
        for ax, value in zip(spec.axes, combo):
            params[ax.param] = value
        cfg["params"] = params
        model = model_from_config(cfg)
        span = model.span
        t_end = spec.t_end if spec.t_end is not None else 400.0 * span
        if spec.dt is not None:
            dt = spec.dt
        elif model.meta.base_delay is None:
            dt = span / 200.0
        else:
            dt = span / 50.0
        verdict = decide_for_model(model)
        lo, hi = default_history_range(model)
        cell_seed = spec.seed * 100003 + idx * 257
        converged = 0
        n_events = 0
        for j in range(spec.trials_per_cell):
            init = random_history(cell_seed + j, span, lo, hi)
            traj = integrate(model, init, t_end, dt)
            if traj.events:
                n_events += len(traj.events)
                continue
            metrics = tail_metrics(traj, model.equilibrium, tail_fraction=0.1)
            if metrics.sup_dev < spec.convergence_tol:
                converged += 1
        row = {ax.param: value for ax, value in zip(spec.axes, combo)}
        row["fraction_converged"] = converged / spec.trials_per_cell
        row["verdict"] = verdict.status
        row["n_events"] = n_events
        yield row


def cmd_sweep(args) -> int:
    spec = _parse_sweep(_load_config(args.config), args)
    header = [ax.param for ax in spec.axes] + ["fraction_converged", "verdict", "n_events"]
    lines = [",".join(header)]
    for row in run_sweep(spec):
        lines.append(",".join(
            repr(row[k]) if isinstance(row[k], float) else str(row[k]) for k in header))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# --------------------------------------------------------------------------
# bounds

def cmd_bounds(args) -> int:
    bound = RationalBound(args.a, args.b)
    x_max = args.x_max
    n = args.n
    lo = max(-x_max, 0.999 * bound.domain_low)
    xs = [lo + (x_max - lo) * i / (n - 1) for i in range(n)]
    if 0.0 not in xs:
        xs.append(0.0)
    table = build_bound_table(bound, xs)
    csv = table.to_csv(include_reason=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv)
        with open(args.out + ".meta.json", "w") as fh:
            json.dump({"constants": derived_constants(bound), "notes": list(table.notes)},
                      fh, indent=2)
            fh.write("\n")
    else:
        sys.stdout.write(csv)
        print(json.dumps({"constants": derived_constants(bound),
                          "notes": list(table.notes)}, indent=2))
    return 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ddestab",
                                description="delay-equation stability toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("check", help="print a stability verdict for a model config")
    pc.add_argument("--config", required=True, help="model config JSON path")

    ps = sub.add_parser("simulate", help="integrate one trajectory and report tail metrics")
    ps.add_argument("--config", required=True, help="model config JSON path")
    ps.add_argument("--t-end", type=float, default=None, help="final time (default 400*span)")
    ps.add_argument("--dt", type=float, default=None,
                    help="step size (default span/100, or span/200 for variable delay)")
    ps.add_argument("--seed", type=int, default=0, help="seed for random initial history")
    ps.add_argument("--out", default=None, help="trajectory CSV path (default stdout)")
    ps.add_argument("--resample", type=int, default=None, metavar="N",
                    help="resample output onto N uniform intervals (N+1 rows)")

    pw = sub.add_parser("sweep", help="convergence fractions over a parameter grid")
    pw.add_argument("--config", required=True, help="sweep config JSON path")
    pw.add_argument("--t-end", type=float, default=None, help="final time (default 400*span)")
    pw.add_argument("--dt", type=float, default=None, help="step size (default span/50)")
    pw.add_argument("--seed", type=int, default=0, help="base seed for per-cell histories")
    pw.add_argument("--tol", type=float, default=1e-3,
                    help="tail sup-deviation threshold for convergence")
    pw.add_argument("--out", default=None, help="sweep CSV path (default stdout)")

    pb = sub.add_parser("bounds", help="tabulate envelope transforms on a grid")
    pb.add_argument("--a", type=float, required=True, help="envelope slope at 0 (negative)")
    pb.add_argument("--b", type=float, required=True, help="envelope curvature parameter (>= 0)")
    pb.add_argument("--x-max", type=float, default=5.0, help="grid endpoint (default 5.0)")
    pb.add_argument("--n", type=int, default=201, help="grid size (default 201)")
    pb.add_argument("--out", default=None,
                    help="table CSV path; constants go to <out>.meta.json (default stdout)")
    return p


_COMMANDS = {
    "check": cmd_check,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "bounds": cmd_bounds,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DdestabError, TailEventError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
