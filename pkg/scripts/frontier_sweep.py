#!/usr/bin/env python3
"""Desk-scale convergence fractions across the 3/2 frontier.

Sweeps the unit-delay exponential-feedback model over a slope grid that
straddles 3/2 and prints one CSV row per slope: the certified verdict next
to the fraction of random histories whose tail settles below tol.  The
interesting part is past the frontier, where the verdict goes Inconclusive
while desk-scale trajectories keep converging for a while longer: the
criterion is sufficient, not necessary.

Usage: python3 scripts/frontier_sweep.py [--trials 5] [--t-end 300]
"""

import argparse
import sys

from ddestab import (
    decide_for_model,
    integrate,
    make_wright,
    random_history,
    tail_metrics,
)


def cell(p, trials, t_end, dt, tol):
    model = make_wright(p)
    converged = 0
    events = 0
    for seed in range(trials):
        init = random_history(seed, 1.0, -0.9, 3.0)
        traj = integrate(model, init, t_end, dt)
        if traj.events:
            events += 1
            continue
        if tail_metrics(traj, 0.0, 0.1).sup_dev < tol:
            converged += 1
    return converged / trials, events


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--t-end", type=float, default=300.0)
    ap.add_argument("--dt", type=float, default=0.05)
    ap.add_argument("--tol", type=float, default=1e-3)
    args = ap.parse_args(argv)

    ps = [1.0, 1.2, 1.4, 1.45, 1.5, 1.52, 1.55, 1.6, 1.7]
    print("p,verdict,margin,fraction_converged,n_events")
    for p in ps:
        verdict = decide_for_model(make_wright(p))
        frac, events = cell(p, args.trials, args.t_end, args.dt, args.tol)
        print(f"{p!r},{verdict.status},{verdict.certificate.margin!r},"
              f"{frac!r},{events}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
