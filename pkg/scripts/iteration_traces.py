#!/usr/bin/env python3
"""Print m-M iteration traces for a few envelope parameters.

Shows the contraction mechanism behind the verdicts: below the frontier the
limsup bound M_k collapses geometrically (with its liminf companion), and
exactly at a = -1.5 the composed map freezes into the identity, which is
why the boundary needs the weak-class argument instead.
"""

import argparse
import sys

from ddestab import RationalBound, mM_iteration


def show(a, b, M0, head):
    trace = mM_iteration(RationalBound(a, b), M0)
    steps = trace.steps
    print(f"a={a:+.2f} b={b:.2f} M0={M0}  route={trace.map_label}  "
          f"status={trace.status}  steps={len(steps)}")
    shown = list(steps[:head])
    if len(steps) > head:
        shown = list(steps[: head - 1]) + [steps[-1]]
    for s in shown:
        print(f"  k={s.k:>4d}  M={s.M:.10e}  m>={s.m_bound:.10e}")
    print()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--M0", type=float, default=1.0)
    ap.add_argument("--head", type=int, default=8)
    args = ap.parse_args(argv)

    for a, b in [(-0.5, 1.0), (-1.0, 1.0), (-1.25, 1.0), (-1.4, 1.0),
                 (-1.5, 1.0), (-1.2, 0.0), (-1.5, 0.0)]:
        show(a, b, args.M0, args.head)
    return 0


if __name__ == "__main__":
    sys.exit(main())
