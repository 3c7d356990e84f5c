#!/usr/bin/env python3
"""Dump envelope-transform tables for a slope grid.

Writes one CSV per slope value (columns x, A, B, D, R, branch, reason) plus
a constants JSON, into --outdir.  Defaults cover the range where the
comparison machinery is sharpest.
"""

import argparse
import json
import os
import sys

from ddestab import RationalBound, build_bound_table, derived_constants


def grid(bound, x_max, n):
    lo = max(-x_max, 0.999 * bound.domain_low)
    xs = [lo + (x_max - lo) * i / (n - 1) for i in range(n)]
    if 0.0 not in xs:
        xs.append(0.0)
    return xs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="bound_tables")
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--x-max", type=float, default=5.0)
    ap.add_argument("--n", type=int, default=201)
    ap.add_argument("--slopes", type=float, nargs="+",
                    default=[-1.5, -1.4, -1.3, -1.25, -1.0, -0.5])
    args = ap.parse_args(argv)

    os.makedirs(args.outdir, exist_ok=True)
    index = []
    for a in args.slopes:
        bound = RationalBound(a, args.b)
        table = build_bound_table(bound, grid(bound, args.x_max, args.n))
        name = f"bounds_a{a:+.2f}_b{args.b:.2f}.csv"
        path = os.path.join(args.outdir, name)
        with open(path, "w") as fh:
            fh.write(table.to_csv(include_reason=True))
        index.append({"file": name, "constants": derived_constants(bound),
                      "notes": list(table.notes)})
        print(f"wrote {path} ({len(table.rows)} rows)")
    with open(os.path.join(args.outdir, "constants.json"), "w") as fh:
        json.dump(index, fh, indent=2)
        fh.write("\n")
    print(f"wrote {os.path.join(args.outdir, 'constants.json')}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
