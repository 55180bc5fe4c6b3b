#!/usr/bin/env python3
"""Compare numeric and closed-form curvature of Tod surfaces over a grid of (k1, k2, k3).

Domains where h(u) = k1 + k2/u + k3 u^2 is not positive are reported and skipped.
Prints one CSV row per admissible triple.
"""

import argparse
import csv
import itertools
import sys

from staticdec import DEFAULT_SCHEME, GeometryError, gaussian_curvature, sample_box
from staticdec.catalog import tod_curvature, tod_surface_metric


def sweep(values, u_range, samples, seed):
    for k1, k2, k3 in itertools.product(values, repeat=3):
        try:
            M = tod_surface_metric(k1, k2, k3, [u_range, [-1.0, 1.0]])
        except GeometryError as exc:
            yield k1, k2, k3, None, str(exc)
            continue
        pts = sample_box(M.domain, samples, seed=seed)
        err = max(abs(gaussian_curvature(M, DEFAULT_SCHEME, p) - tod_curvature(k1, k2, k3, p[0])) for p in pts)
        yield k1, k2, k3, err, ""


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--values", type=float, nargs="+", default=[-1.0, 0.0, 1.0, 2.0])
    ap.add_argument("--u-range", type=float, nargs=2, default=[0.5, 1.5])
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tolerance", type=float, default=1e-4)
    args = ap.parse_args(argv)
    w = csv.writer(sys.stdout)
    w.writerow(["k1", "k2", "k3", "max_abs_error", "note"])
    worst = 0.0
    for k1, k2, k3, err, note in sweep(args.values, args.u_range, args.samples, args.seed):
        w.writerow([k1, k2, k3, "" if err is None else f"{err:.3e}", note])
        if err is not None:
            worst = max(worst, err)
    print(f"worst error {worst:.3e} (tolerance {args.tolerance:g})", file=sys.stderr)
    return 0 if worst <= args.tolerance else 1


if __name__ == "__main__":
    sys.exit(main())
