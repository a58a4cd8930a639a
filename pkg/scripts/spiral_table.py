#!/usr/bin/env python3
"""Norm-decay table for the polygonal ray spiral.

For each angle alpha and ray count n, projects the start point through the
equispaced rays and compares the final norm against the per-step decay
factor cos(alpha/n)^n, which tends to 1 as n grows: with enough rays the
spiral ends as close to the start's norm as desired.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from cyclex import SpiralSpec, spiral
from cyclex.impossibility import write_spiral_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--alphas", default="0.5236,1.5708,2.3562", help="comma list of angles in radians"
    )
    parser.add_argument("--ns", default="3,10,100,10000,1000000", help="comma list of ray counts")
    parser.add_argument("--csv-dir", default=None, help="also dump each spiral as CSV here")
    args = parser.parse_args()

    alphas = [float(a) for a in args.alphas.split(",")]
    ns = [int(n) for n in args.ns.split(",")]

    print(f"{'alpha':>8} {'n':>9} {'final_norm':>20} {'cos(a/n)^n':>20} {'rel err':>10}")
    for alpha in alphas:
        target = 0.01 * np.array([math.cos(alpha), math.sin(alpha)])
        for n in ns:
            pts, final_norm = spiral(SpiralSpec(target=target, start=[1.0, 0.0], n=n))
            law = math.cos(alpha / n) ** n
            rel = abs(final_norm - law) / law
            print(f"{alpha:8.4f} {n:9d} {final_norm:20.15f} {law:20.15f} {rel:10.2e}")
            if args.csv_dir and n <= 10000:
                out = Path(args.csv_dir)
                out.mkdir(parents=True, exist_ok=True)
                write_spiral_csv(pts, out / f"spiral_a{alpha:.4f}_n{n}.csv")


if __name__ == "__main__":
    main()
