"""Numerical well-block radius against grid refinement.

Prints r0/delta from the log-radius regression for M = 8 ... 256 next to the
analytic ratio exp(-pi/2) and the infinite-lattice value exp(-gamma)/(2 sqrt 2).
"""

import argparse
import math

import numpy as np

from wellblock import fd_grid
from wellblock.core import FluidRockParams, GridSpec

LATTICE_RATIO = math.exp(-np.euler_gamma) / (2 * math.sqrt(2))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-M", type=int, default=256)
    ap.add_argument("--r-max-fraction", type=float, default=0.25)
    args = ap.parse_args()

    fluid = FluidRockParams(1.0, 1.0, 1.0)
    print(f"analytic exp(-pi/2)     = {math.exp(-math.pi / 2):.6f}")
    print(f"lattice exp(-g)/(2 rt2) = {LATTICE_RATIO:.6f}")
    print(f"{'M':>5} {'r0/delta':>10} {'slope*2pi':>10} {'fit_rms':>10} {'p1-p0':>8}")
    M = 8
    while M <= args.max_M:
        field = fd_grid.solve_point_source(GridSpec(1.0, M), fluid, 1.0)
        est = fd_grid.estimate_r0_numeric(field, fluid, 1.0, r_max_fraction=args.r_max_fraction)
        bp = fd_grid.block_pressures(field)
        print(f"{M:5d} {est.r0_over_delta:10.6f} {est.slope * 2 * math.pi:10.6f} "
              f"{est.fit_rms:10.2e} {bp['p1'] - bp['p0']:8.5f}")
        M *= 2


if __name__ == "__main__":
    main()
