"""Boundary integral of the primitive against the volume integral on random coordinate cells."""

import argparse
import random

import numpy as np

from superhyp import volume as vol
from superhyp.grassmann import AlgebraContext
from superhyp.sampling import odd


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cells", type=int, default=5)
    ap.add_argument("--seed", default="stokes")
    args = ap.parse_args()
    ex = AlgebraContext(4)
    fc = ex.float_context()
    rng = random.Random(args.seed)
    for k in range(args.cells):
        phi, psi = ex.to_float(odd(ex, rng, [1, 2])), ex.to_float(odd(ex, rng, [3, 4]))
        lo = np.array([rng.uniform(0.5, 3.0), rng.uniform(-1, 1), rng.uniform(-1, 1)])
        hi = lo + rng.uniform(0.05, 0.3)
        family = lambda p: vol.chart_point(fc, p[0], p[1], p[2], phi, psi)  # noqa: E731
        rep = vol.stokes_check(family, lo, hi)
        print(f"cell {k}: relative error {rep.relative_error:.2e}")


if __name__ == "__main__":
    main()
