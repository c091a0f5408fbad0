"""Geodesic, triangle and tetrahedron residuals on random well-separated float points."""

import argparse
import random

import numpy as np

from superhyp import geometry as geo
from superhyp import minkowski as mk
from superhyp.grassmann import AlgebraContext
from superhyp.sampling import separated_float_points


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gens", type=int, default=8)
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--min-distance", type=float, default=1.0)
    args = ap.parse_args()
    ctx = AlgebraContext(args.gens, "float")
    rng = random.Random(0)
    norm = lcos = dih = 0.0
    for _ in range(args.samples):
        P, Q, R, S = separated_float_points(ctx, rng, 4, args.min_distance)
        L, D = geo.geodesic_through(P, Q)
        for s in np.linspace(-1, 2, 7):
            norm = max(norm, (mk.quadratic_form(geo.geodesic_point(L, s)) - 1).max_abs())
        lcos = max(lcos, geo.law_of_cosines_residual(P, Q, R).max_abs())
        G = geo.gram([P, Q, R, S])
        for (i, j), c in geo.all_dihedral_cos(G).items():
            dih = max(dih, (c - geo.dihedral_projection([P, Q, R, S], i, j)).max_abs())
    print(f"geodesic <X,X> - 1      {norm:.1e}")
    print(f"law of cosines          {lcos:.1e}")
    print(f"dihedral cofactor/proj  {dih:.1e}")


if __name__ == "__main__":
    main()
