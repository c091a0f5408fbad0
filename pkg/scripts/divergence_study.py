"""Face integral of the volume primitive near the t -> 0 edge of an ideal triangle.

Prints the body and the mu*rho coefficient for each eps, for the constant-u
integrand and for the full pullback, plus the fitted power laws.
"""

import argparse

from superhyp import geometry as geo
from superhyp import volume as vol
from superhyp.cli import FACE_NAMES, default_ideal_vertices
from superhyp.grassmann import AlgebraContext


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps", default="1e-1,1e-2,1e-3,1e-4")
    ap.add_argument("--smax", type=float, default=50.0)
    args = ap.parse_args()
    eps = [float(e) for e in args.eps.split(",")]
    ctx = AlgebraContext(4, "float", FACE_NAMES)
    V = geo.normalize_ideal_triple(*default_ideal_vertices(ctx))
    for integrand in vol.INTEGRANDS:
        rep = vol.divergence_fit(V, eps, [1, 2], args.smax, integrand)
        print(f"[{integrand}] exponent {rep.exponent:.4f}  r^2 {rep.r2:.6f}")
        for b, c in zip(rep.body, rep.per_monomial.get(rep.channel, [])):
            print(f"  eps={b['eps']:<8g} body={b['value']}  {rep.channel}={c['value']}")


if __name__ == "__main__":
    main()
