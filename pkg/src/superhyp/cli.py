"""Batch front end: verification suites, geometry reports and the divergence diagnostic.

Every verb writes one JSON document (to --out or stdout).  Exit codes:
0 success, 2 verification counterexample, 3 input error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from dataclasses import dataclass, field

from . import geometry as geo
from . import minkowski as mk
from . import volume as vol
from .grassmann import EXACT, FLOAT, AlgebraContext, GrassmannError, to_json
from .sampling import ih_point
from .suite import SuiteConfig, run_suite

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3, 4

VERIFY_VERBS = ("verify-invariance", "verify-appendix")
GEOMETRY_VERBS = {"geodesic": 2, "triangle": 3, "tetrahedron": 4}
VOLUME_VERB = "volume-divergence"
VERBS = VERIFY_VERBS + tuple(GEOMETRY_VERBS) + (VOLUME_VERB,)

DEFAULT_EPS = (1e-1, 1e-2, 1e-3, 1e-4)
FACE_NAMES = ("mu", "rho", "sigma", "tau")


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    verb: str
    mode: str
    generators: int = 8
    seed: int = 0
    trials: int = 200
    theta: str = "invariant"
    strict: bool = False
    out: str | None = None
    points: str | None = None
    eps: tuple = DEFAULT_EPS
    smax: float = 50.0
    integrand: str = "reduced"
    bosonic: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in (EXACT, FLOAT):
            raise InputError(f"unknown mode {self.mode!r}")
        if self.mode == EXACT and self.verb not in VERIFY_VERBS:
            raise InputError(f"{self.verb} needs analytic lifts with irrational bodies; use --mode float")
        if self.mode == FLOAT and self.verb in VERIFY_VERBS:
            raise InputError(f"{self.verb} is an exact verification; use --mode exact")
        if self.generators < 1:
            raise InputError("--gens must be positive")
        if self.trials < 0:
            raise InputError("--trials must be non-negative")


def _default_mode(verb: str) -> str:
    env = os.environ.get("SUPERHYP_MODE")
    if env:
        return env
    return EXACT if verb in VERIFY_VERBS else FLOAT


def _cplx(z) -> float | list:
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _number(z) -> dict:
    """Float-mode Grassmann number as body plus full term list."""
    return {"body": _cplx(z.body), "terms": to_json(z)}


# ---------------------------------------------------------------------------
# Points


def load_points(path: str, mode: str = FLOAT):
    """Read {"generators": n, "names": [...]?, "points": [{x1, x2, x, phi, psi}, ...]}."""
    try:
        with open(path) as fh:
            data = json.load(fh)
        names = tuple(data["names"]) if data.get("names") else None
        ctx = AlgebraContext(int(data["generators"]), mode, names)
        return ctx, [mk.point_from_json(ctx, p) for p in data["points"]]
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError, IndexError, GrassmannError) as exc:
        raise InputError(f"cannot read points from {path}: {exc}") from exc


def random_points(ctx: AlgebraContext, seed: int, count: int):
    """Seeded hyperboloid points, each with two-generator fermionic souls."""
    rng = random.Random(seed)
    n = ctx.generator_count
    pts = []
    for _ in range(count):
        gens = sorted(rng.sample(range(1, n + 1), min(2, n)))
        pts.append(ih_point(ctx, rng, gens, gens))
    return pts


def _require_ih(points):
    for i, P in enumerate(points):
        if mk.classify(P) != "IH":
            raise InputError(f"point {i} is not on the super hyperboloid (Q = 1, x2 > 0)")


# ---------------------------------------------------------------------------
# Verbs


def verb_verify(config: RunConfig):
    report = run_suite(config.verb, SuiteConfig(config.generators, config.seed, config.trials,
                                                config.theta, config.strict))
    return report.to_json(), EXIT_OK if report.ok else EXIT_COUNTEREXAMPLE


def _gap(A, B) -> float:
    return max(z.max_abs() for z in (A - B).coords())


def _pairs(points):
    out = []
    for i, j in itertools.combinations(range(len(points)), 2):
        out.append({"i": i, "j": j, "distance": _number(geo.distance(points[i], points[j]))})
    return out


def verb_geometry(config: RunConfig, ctx, points):
    need = GEOMETRY_VERBS[config.verb]
    if len(points) != need:
        raise InputError(f"{config.verb} needs exactly {need} points, got {len(points)}")
    _require_ih(points)
    report = {"verb": config.verb, "mode": config.mode, "generators": ctx.generator_count,
              "points": [mk.point_to_json(P) for P in points], "distances": _pairs(points)}
    if config.verb == "geodesic":
        P, Q = points
        L, D = geo.geodesic_through(P, Q)
        samples = [D * (k / 4) for k in range(5)]
        report["geodesic"] = {
            "length": _number(D),
            "norm_residuals": [_cplx((mk.quadratic_form(geo.geodesic_point(L, s)) - 1).max_abs()) for s in samples],
            "endpoint_residuals": [_gap(geo.geodesic_point(L, ctx.zero()), P), _gap(geo.geodesic_point(L, D), Q)],
            "asymptote_product": _number(mk.inner(L.E, L.F)),
        }
    elif config.verb == "triangle":
        angles, residuals = [], []
        for k in range(3):
            P, Q, R = points[k], points[(k + 1) % 3], points[(k + 2) % 3]
            a = geo.angle(P, Q, R)
            angles.append({"vertex": k, "angle": _number(a), "cos": _number(geo.cos_angle(P, Q, R))})
            residuals.append(geo.law_of_cosines_residual(P, Q, R).max_abs())
        report["angles"] = angles
        report["law_of_cosines_residuals"] = residuals
    else:
        G = geo.gram(points)
        dihedral = []
        worst = 0.0
        for (i, j), c in geo.all_dihedral_cos(G).items():
            disp = geo.dihedral_display(G, i, j)
            proj = geo.dihedral_projection(points, i, j)
            r = max((c - disp).max_abs(), (c - proj).max_abs())
            worst = max(worst, r)
            dihedral.append({"i": i, "j": j, "cos": _number(c), "display_residual": (c - disp).max_abs(),
                             "projection_residual": (c - proj).max_abs()})
        report["gram"] = [[_number(z) for z in row] for row in G.d]
        report["dihedral"] = dihedral
        report["max_dual_path_residual"] = worst
    return report, EXIT_OK


def default_ideal_vertices(ctx: AlgebraContext, bosonic: bool = False):
    """Three light-cone rays with a common real part; fermions (mu, rho/sigma/tau) mixed by A."""
    mu, rho, sig, tau = ctx.gens()[:4]
    A = (1.0, 0.5, 0.0, 1.0)

    def fer(a, b):
        if bosonic:
            return ctx.zero(), ctx.zero()
        return A[0] * a + A[1] * b, A[2] * a + A[3] * b

    u = 0.7
    P = vol.chart_point(ctx, 1.0, u, 0.2, *fer(mu, rho), level=0)
    Q = vol.chart_point(ctx, 2.0, u, -1.1, *fer(mu, sig), level=0)
    R = vol.chart_point(ctx, 0.5, u, 1.5, *fer(mu, tau), level=0)
    return P, Q, R


def verb_volume(config: RunConfig, ctx, points):
    if len(config.eps) < 4:
        raise vol.FitFailure("need at least four eps values spanning two decades")
    if points is None:
        ctx = AlgebraContext(4, FLOAT, FACE_NAMES)
        points = default_ideal_vertices(ctx, config.bosonic)
    elif config.bosonic:
        points = [P.body() for P in points]
    if len(points) != 3:
        raise InputError("volume-divergence needs three light-cone vertices")
    for i, P in enumerate(points):
        if mk.classify(P) != "L+":
            raise InputError(f"vertex {i} is not on the future light cone")
    V = geo.normalize_ideal_triple(*points)
    channel = [1, 2] if ctx.generator_count >= 2 else []
    rep = vol.divergence_fit(V, list(config.eps), channel, config.smax, config.integrand)
    out = {"verb": config.verb, "mode": config.mode, "integrand": config.integrand,
           "smax": config.smax, "bosonic": config.bosonic}
    out.update(rep.to_json())
    return out, EXIT_OK


# ---------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superhyp", description=__doc__.splitlines()[0])
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--mode", choices=(EXACT, FLOAT), default=None,
                   help="coefficient arithmetic (default: $SUPERHYP_MODE, else exact for verify-*, float otherwise)")
    p.add_argument("--gens", type=int, default=8, help="number of Grassmann generators")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--theta", choices=mk.THETA_RULES, default="invariant",
                   help="rule for the auxiliary corner parameter")
    p.add_argument("--strict", action="store_true", help="let the known-false closed forms gate the exit status")
    p.add_argument("--points", help="JSON points file (geometry and volume verbs)")
    p.add_argument("--eps", default=",".join(str(e) for e in DEFAULT_EPS),
                   help="comma separated t-cutoffs")
    p.add_argument("--smax", type=float, default=50.0)
    p.add_argument("--integrand", choices=vol.INTEGRANDS, default="reduced")
    p.add_argument("--bosonic", action="store_true", help="drop all fermionic data from the vertices")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    return p


def _parse_eps(text: str) -> tuple:
    try:
        eps = tuple(float(e) for e in text.split(",") if e.strip())
    except ValueError as exc:
        raise InputError(f"bad --eps list: {text!r}") from exc
    if not eps or any(e <= 0 for e in eps):
        raise InputError("--eps values must be positive")
    return eps


def _emit(report: dict, out: str | None):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(args.verb, args.mode or _default_mode(args.verb), args.gens, args.seed,
                           args.trials, args.theta, args.strict, args.out, args.points,
                           _parse_eps(args.eps), args.smax, args.integrand, args.bosonic)
        if config.verb in VERIFY_VERBS:
            report, code = verb_verify(config)
        else:
            if config.points:
                ctx, points = load_points(config.points, config.mode)
            elif config.verb == VOLUME_VERB:
                ctx, points = None, None
            else:
                ctx = AlgebraContext(config.generators, config.mode)
                points = random_points(ctx, config.seed, GEOMETRY_VERBS[config.verb])
            if config.verb == VOLUME_VERB:
                report, code = verb_volume(config, ctx, points)
            else:
                report, code = verb_geometry(config, ctx, points)
    except (InputError, geo.DegenerateConfiguration, vol.FitFailure) as exc:
        _emit({"verb": args.verb, "error": type(exc).__name__, "message": str(exc)}, args.out)
        return EXIT_INPUT
    except (geo.SolverFailure, ArithmeticError, GrassmannError, vol.ConstraintViolation) as exc:
        _emit({"verb": args.verb, "error": type(exc).__name__, "message": str(exc)}, args.out)
        return EXIT_NUMERIC
    _emit(report, args.out)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
