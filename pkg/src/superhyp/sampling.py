"""Seeded random super numbers with small rational coefficients."""

from __future__ import annotations

import math
import random

from gmpy2 import mpq

from .grassmann import AlgebraContext, GaussianRational, GrassmannNumber

BOUND = 8


def as_rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


def rational(rng: random.Random, bound: int = BOUND, nonzero: bool = False):
    while True:
        q = mpq(rng.randint(-bound, bound), rng.randint(1, bound))
        if q or not nonzero:
            return q


def coefficient(ctx: AlgebraContext, rng: random.Random, real: bool = False, nonzero: bool = False):
    """A random coefficient valid in ``ctx`` (Gaussian rational or complex)."""
    while True:
        re = rational(rng)
        im = 0 if real else rational(rng)
        c = GaussianRational(re, im) if ctx.exact else complex(float(re), float(im))
        if c or not nonzero:
            return c


def check_gens(ctx: AlgebraContext, gens):
    gens = list(gens)
    bad = [i for i in gens if not 1 <= i <= ctx.generator_count]
    if bad:
        raise ValueError(f"generators {bad} exceed the budget of {ctx.generator_count}")
    return gens


def odd(ctx: AlgebraContext, rng: random.Random, gens, real: bool = False) -> GrassmannNumber:
    """Random linear combination of the given generators."""
    total = ctx.zero()
    for i in check_gens(ctx, gens):
        total = total + ctx.gen(i) * coefficient(ctx, rng, real=real)
    return total


def even_soul(ctx: AlgebraContext, rng: random.Random, gens, terms: int = 2, real: bool = False) -> GrassmannNumber:
    """Random sum of a few degree-two monomials over ``gens``."""
    gens = check_gens(ctx, gens)
    total = ctx.zero()
    if len(gens) < 2:
        return total
    for _ in range(terms):
        i, j = rng.sample(gens, 2)
        total = total + ctx.gen(i) * ctx.gen(j) * coefficient(ctx, rng, real=real)
    return total


def constrained_point(ctx: AlgebraContext, rng: random.Random, level, gens_phi, gens_psi,
                      x2=None, x=None, real_x=False):
    """Point with Q = level, solving for x1 (x2 keeps a positive rational body)."""
    from .minkowski import SuperPoint

    cj = GrassmannNumber.conjugate
    x2 = ctx.scalar(x2 if x2 is not None else mpq(rng.randint(1, BOUND), rng.randint(1, BOUND)))
    x = ctx.scalar(x if x is not None else coefficient(ctx, rng, real=real_x))
    phi = odd(ctx, rng, gens_phi)
    psi = odd(ctx, rng, gens_psi)
    x1 = (level + x * cj(x) - phi * psi - cj(phi) * cj(psi)) / x2
    return SuperPoint(x1, x2, x, phi, psi)


def ih_point(ctx, rng, gens_phi=(), gens_psi=(), **kw):
    """Random point of the two-sheeted super hyperboloid (Q = 1, future sheet)."""
    return constrained_point(ctx, rng, 1, gens_phi, gens_psi, **kw)


def light_point(ctx, rng, gens_phi=(), gens_psi=(), **kw):
    """Random point of the positive super light cone (Q = 0)."""
    return constrained_point(ctx, rng, 0, gens_phi, gens_psi, **kw)


def float_odd(ctx: AlgebraContext, rng: random.Random, gens, scale: float = 1.0) -> GrassmannNumber:
    total = ctx.zero()
    for i in check_gens(ctx, gens):
        total = total + ctx.gen(i) * complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))
    return total


def float_ih_point(ctx: AlgebraContext, rng: random.Random, gens_phi, gens_psi, spread: float = 1.0,
                   soul: float = 1.0):
    """Float-mode hyperboloid point with O(1) coordinates.

    log x2 and the real and imaginary parts of x are uniform in [-spread, spread];
    fermion coefficients are uniform in [-soul, soul] (real and imaginary parts).
    """
    from .minkowski import SuperPoint

    if ctx.exact:
        raise ValueError("float_ih_point needs a float context")
    x2 = ctx.scalar(math.exp(rng.uniform(-spread, spread)))
    x = ctx.scalar(complex(rng.uniform(-spread, spread), rng.uniform(-spread, spread)))
    phi = float_odd(ctx, rng, gens_phi, soul)
    psi = float_odd(ctx, rng, gens_psi, soul)
    x1 = (1 + x * x.conjugate() - phi * psi - phi.conjugate() * psi.conjugate()) / x2
    return SuperPoint(x1, x2, x, phi, psi)


def separated_float_points(ctx: AlgebraContext, rng: random.Random, count: int, min_distance: float = 1.0,
                           gens_per_fermion: int = 2, tries: int = 1000):
    """``count`` float hyperboloid points whose pairwise body distances are at least ``min_distance``.

    Near-coincident points give lengths and asymptotes with soul coefficients of
    order 1/sinh(d)^k, so this keeps random configurations well conditioned.
    """
    from .minkowski import inner

    n = ctx.generator_count
    floor = math.cosh(min_distance)
    for _ in range(tries):
        pts = []
        for _ in range(count):
            g = rng.sample(range(1, n + 1), 2 * gens_per_fermion)
            pts.append(float_ih_point(ctx, rng, g[:gens_per_fermion], g[gens_per_fermion:]))
        if all(complex(inner(pts[i], pts[j]).body).real >= floor
               for i in range(count) for j in range(i + 1, count)):
            return pts
    raise RuntimeError(f"no {count} points separated by {min_distance} after {tries} tries")
