"""Super Minkowski space R^{3,1|4} and the extended Wigner action of OSp(1|2).

A point ``(x1, x2, x | phi, psi)`` is written as the point matrix::

    ( x1        conj(x)    phi   )
    ( x         x2         psi   )
    ( -conj(phi) -conj(psi) theta )

and acted on by ``A -> dagger(g) A g`` followed by projection.  The corner
``theta`` is an auxiliary parameter computed from ``(g, P)``; it is what makes
the quadratic form ``x1 x2 - x conj(x) + phi psi + conj(phi) conj(psi)``
invariant.

Three theta rules are available:

``invariant`` (default)
    ``-1/2 [X + (Y - Ybar) + (Z - Zbar)/2]``, equivalently
    ``-(sqrt(f fbar)/2) [X + (Y - Ybar)]``.  This is the root of the
    invariance quadratic that lies in the span of X, Y - Ybar, Z - Zbar.
``ffbar``
    ``-1/2 [X + (Y - Ybar) + (Z - Zbar)]``, equivalently
    ``-(f fbar / 2) [X + (Y - Ybar)]``.  Leaves the residual
    ``1/2 ab abbar (phi psi + phibar psibar)`` in Q whenever both the group
    element and the point carry fermions.
``x-only``
    ``-X/2``; correct only for purely bosonic points.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grassmann import (
    AlgebraContext,
    GaussianRational,
    GrassmannNumber,
    ParityError,
    compare,
    from_json,
    sqrt,
    to_json,
)
from .supermatrix import SuperMatrix, dagger, sm_mul, super_transpose

THETA_RULES = ("invariant", "ffbar", "x-only")
FLOAT_TOL = 1e-10


class InternalInconsistency(AssertionError):
    pass


def _cj(z):
    return z.conjugate()


@dataclass(frozen=True)
class SuperPoint:
    """A point of R^{3,1|4}: x1, x2 real even, x even, phi and psi odd."""

    x1: GrassmannNumber
    x2: GrassmannNumber
    x: GrassmannNumber
    phi: GrassmannNumber
    psi: GrassmannNumber

    def __post_init__(self):
        for name in ("x1", "x2", "x"):
            if not getattr(self, name).is_even():
                raise ParityError(f"{name} must be even")
        for name in ("phi", "psi"):
            if not getattr(self, name).is_odd():
                raise ParityError(f"{name} must be odd")
        if self.ctx.exact:
            ok = self.x1.is_real() and self.x2.is_real()
        else:
            ok = all(z.is_real(FLOAT_TOL * max(1.0, z.max_abs())) for z in (self.x1, self.x2))
        if not ok:
            raise ValueError("x1 and x2 must be fixed by conjugation")

    @property
    def ctx(self) -> AlgebraContext:
        return self.x1.ctx

    def coords(self):
        return (self.x1, self.x2, self.x, self.phi, self.psi)

    @classmethod
    def make(cls, ctx: AlgebraContext, x1, x2, x, phi=None, psi=None):
        z = ctx.zero()
        return cls(ctx.scalar(x1), ctx.scalar(x2), ctx.scalar(x),
                   z if phi is None else phi, z if psi is None else psi)

    def __add__(self, other: SuperPoint) -> SuperPoint:
        return type(self)(*(p + q for p, q in zip(self.coords(), other.coords())))

    def __sub__(self, other: SuperPoint) -> SuperPoint:
        return type(self)(*(p - q for p, q in zip(self.coords(), other.coords())))

    def __neg__(self):
        return type(self)(*(-p for p in self.coords()))

    def scale(self, k) -> SuperPoint:
        """Multiply by an even real scalar (commutes with every coordinate)."""
        k = self.ctx.scalar(k)
        if not k.is_even():
            raise ParityError("points scale by even numbers only")
        return SuperPoint(*(k * p for p in self.coords()))

    def __rmul__(self, k):
        return self.scale(k)

    def __truediv__(self, k):
        k = self.ctx.scalar(k)
        return self.scale(k.invert())

    def with_fermions(self, phi, psi) -> SuperPoint:
        return SuperPoint(self.x1, self.x2, self.x, phi, psi)

    def i_fermions(self) -> SuperPoint:
        """Multiply both fermionic coordinates by i; bosons untouched."""
        i = GaussianRational(0, 1) if self.ctx.exact else 1j
        return SuperPoint(self.x1, self.x2, self.x, self.phi * i, self.psi * i)

    def body(self) -> SuperPoint:
        ctx = self.ctx
        return SuperPoint.make(ctx, self.x1.body, self.x2.body, self.x.body)

    def close_to(self, other: SuperPoint, tol: float = FLOAT_TOL) -> bool:
        return all(p.close_to(q, tol) for p, q in zip(self.coords(), other.coords()))

    def __eq__(self, other):
        if not isinstance(other, SuperPoint):
            return NotImplemented
        return self.coords() == other.coords()

    def __hash__(self):
        return hash(self.coords())


class RealSuperPoint(SuperPoint):
    """Point of R^{2,1|2}: x real and Majorana (conjugation-fixed) fermions."""

    def __post_init__(self):
        super().__post_init__()
        tol = 0.0 if self.ctx.exact else FLOAT_TOL
        if not all(c.is_real(tol) for c in (self.x, self.phi, self.psi)):
            raise ValueError("real points need real x and Majorana fermions")


# ---------------------------------------------------------------------------
# Forms


def quadratic_form(P: SuperPoint) -> GrassmannNumber:
    x1, x2, x, phi, psi = P.coords()
    return x1 * x2 - x * _cj(x) + phi * psi + _cj(phi) * _cj(psi)


def inner(P: SuperPoint, R: SuperPoint) -> GrassmannNumber:
    """Bilinear form polarizing the quadratic form."""
    x1, x2, x, phi, psi = P.coords()
    y1, y2, y, xi, eta = R.coords()
    twice = (x1 * y2 + x2 * y1 - (x * _cj(y) + _cj(x) * y)
             + phi * eta + xi * psi + _cj(phi) * _cj(eta) + _cj(xi) * _cj(psi))
    return twice / 2


def real_quadratic_form(P: SuperPoint) -> GrassmannNumber:
    """x1 x2 - x^2 + 2 phi psi, the invariant of the real action."""
    x1, x2, x, phi, psi = P.coords()
    return x1 * x2 - x * x + 2 * phi * psi


def kappa(P: SuperPoint, R: SuperPoint) -> GrassmannNumber:
    """Skew pairing on the fermionic coordinates, purely imaginary."""
    phi1, psi1 = P.phi, P.psi
    phi2, psi2 = R.phi, R.psi
    return (_cj(psi2) * phi1 - psi2 * _cj(phi1)) + (phi2 * _cj(psi1) - _cj(phi2) * psi1)


def classify(P: SuperPoint, tol: float = FLOAT_TOL) -> str | None:
    """'IH' (Q = 1, x1+x2 > 0), 'H' (Q = -1), 'L+' (Q = 0, x1+x2 > 0) or None."""
    q = quadratic_form(P)

    def equals(v):
        d = q - v
        return d.is_zero() if P.ctx.exact else d.max_abs() <= tol

    future = compare(P.x1 + P.x2, 0) > 0
    if equals(1) and future:
        return "IH"
    if equals(-1):
        return "H"
    if equals(0) and future:
        return "L+"
    return None


# ---------------------------------------------------------------------------
# Auxiliary parameter


@dataclass(frozen=True)
class Theta:
    value: GrassmannNumber
    X: GrassmannNumber
    Y: GrassmannNumber
    Z: GrassmannNumber
    factored: GrassmannNumber
    expanded: GrassmannNumber
    rule: str


def theta_parts(g: SuperMatrix, P: SuperPoint):
    """X, Y, Z built from the odd column (alpha, beta) of g and the point."""
    al, be = g.alpha, g.beta
    x1, x2, x, phi, psi = P.coords()
    X = x1 * _cj(al) * al + x2 * _cj(be) * be + x * _cj(be) * al + _cj(x) * _cj(al) * be
    Y = _cj(al) * phi + _cj(be) * psi
    Z = al * be * Y
    return X, Y, Z


def theta(g: SuperMatrix, P: SuperPoint, rule: str = "invariant") -> Theta:
    """Compute the auxiliary parameter by two independent formulas and compare them."""
    if rule not in THETA_RULES:
        raise ValueError(f"unknown theta rule {rule!r}")
    X, Y, Z = theta_parts(g, P)
    W = Y - _cj(Y)
    V = Z - _cj(Z)
    ffbar = g.f * _cj(g.f)
    if rule == "invariant":
        factored = -(sqrt(ffbar) / 2) * (X + W)
        expanded = -(X + W + V / 2) / 2
    elif rule == "ffbar":
        factored = -(ffbar / 2) * (X + W)
        expanded = -(X + W + V) / 2
    else:
        factored = expanded = -X / 2
    ok = (factored - expanded).is_zero() if P.ctx.exact else (factored - expanded).max_abs() <= FLOAT_TOL
    if not ok:
        raise InternalInconsistency(f"theta formulas disagree under rule {rule!r}")
    return Theta(expanded, X, Y, Z, factored, expanded, rule)


# ---------------------------------------------------------------------------
# The action


def to_point_matrix(P: SuperPoint, th: GrassmannNumber | None = None) -> SuperMatrix:
    th = P.ctx.zero() if th is None else th
    return SuperMatrix(P.x1, _cj(P.x), P.phi, P.x, P.x2, P.psi, -_cj(P.phi), -_cj(P.psi), th)


def from_point_matrix(A: SuperMatrix, check: bool = True, tol: float = FLOAT_TOL):
    """Project a point matrix back to ``(SuperPoint, corner)``."""
    if check:
        residuals = [A.b - _cj(A.c), A.gamma + _cj(A.alpha), A.delta + _cj(A.beta)]
        bad = [r for r in residuals if not (r.is_zero() if A.ctx.exact else r.max_abs() <= tol)]
        if bad:
            raise ValueError("matrix is not in point layout")
    x1, x2 = A.a, A.d
    if not A.ctx.exact:
        x1, x2 = x1.real_part(), x2.real_part()
    return SuperPoint(x1, x2, A.c, A.alpha, A.beta), A.f


@dataclass(frozen=True)
class Action:
    point: SuperPoint
    theta: GrassmannNumber
    theta_prime: GrassmannNumber


def act(g: SuperMatrix, P: SuperPoint, rule: str = "invariant") -> Action:
    """g.P via dagger(g) A g with the auxiliary corner, then projection."""
    th = theta(g, P, rule).value
    A = to_point_matrix(P, th)
    image = sm_mul(dagger(g), sm_mul(A, g))
    point, corner = from_point_matrix(image)
    return Action(point, th, corner)


def act_real(g: SuperMatrix, P: SuperPoint) -> SuperMatrix:
    """g^st A g with corner 0, the action of the real form on R^{2,1|2}."""
    A = SuperMatrix(P.x1, P.x, P.phi, P.x, P.x2, P.psi, -P.phi, -P.psi, P.ctx.zero())
    return sm_mul(super_transpose(g), sm_mul(A, g))


def explicit_parts(g: SuperMatrix, P: SuperPoint, th: GrassmannNumber) -> dict:
    """Entry-by-entry pieces of dagger(g) A g (A, A1, A2, B..., U..., V..., W...)."""
    a, b, al, c, d, be, ga, de, f = g.entries()
    x1, x2, x, phi, psi = P.coords()
    xb = _cj(x)
    ab_, bb_, cb_, db_ = _cj(a), _cj(b), _cj(c), _cj(d)
    gab, deb, phib, psib = _cj(ga), _cj(de), _cj(phi), _cj(psi)
    p = {}
    p["A"] = a * ab_ * x1 + c * cb_ * x2 + (a * cb_ * x + ab_ * c * xb)
    p["A1"] = (a * gab * phib + ab_ * ga * phi) + (c * gab * psib + cb_ * ga * psi)
    p["A2"] = -th * gab * ga
    p["B"] = b * bb_ * x1 + d * db_ * x2 + (b * db_ * x + bb_ * d * xb)
    p["B1"] = (b * deb * phib + bb_ * de * phi) + (d * deb * psib + db_ * de * psi)
    p["B2"] = -th * deb * de
    p["C"] = a * bb_ * x1 + c * db_ * x2 + a * db_ * x + bb_ * c * xb
    p["C1"] = deb * (a * phib + c * psib) + ga * (bb_ * phi + db_ * psi)
    p["C2"] = -th * deb * ga
    p["U1"] = ab_ * x1 + cb_ * x + gab * phib
    p["U2"] = cb_ * x2 + ab_ * xb + gab * psib
    p["U"] = ab_ * phi + cb_ * psi + th * gab
    p["V1"] = bb_ * x1 + db_ * x + deb * phib
    p["V2"] = db_ * x2 + bb_ * xb + deb * psib
    p["V"] = bb_ * phi + db_ * psi + th * deb
    p["W1"] = x1 * _cj(al) + x * _cj(be) + _cj(f) * phib
    p["W2"] = x2 * _cj(be) + xb * _cj(al) + _cj(f) * psib
    p["W"] = _cj(al) * phi + _cj(be) * psi + th * _cj(f)
    return p


def act_explicit(g: SuperMatrix, P: SuperPoint, rule: str = "invariant", th=None) -> Action:
    """Same action assembled from the closed-form entry expressions."""
    if th is None:
        th = theta(g, P, rule).value
    p = explicit_parts(g, P, th)
    al, be, f = g.alpha, g.beta, g.f
    point = SuperPoint(
        p["A"] + p["A1"] + p["A2"],
        p["B"] + p["B1"] + p["B2"],
        p["C"] + p["C1"] + p["C2"],
        p["U1"] * al + p["U2"] * be + f * p["U"],
        p["V1"] * al + p["V2"] * be + f * p["V"],
    )
    return Action(point, th, p["W1"] * al + p["W2"] * be + f * p["W"])


# ---------------------------------------------------------------------------
# Verification identities.  Each returns {name: lhs - rhs}.


def bosonic_expansion(g, P, th) -> dict[str, GrassmannNumber]:
    """Bosonic quadratic pieces of x1' x2' - x' conj(x')."""
    p = explicit_parts(g, P, th)
    A, A1, A2, B, B1, B2 = p["A"], p["A1"], p["A2"], p["B"], p["B1"], p["B2"]
    C, C1, C2 = p["C"], p["C1"], p["C2"]
    al, be, de, ga = g.alpha, g.beta, g.delta, g.gamma
    x1, x2, x, phi, psi = P.coords()
    xb, alb, beb, phib, psib = _cj(x), _cj(al), _cj(be), _cj(phi), _cj(psi)
    ab, abb = al * be, alb * beb
    det = x1 * x2 - x * xb
    out = {}
    out["AB - CCbar"] = (A * B - C * _cj(C)) - det * (1 - ab) * (1 - abb)
    out["AB1 + BA1 - CC1bar - CbarC1"] = (A * B1 + B * A1 - C * _cj(C1) - _cj(C) * C1) - (
        x1 * (al * (abb - 1) * psi + alb * (ab - 1) * psib)
        + x2 * (be * (1 - abb) * phi + beb * (1 - ab) * phib)
        + x * (al * (1 - abb) * phi + beb * (ab - 1) * psib)
        + xb * (alb * (1 - ab) * phib + be * (abb - 1) * psi))
    out["A1B1 - C1C1bar"] = (A1 * B1 - C1 * _cj(C1)) - (
        2 * (1 - ab) * alb * phib * beb * psib + 2 * (1 - abb) * al * phi * be * psi
        - (al * alb * phib * phi + be * beb * psib * psi + be * alb * psib * phi + al * beb * phib * psi))
    out["A2B2 - C2C2bar"] = (A2 * B2 - C2 * _cj(C2)) - al * alb * be * beb * th * (th - _cj(th))
    out["cross terms"] = (A2 * (B + B1) + B2 * (A + A1) - C2 * (_cj(C) + _cj(C1)) - _cj(C2) * (C + C1)) - (
        -th * (alb * al * x1 + beb * be * x2 + beb * al * x + alb * be * xb)
        - 2 * th * (ab * (alb * phi + beb * psi) - abb * (al * phib + be * psib))
        + de * _cj(ga) * (C + C1) * (th + _cj(th)))
    return out


def fermionic_expansion(g, P, th) -> dict[str, GrassmannNumber]:
    """Fermionic pieces of phi' psi'."""
    p = explicit_parts(g, P, th)
    U, U1, U2, V, V1, V2 = p["U"], p["U1"], p["U2"], p["V"], p["V1"], p["V2"]
    al, be, ga, de, f = g.alpha, g.beta, g.gamma, g.delta, g.f
    x1, x2, x, phi, psi = P.coords()
    xb, alb, beb, phib, psib = _cj(x), _cj(al), _cj(be), _cj(phi), _cj(psi)
    abb = alb * beb
    out = {}
    out["UV1 - VU1"] = (U * V1 - V * U1) - (
        (x * phi - x1 * psi) * (1 - abb) + phib * (alb * phi + beb * psi)
        + th * (x1 * alb + x * beb + 2 * abb * phib))
    out["UV2 - VU2"] = (U * V2 - V * U2) - (
        (x2 * phi - xb * psi) * (1 - abb) + psib * (alb * phi + beb * psi)
        + th * (x2 * beb + xb * alb + 2 * abb * psib))
    out["U1V2 - U2V1"] = (U1 * V2 - U2 * V1) - (
        (x1 * x2 - x * xb) * (1 - abb) - 2 * _cj(ga) * _cj(de) * phib * psib
        + (x2 * beb + xb * alb) * phib - (x1 * alb + x * beb) * psib)
    out["UV"] = U * V - ((1 - abb) * phi * psi + th * (alb * phi + beb * psi) + th * th * abb)
    act_ = act_explicit(g, P, th=th)
    out["phi'psi'"] = act_.point.phi * act_.point.psi - (
        f * f * U * V + al * be * (U1 * V2 - U2 * V1) + ((U * V1 - V * U1) * al + (U * V2 - V * U2) * be))
    return out


def _grouped_terms(g, P, th) -> dict[str, GrassmannNumber]:
    al, be = g.alpha, g.beta
    x1, x2, x, phi, psi = P.coords()
    xb, alb, beb, phib, psib = _cj(x), _cj(al), _cj(be), _cj(phi), _cj(psi)
    ab, abb = al * be, alb * beb
    det = x1 * x2 - x * xb
    t = {}
    t["mixed"] = (((1 - abb) * (x * phi - x1 * psi)) * al + ((1 - ab) * (xb * phib - x1 * psib)) * alb
                + ((1 - abb) * (x2 * phi - xb * psi)) * be + ((1 - ab) * (x2 * phib - x * psib)) * beb)
    t["fermion pairs"] = ((phib * (alb * phi + beb * psi)) * al + (phi * (al * phib + be * psib)) * alb
                   + (psib * (alb * phi + beb * psi)) * be + (psi * (al * phib + be * psib)) * beb)
    t["ab weighted"] = (((x2 * beb + xb * alb) * phib - (x1 * alb + x * beb) * psib) * ab
                  + ((x2 * be + x * al) * phi - (x1 * al + xb * be) * psi) * abb)
    blue = ((det * (1 - abb) - 2 * abb * phib * psib) * ab + (det * (1 - ab) - 2 * ab * phi * psi) * abb
            + (1 + 2 * ab) * ((1 - abb) * phi * psi) + (1 + 2 * abb) * ((1 - ab) * phib * psib))
    t["quadratic"] = blue
    t["theta terms"] = ((th * (x1 * alb + x * beb + 2 * abb * phib)) * al - (th * (x1 * al + xb * be + 2 * ab * phi)) * alb
                  + (th * (x2 * beb + xb * alb + 2 * abb * psib)) * be - (th * (x2 * be + x * al + 2 * ab * psi)) * beb
                  + (1 + 2 * ab) * (th * (alb * phi + beb * psi) + th * th * abb)
                  + (1 + 2 * abb) * (-th * (al * phib + be * psib) + th * th * ab))
    return t


def grouped_expansion(g, P, th) -> dict[str, GrassmannNumber]:
    """Grouped sums in phi'psi' + conj: mixed, fermion pairs, ab weighted, theta terms."""
    t = _grouped_terms(g, P, th)
    p = explicit_parts(g, P, th)
    X, Y, Z = theta_parts(g, P)
    al, be = g.alpha, g.beta
    ab, abb = al * be, _cj(al) * _cj(be)
    out = {}
    out["mixed"] = t["mixed"] + (p["A"] * p["B1"] + p["B"] * p["A1"] - p["C"] * _cj(p["C1"]) - _cj(p["C"]) * p["C1"])
    out["fermion pairs"] = t["fermion pairs"] + 2 * Y * _cj(Y)
    out["ab weighted"] = t["ab weighted"] - X * (Y - _cj(Y))
    out["theta terms"] = t["theta terms"] - (th * th * ((1 + 2 * ab) * abb + (1 + 2 * abb) * ab)
                                 + th * (2 * X + (Y - _cj(Y)) + 4 * (Z - _cj(Z))))
    image = act_explicit(g, P, th=th).point
    fermi = image.phi * image.psi + _cj(image.phi) * _cj(image.psi)
    out["total = phi'psi' + conj"] = (t["mixed"] + t["fermion pairs"] + t["ab weighted"] + t["theta terms"] + t["quadratic"]) - fermi
    return out


def delta_quadratic(g, P, th) -> GrassmannNumber:
    """The invariance defect written as a quadratic polynomial in theta."""
    X, Y, Z = theta_parts(g, P)
    al, be = g.alpha, g.beta
    phi, psi = P.phi, P.psi
    ab, abb = al * be, _cj(al) * _cj(be)
    W = Y - _cj(Y)
    return (th * th * (ab + abb + 2 * ab * abb) + th * (X + W + 2 * (Z - _cj(Z)))
            + X * W + W * W / 2 + X * X / 2 - 2 * ab * abb * (phi * psi + _cj(phi) * _cj(psi)))


def delta_quadratic_expanded(g, P, th) -> GrassmannNumber:
    """First form of the same quadratic, before using X^2 and Y^2."""
    X, Y, Z = theta_parts(g, P)
    al, be = g.alpha, g.beta
    x1, x2, x, phi, psi = P.coords()
    ab, abb = al * be, _cj(al) * _cj(be)
    W = Y - _cj(Y)
    return (th * th * (ab + abb + 2 * ab * abb) + th * (X + W + 2 * (Z - _cj(Z)))
            + X * W - Y * _cj(Y) - ab * abb * (x1 * x2 - x * _cj(x))
            - (abb + 2 * ab * abb) * phi * psi - (ab + 2 * ab * abb) * _cj(phi) * _cj(psi))


def invariance_defect(g, P, th) -> GrassmannNumber:
    """Q(g.P) - Q(P) for the action with the given corner."""
    return quadratic_form(act_explicit(g, P, th=th).point) - quadratic_form(P)


def pure_imaginary_suite(g, P) -> dict[str, GrassmannNumber]:
    """Residuals of the structural facts about X, Y, Z (each should vanish)."""
    X, Y, Z = theta_parts(g, P)
    al, be = g.alpha, g.beta
    ab, abb = al * be, _cj(al) * _cj(be)
    W, V = Y - _cj(Y), Z - _cj(Z)
    return {
        "conj X = -X": _cj(X) + X,
        "conj(Y - Ybar) = -(Y - Ybar)": _cj(W) + W,
        "conj(Z - Zbar) = -(Z - Zbar)": _cj(V) + V,
        "ab X = 0": ab * X,
        "abbar X = 0": abb * X,
        "ab Ybar = 0": ab * _cj(Y),
        "abbar Y = 0": abb * Y,
        "X^2 = -2 ab abbar det": X * X + 2 * ab * abb * (P.x1 * P.x2 - P.x * _cj(P.x)),
        "Y^2 = 2 albar phi bebar psi": Y * Y - 2 * _cj(al) * P.phi * _cj(be) * P.psi,
    }


def corner_relations(g, P, rule: str = "invariant") -> dict[str, GrassmannNumber]:
    """theta' against -2 theta (the closed-form claim) and against -theta."""
    res = act(g, P, rule)
    return {"theta' = -2 theta": res.theta_prime + 2 * res.theta,
            "theta' = -theta": res.theta_prime + res.theta}


def _inv2(m):
    a, b, c, d = m
    det_inv = (a * d - b * c).invert()
    return (d * det_inv, -b * det_inv, -c * det_inv, a * det_inv)


def _mat2_mul(m, n):
    a, b, c, d = m
    e, f, g_, h = n
    return (a * e + b * g_, a * f + b * h, c * e + d * g_, c * f + d * h)


def corollary_identities(g, P, rule: str = "ffbar") -> dict[str, GrassmannNumber]:
    """The three closed-form consequences of the action formulas.

    The identities were derived by substituting the ffbar theta, so that is
    the default rule; ``rule='invariant'`` evaluates the same right-hand sides
    against the invariant action.
    """
    res = act(g, P, rule)
    th = res.theta
    img = res.point
    a, b, c, d = g.a, g.b, g.c, g.d
    al, be = g.alpha, g.beta
    x1, x2, x, phi, psi = P.coords()
    xb, alb, beb, phib, psib = _cj(x), _cj(al), _cj(be), _cj(phi), _cj(psi)
    ab, abb = al * be, alb * beb
    if not (a * d - b * c).body:
        raise ValueError("bosonic block is not invertible")
    Binv = _inv2((_cj(a), _cj(c), _cj(b), _cj(d)))
    out = {}
    out["-2 theta"] = -2 * th - ((1 + abb) * (phib * al + psib * be) - (1 + ab) * (phi * alb + psi * beb)
                                 + (alb * (x1 * al + xb * be) + beb * (x * al + x2 * be)))
    lhs1 = Binv[0] * img.phi + Binv[1] * img.psi
    lhs2 = Binv[2] * img.phi + Binv[3] * img.psi
    k = 1 + ab + abb / 2 * (1 + 2 * ab)
    out["fermions (1)"] = lhs1 - (k * phi + x1 * (1 + abb / 2) * al + xb * (1 + abb / 2) * be)
    out["fermions (2)"] = lhs2 - (k * psi + x * (1 - abb / 2) * al + x2 * (1 - abb / 2) * be)
    # the closed forms above drop the (phibar al + psibar be) piece of the brace and
    # carry the wrong sign on abbar/2 in the second row; these are the full versions
    kc = k - ab * abb / 4 if rule == "invariant" else k
    extra = (phib * al + psib * be) / 2
    out["fermions (1) completed"] = lhs1 - (kc * phi + x1 * (1 + abb / 2) * al
                                            + xb * (1 + abb / 2) * be + extra * beb)
    out["fermions (2) completed"] = lhs2 - (kc * psi + x * (1 + abb / 2) * al
                                            + x2 * (1 + abb / 2) * be - extra * alb)
    M = (img.x1, _cj(img.x), img.x, img.x2)
    lhs = _mat2_mul(_mat2_mul(Binv, M), _inv2((a, b, c, d)))
    s = 1 - ab * abb / 2
    # (beb, -alb)^T (phib, psib) and (phi, psi)^T (be, -al)
    outer1 = (beb * phib, beb * psib, -alb * phib, -alb * psib)
    outer2 = (phi * be, -phi * al, psi * be, -psi * al)
    rhs = tuple(s * m + (1 + ab / 2) * o1 - (1 + abb / 2) * o2
                for m, o1, o2 in zip((x1, xb, x, x2), outer1, outer2))
    for name, l_, r_ in zip(("11", "12", "21", "22"), lhs, rhs):
        out[f"bosons {name}"] = l_ - r_
    return out


def transformation_general_forms(g, P, rule: str = "invariant") -> dict[str, GrassmannNumber]:
    """The pre-substitution forms (valid for any imaginary theta)."""
    res = act(g, P, rule)
    th = res.theta
    img = res.point
    a, b, c, d = g.a, g.b, g.c, g.d
    al, be = g.alpha, g.beta
    x1, x2, x, phi, psi = P.coords()
    xb, alb, beb, phib, psib = _cj(x), _cj(al), _cj(be), _cj(phi), _cj(psi)
    ab = al * be
    Binv = _inv2((_cj(a), _cj(c), _cj(b), _cj(d)))
    out = {}
    lhs1 = Binv[0] * img.phi + Binv[1] * img.psi
    lhs2 = Binv[2] * img.phi + Binv[3] * img.psi
    brace = phib * al + psib * be + (1 + ab) * th
    out["fermions (1)"] = lhs1 - ((1 + ab) * phi + x1 * al + xb * be + brace * beb)
    out["fermions (2)"] = lhs2 - ((1 + ab) * psi + x * al + x2 * be - brace * alb)
    M = (img.x1, _cj(img.x), img.x, img.x2)
    lhs = _mat2_mul(_mat2_mul(Binv, M), _inv2((a, b, c, d)))
    outer_th = (beb * be, -beb * al, -alb * be, alb * al)
    outer1 = (beb * phib, beb * psib, -alb * phib, -alb * psib)
    outer2 = (phi * be, -phi * al, psi * be, -psi * al)
    rhs = tuple(m - th * ot + o1 - o2 for m, ot, o1, o2 in zip((x1, xb, x, x2), outer_th, outer1, outer2))
    for name, l_, r_ in zip(("11", "12", "21", "22"), lhs, rhs):
        out[f"bosons {name}"] = l_ - r_
    return out


# ---------------------------------------------------------------------------
# JSON


def point_to_json(P: SuperPoint) -> dict:
    return {name: to_json(getattr(P, name)) for name in ("x1", "x2", "x", "phi", "psi")}


def point_from_json(ctx: AlgebraContext, data: dict) -> SuperPoint:
    def get(name):
        v = data.get(name, [])
        if isinstance(v, (int, float, str)):
            return ctx.scalar(v)
        return from_json(ctx, v)
    return SuperPoint(*(get(n) for n in ("x1", "x2", "x", "phi", "psi")))


def composition_check(g1, g2, P, rule: str = "invariant") -> dict[str, bool]:
    """Compare g2.(g1.P) and g1.(g2.P) against (g1 g2).P."""
    target = act(sm_mul(g1, g2), P, rule).point
    forward = act(g2, act(g1, P, rule).point, rule).point
    reverse = act(g1, act(g2, P, rule).point, rule).point
    if P.ctx.exact:
        return {"right action": forward == target, "left action": reverse == target}
    return {"right action": forward.close_to(target), "left action": reverse.close_to(target)}


def real_restriction_check(g, P: SuperPoint) -> dict[str, bool]:
    """For Majorana data the extended action reduces to g^st A g with a zero corner."""
    full = act(g, P)
    real = act_real(g, P)
    point, corner = from_point_matrix(real, check=False)
    same = point == full.point if P.ctx.exact else point.close_to(full.point)
    zero = corner.is_zero() if P.ctx.exact else corner.max_abs() <= FLOAT_TOL
    q_ok = real_quadratic_form(point) - real_quadratic_form(P)
    return {
        "theta = 0": full.theta.is_zero() if P.ctx.exact else full.theta.max_abs() <= FLOAT_TOL,
        "matches g^st A g": same,
        "corner stays 0": zero,
        "real form preserved": q_ok.is_zero() if P.ctx.exact else q_ok.max_abs() <= FLOAT_TOL,
    }
