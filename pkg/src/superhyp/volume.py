"""Fermion killing, the invariant volume form, its primitive, and ideal-face integrals.

Chart: a point of IH is described by (x2, u, v | phi, psi) with x = u + iv and x1
solved from Q = 1.  Forms are handled through their coefficients on parameter
families: a callable ``p -> SuperPoint`` over a box in R^2 or R^3.  Wedges of
differentials of even functions are determinants of commuting entries, so the
coefficient of dp1 ^ dp2 ^ dp3 is the determinant of a 3x3 Jacobian.

Orientation: Vol is taken positive on (x2, u, v)-ordered charts, i.e.
Vol = dlog(x2/K) ^ d(u/K) ^ d(v/K), whose body is dx2 du dv / x2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .grassmann import AlgebraContext, GrassmannNumber, _merge_sign, exp, indices_to_mask, log, mask_to_indices
from .minkowski import FLOAT_TOL, SuperPoint, act, quadratic_form
from .supermatrix import make_u


class ConstraintViolation(ValueError):
    pass


class FitFailure(ValueError):
    pass


def _cj(z):
    return z.conjugate()


# ---------------------------------------------------------------------------
# Fermion killing


def K_factor(phi: GrassmannNumber, psi: GrassmannNumber) -> GrassmannNumber:
    """1 + (phi psi + phibar psibar)/2 + 3/4 phi psi phibar psibar."""
    if not (phi.is_odd() and psi.is_odd()):
        raise ValueError("K takes odd arguments")
    a, b = phi * psi, _cj(phi) * _cj(psi)
    return 1 + (a + b) / 2 + 3 * a * b / 4


def K_inverse_square_residual(phi, psi) -> GrassmannNumber:
    """K^2 (1 - phi psi - phibar psibar) - 1, which vanishes identically."""
    K = K_factor(phi, psi)
    return K * K * (1 - phi * psi - _cj(phi) * _cj(psi)) - 1


@dataclass(frozen=True)
class KilledFermions:
    u: object
    alpha: GrassmannNumber
    beta: GrassmannNumber
    image: SuperPoint
    K: GrassmannNumber
    bosonic: SuperPoint  # (x1, x2, x | 0, 0), so image = K * bosonic


def kill_fermions(P: SuperPoint, rule: str = "invariant", tol: float = FLOAT_TOL) -> KilledFermions:
    """Apply u(alpha, beta) with (alpha, beta) = (1 + phibar psibar/2) [[-x2, xbar], [x, -x1]] (phi, psi)."""
    residual = quadratic_form(P) - 1
    if not (residual.is_zero() if P.ctx.exact else residual.max_abs() <= tol):
        raise ConstraintViolation("point is not on the unit hyperboloid")
    x1, x2, x, phi, psi = P.coords()
    pre = 1 + _cj(phi) * _cj(psi) / 2
    alpha = pre * (-x2 * phi + _cj(x) * psi)
    beta = pre * (x * phi - x1 * psi)
    u = make_u(alpha, beta)
    image = act(u, P, rule).point
    z = P.ctx.zero()
    return KilledFermions(u, alpha, beta, image, K_factor(phi, psi), SuperPoint(x1, x2, x, z, z))


# ---------------------------------------------------------------------------
# Chart families and forms


def chart_point(ctx: AlgebraContext, x2, u, v, phi, psi, level=1) -> SuperPoint:
    """Point with the given chart coordinates, x1 solved from Q = level."""
    x2, u, v = (ctx.scalar(c) for c in (x2, u, v))
    x = u + v * ctx.scalar(1j)
    x1 = (level + x * _cj(x) - phi * psi - _cj(phi) * _cj(psi)) / x2
    return SuperPoint(x1, x2, x, phi, psi)


@dataclass(frozen=True)
class ChartData:
    """Chart functions evaluated at one parameter point, with first derivatives."""

    x2: GrassmannNumber
    u: GrassmannNumber
    v: GrassmannNumber
    k: GrassmannNumber  # 1 - phi psi - phibar psibar = K^-2
    logK: GrassmannNumber
    dx2: list
    du: list
    dv: list
    dk: list
    dlogK: list


def _scalars(P: SuperPoint):
    x = P.x
    u = x.real_part()
    v = x.imag_part()
    k = 1 - P.phi * P.psi - _cj(P.phi) * _cj(P.psi)
    logK = -log(k) / 2
    return P.x2, u, v, k, logK


def chart_data(family, p, h: float = 1e-5) -> ChartData:
    """Evaluate a parameter family and its first derivatives by central differences."""
    p = np.asarray(p, dtype=float)
    base = _scalars(family(p))
    derivs = [[] for _ in base]
    for i in range(len(p)):
        e = np.zeros_like(p)
        e[i] = h
        plus, minus = _scalars(family(p + e)), _scalars(family(p - e))
        for slot, (a, b) in enumerate(zip(plus, minus)):
            derivs[slot].append((a - b) / (2 * h))
    return ChartData(*base, *derivs)


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def vol_form(family, p, h: float = 1e-5) -> GrassmannNumber:
    """Coefficient of dp1 ^ dp2 ^ dp3 in Vol = dlog(x2/K) ^ d(u/K) ^ d(v/K)."""
    c = chart_data(family, p, h)
    Kinv = exp(-c.logK)
    rows = []
    for i in range(3):
        dlog = c.dx2[i] / c.x2 - c.dlogK[i]
        dU = Kinv * (c.du[i] - c.u * c.dlogK[i])
        dV = Kinv * (c.dv[i] - c.v * c.dlogK[i])
        rows.append((dlog, dU, dV))
    # Jacobian has rows indexed by parameter; transpose for (function, parameter)
    return _det3([[rows[j][i] for j in range(3)] for i in range(3)])


def vol_form_display(family, p, h: float = 1e-5) -> GrassmannNumber:
    """dlog(x2/K) ^ d(v/K) ^ d(u/K) in the written order (negative body on (x2,u,v) charts)."""
    return -vol_form(family, p, h)


def _omega_components(c: ChartData, i: int, j: int, exact: bool):
    dl_i, dl_j = c.dx2[i] / c.x2, c.dx2[j] / c.x2
    dvdu = c.dv[i] * c.du[j] - c.dv[j] * c.du[i]
    gamma_i = c.v * c.du[i] - c.u * c.dv[i]
    gamma_j = c.v * c.du[j] - c.u * c.dv[j]
    val = c.k / 2 * (dvdu + dl_i * gamma_j - dl_j * gamma_i)
    if exact:
        val = val - c.k * (c.dlogK[i] * gamma_j - c.dlogK[j] * gamma_i)
    return val


def omega_primitive(family, p, i: int = 0, j: int = 1, h: float = 1e-5, exact: bool = False) -> GrassmannNumber:
    """Coefficient of dp_i ^ dp_j in (1 - phi psi - phibar psibar)/2 {dv^du + dlog x2 ^ (v du - u dv)}.

    With ``exact=True`` the correction -K^-2 dlogK ^ (v du - u dv) is added,
    which makes the primitive exact also when the fermions vary.
    """
    return _omega_components(chart_data(family, p, h), i, j, exact)


# ---------------------------------------------------------------------------
# Stokes check on a coordinate box


def _gauss(a, b, n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def _accumulate(total, value, weight):
    return value * weight if total is None else total + value * weight


@dataclass(frozen=True)
class StokesReport:
    interior: GrassmannNumber
    boundary: GrassmannNumber
    relative_error: float


def stokes_check(family, lo, hi, nodes: int = 8, exact_primitive: bool = False, h: float = 1e-5) -> StokesReport:
    """Integral of Vol over the box against the flux of the primitive through its faces."""
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    grids = [_gauss(lo[k], hi[k], nodes) for k in range(3)]
    interior = None
    for x0, w0 in zip(*grids[0]):
        for x1, w1 in zip(*grids[1]):
            for x2, w2 in zip(*grids[2]):
                interior = _accumulate(interior, vol_form(family, [x0, x1, x2], h), w0 * w1 * w2)
    boundary = None
    # face normal k, remaining axes (i, j) with dp_i ^ dp_j positively oriented for the outward normal
    for k, (i, j) in ((0, (1, 2)), (1, (2, 0)), (2, (0, 1))):
        for end, sign in ((hi[k], 1.0), (lo[k], -1.0)):
            for xi, wi in zip(*grids[i]):
                for xj, wj in zip(*grids[j]):
                    p = np.zeros(3)
                    p[k], p[i], p[j] = end, xi, xj
                    c = chart_data(family, p, h)
                    boundary = _accumulate(boundary, _omega_components(c, i, j, exact_primitive), sign * wi * wj)
    scale = max(interior.max_abs(), 1e-300)
    return StokesReport(interior, boundary, (interior - boundary).max_abs() / scale)


# ---------------------------------------------------------------------------
# Vectorized Grassmann fields for the face integral


class Field:
    """Grassmann number whose coefficients are arrays over quadrature nodes (dense in masks)."""

    __slots__ = ("n", "data")

    def __init__(self, n: int, data: np.ndarray):
        self.n = n
        self.data = data

    @classmethod
    def constant(cls, g: GrassmannNumber, nodes: int) -> Field:
        n = g.ctx.generator_count
        data = np.zeros((1 << n, nodes), dtype=complex)
        for m, c in g.terms.items():
            data[m] = complex(c)
        return cls(n, data)

    @classmethod
    def scalar(cls, n: int, values) -> Field:
        values = np.asarray(values, dtype=complex)
        data = np.zeros((1 << n, values.size), dtype=complex)
        data[0] = values
        return cls(n, data)

    def __add__(self, other):
        if isinstance(other, Field):
            return Field(self.n, self.data + other.data)
        out = self.data.copy()
        out[0] = out[0] + other
        return Field(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Field(self.n, -self.data)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Field):
            return Field(self.n, self.data * other)
        out = np.zeros_like(self.data)
        for i, j, k, s in _pairs(self.n):
            out[k] += s * self.data[i] * other.data[j]
        return Field(self.n, out)

    __rmul__ = __mul__

    def conjugate(self):
        return Field(self.n, self.data.conj())

    def invert(self):
        body = self.data[0]
        soul = Field(self.n, self.data.copy())
        soul.data[0] = 0
        x = soul * (-1 / body)
        term = Field.scalar(self.n, np.ones_like(body))
        total = term
        for _ in range(self.n // 2 + 1):
            term = term * x
            total = total + term
        return total * (1 / body)

    def __truediv__(self, other):
        if isinstance(other, Field):
            return self * other.invert()
        return Field(self.n, self.data / other)


_PAIR_CACHE: dict[int, list] = {}


def _pairs(n):
    if n not in _PAIR_CACHE:
        out = []
        for i in range(1 << n):
            for j in range(1 << n):
                if i & j == 0:
                    out.append((i, j, i | j, _merge_sign(i, j)))
        _PAIR_CACHE[n] = out
    return _PAIR_CACHE[n]


# ---------------------------------------------------------------------------
# Ideal-face integral


def _weights(s, t):
    """(a, b, c) with X(s,t) = aP + bQ + cR, and their t and s derivatives."""
    root = np.sqrt(s * s - 4)
    sp, sm = s + root, s - root
    dsp, dsm = 1 + s / root, 1 - s / root
    a = 1 / (2 * t) - t / (2 * s * s)
    b = t / (s * sm)
    c = t / (s * sp)
    a_t = -1 / (2 * t * t) - 1 / (2 * s * s)
    b_t = 1 / (s * sm)
    c_t = 1 / (s * sp)
    a_s = t / (s ** 3)
    b_s = -t * (sm + s * dsm) / (s * sm) ** 2
    c_s = -t * (sp + s * dsp) / (s * sp) ** 2
    return (a, b, c), (a_t, b_t, c_t), (a_s, b_s, c_s)


def _combine(consts, ws):
    out = None
    for C, w in zip(consts, ws):
        term = C * Field.scalar(C.n, w)
        out = term if out is None else out + term
    return out


INTEGRANDS = ("reduced", "full")


def face_integrand(vertices, s: float, t: np.ndarray, integrand: str = "reduced", u_star: float = 1.0) -> np.ndarray:
    """Dense coefficients (masks x nodes) of the dt ^ ds coefficient on the ideal face.

    ``full`` pulls back (1 - phi psi - phibar psibar)/2 {dv^du + dlog x2 ^ (v du - u dv)}
    through X(s,t).  ``reduced`` is the constant-u form
    (u*/2)(1 - phi psi - phibar psibar) dlog x2 ^ dv used in the divergence
    argument; on this parametrization u is not actually constant (it grows
    like (a + b + c) u*), which is why the two integrands scale differently.
    """
    if integrand not in INTEGRANDS:
        raise ValueError(f"unknown integrand {integrand!r}")
    t = np.asarray(t, dtype=float)
    nodes = t.size
    sv = np.full(nodes, float(s))
    w, wt, ws = _weights(sv, t)
    X2 = [Field.constant(P.x2, nodes) for P in vertices]
    V = [Field.constant(P.x.imag_part(), nodes) for P in vertices]
    PH = [Field.constant(P.phi, nodes) for P in vertices]
    PS = [Field.constant(P.psi, nodes) for P in vertices]
    x2, x2t, x2s = (_combine(X2, q) for q in (w, wt, ws))
    v, vt, vs = (_combine(V, q) for q in (w, wt, ws))
    phi, psi = _combine(PH, w), _combine(PS, w)
    k = 1 - phi * psi - phi.conjugate() * psi.conjugate()
    if integrand == "reduced":
        return (k * ((x2t * vs - x2s * vt) / x2) * (0.5 * u_star)).data
    U = [Field.constant(P.x.real_part(), nodes) for P in vertices]
    u, ut, us = (_combine(U, q) for q in (w, wt, ws))
    inner = (vt * us - vs * ut) + (x2t * (v * us - u * vs) - x2s * (v * ut - u * vt)) / x2
    return (k * inner * 0.5).data


def _inner_t(vertices, s, eps, integrand, u_star, panels_per_unit: float = 1.0, order: int = 24):
    """Integral over t in [eps, s+/2] on a logarithmic mesh (integrand ~ 1/t^k near 0)."""
    upper = 0.5 * (s + math.sqrt(s * s - 4))
    lo, hi = math.log(eps), math.log(upper)
    count = max(1, int(math.ceil((hi - lo) * panels_per_unit)))
    edges = np.linspace(lo, hi, count + 1)
    xg, wg = np.polynomial.legendre.leggauss(order)
    taus = np.concatenate([0.5 * (b - a) * xg + 0.5 * (a + b) for a, b in zip(edges[:-1], edges[1:])])
    wts = np.concatenate([0.5 * (b - a) * wg for a, b in zip(edges[:-1], edges[1:])])
    t = np.exp(taus)
    vals = face_integrand(vertices, s, t, integrand, u_star)
    return vals @ (wts * t)


@dataclass
class FaceIntegral:
    eps: float
    smax: float
    coefficients: dict  # mask -> complex
    ctx: AlgebraContext = field(repr=False)
    integrand: str = "reduced"

    def monomial(self, indices) -> complex:
        m, sign = indices_to_mask(indices)
        return sign * self.coefficients.get(m, 0j)

    def as_number(self) -> GrassmannNumber:
        return GrassmannNumber(self.ctx, dict(self.coefficients))


def face_integral(vertices, eps: float, smax: float = 50.0, delta: float = 1e-6,
                  tol: float = 1e-9, integrand: str = "reduced", u_star: float | None = None) -> FaceIntegral:
    """Integrate Omega over the ideal face t in [eps, s+/2], s in [2 + delta, smax].

    The outer variable is sigma with s = 2 cosh(sigma), which removes the
    square-root endpoint behaviour at s = 2.
    """
    if eps <= 0 or smax <= 2:
        raise ValueError("need eps > 0 and smax > 2")
    ctx = vertices[0].ctx
    n = ctx.generator_count
    if u_star is None:
        u_star = complex(vertices[0].x.body).real

    def outer(sigma):
        s = 2 * math.cosh(sigma)
        vals = _inner_t(vertices, s, eps, integrand, u_star) * (2 * math.sinh(sigma))
        return np.concatenate([vals.real, vals.imag])

    a, b = math.acosh((2 + delta) / 2), math.acosh(smax / 2)
    res, err = integrate.quad_vec(outer, a, b, epsabs=tol, epsrel=tol, limit=400)
    size = 1 << n
    coeffs = res[:size] + 1j * res[size:]
    out = {m: complex(c) for m, c in enumerate(coeffs) if abs(c) > 0}
    return FaceIntegral(eps, smax, out, ctx, integrand)


def monomial_name(ctx: AlgebraContext, mask: int) -> str:
    idx = mask_to_indices(mask)
    if not idx:
        return "1"
    names = ctx.names or tuple(f"theta{i}" for i in range(1, ctx.generator_count + 1))
    return "*".join(names[i - 1] for i in idx)


@dataclass
class DivergenceReport:
    eps: list
    per_monomial: dict  # name -> list of {eps, value}
    exponent: float | None
    r2: float | None
    body: list
    channel: str

    def to_json(self) -> dict:
        return {
            "per_monomial": self.per_monomial,
            "fit": {"channel": self.channel, "exponent": self.exponent, "r2": self.r2},
            "body": self.body,
            "body_increment": self.body_increment,
        }

    @property
    def body_increment(self) -> float:
        """|body(eps_last) - body(eps_second_last)|, the Cauchy gap on the finest step."""
        vals = [complex(*b["value"]) if isinstance(b["value"], list) else complex(b["value"]) for b in self.body]
        return abs(vals[-1] - vals[-2])


def power_law_fit(eps, values) -> tuple[float, float]:
    """Least squares fit of log|I| = log C + p log eps; returns (p, r^2)."""
    x = np.log(np.asarray(eps, float))
    y = np.log(np.abs(np.asarray(values, complex)))
    if len(x) < 2 or not np.all(np.isfinite(y)):
        raise FitFailure("need at least two non-zero values")
    p, c = np.polyfit(x, y, 1)
    pred = p * x + c
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(p), r2


def divergence_fit(vertices, eps_list, channel, smax: float = 50.0, integrand: str = "reduced") -> DivergenceReport:
    """Face integrals over an eps grid and the power law of one monomial channel."""
    eps_list = sorted(eps_list, reverse=True)
    if len(eps_list) < 4 or math.log10(eps_list[0] / eps_list[-1]) < 2:
        raise FitFailure("need at least four eps values spanning two decades")
    ctx = vertices[0].ctx
    results = [face_integral(vertices, e, smax, integrand=integrand) for e in eps_list]
    masks = sorted({m for r in results for m in r.coefficients})
    per = {}
    for m in masks:
        per[monomial_name(ctx, m)] = [{"eps": r.eps, "value": _cplx(r.coefficients.get(m, 0j))} for r in results]
    series = [r.monomial(channel) for r in results]
    if all(abs(z) == 0 for z in series):
        p, r2 = None, None  # channel identically zero (e.g. bosonic vertices): nothing to fit
    else:
        p, r2 = power_law_fit(eps_list, series)
    body = [{"eps": r.eps, "value": _cplx(r.coefficients.get(0, 0j))} for r in results]
    return DivergenceReport(eps_list, per, p, r2, body, monomial_name(ctx, _mask(channel)))


def _mask(indices):
    return indices_to_mask(indices)[0]


def _cplx(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]
