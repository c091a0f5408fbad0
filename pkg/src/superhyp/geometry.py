"""Super geodesics, angles, triangle normalizations and tetrahedra in IH.

Everything is written in terms of the bilinear form ``inner``; the transcendental
steps (sqrt, acosh, acos) go through the Grassmann analytic lifts, so they need
float mode unless the bodies happen to be perfect squares.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .grassmann import AlgebraContext, GrassmannNumber, acos, acosh, cosh, sinh, sqrt
from .minkowski import (
    FLOAT_TOL,
    SuperPoint,
    act,
    inner,
)
from .supermatrix import lift_sl2, make_u, sm_mul

DEGENERACY = 1e-9


class DegenerateConfiguration(ValueError):
    pass


class SingularNormalization(DegenerateConfiguration):
    pass


class SolverFailure(RuntimeError):
    pass


def _body_real(z: GrassmannNumber) -> float:
    return complex(z.body).real


def _vanishes(z: GrassmannNumber, tol: float = FLOAT_TOL) -> bool:
    return z.is_zero() if z.ctx.exact else z.max_abs() <= tol


def H_func(d, e, f):
    """2def + 1 - d^2 - e^2 - f^2 (the Gram determinant of a triangle)."""
    return 2 * d * e * f + 1 - d * d - e * e - f * f


# ---------------------------------------------------------------------------
# Geodesics


@dataclass(frozen=True)
class Geodesic:
    U: SuperPoint
    V: SuperPoint

    @property
    def E(self) -> SuperPoint:
        return self.U + self.V

    @property
    def F(self) -> SuperPoint:
        return self.U - self.V

    @classmethod
    def from_asymptotes(cls, E: SuperPoint, F: SuperPoint) -> Geodesic:
        return cls((E + F) / 2, (E - F) / 2)


def _check_separated(d: GrassmannNumber):
    if _body_real(d) <= 1 + DEGENERACY:
        raise DegenerateConfiguration("points coincide or are not timelike separated")


def distance(P: SuperPoint, Q: SuperPoint) -> GrassmannNumber:
    d = inner(P, Q)
    if abs(_body_real(d) - 1) <= DEGENERACY:
        return P.ctx.zero()
    return acosh(d)


def geodesic_through(P: SuperPoint, Q: SuperPoint) -> tuple[Geodesic, GrassmannNumber]:
    """The geodesic with X(0) = P and X(D) = Q, together with D."""
    d = inner(P, Q)
    _check_separated(d)
    ell = sqrt((d + 1) / (d - 1))
    E = ((ell - 1) / (2 * ell)) * ((1 - ell) * P + (1 + ell) * Q)
    F = ((ell + 1) / (2 * ell)) * ((1 + ell) * P + (1 - ell) * Q)
    return Geodesic.from_asymptotes(E, F), acosh(d)


def geodesic_point(L: Geodesic, s) -> SuperPoint:
    s = L.U.ctx.scalar(s)
    return cosh(s) * L.U + sinh(s) * L.V


def tangent(P: SuperPoint, Q: SuperPoint) -> SuperPoint:
    """Unit tangent at P of the segment toward Q; spacelike with <T,T> = -1."""
    d = inner(P, Q)
    _check_separated(d)
    return (Q - d * P) / sqrt(d * d - 1)


def cos_angle(P: SuperPoint, Q: SuperPoint, R: SuperPoint) -> GrassmannNumber:
    return -inner(tangent(P, Q), tangent(P, R))


def cos_angle_formula(P, Q, R) -> GrassmannNumber:
    """(d f - e) / sqrt((d^2 - 1)(f^2 - 1)) with d = <P,Q>, e = <Q,R>, f = <R,P>."""
    d, e, f = inner(P, Q), inner(Q, R), inner(R, P)
    return (d * f - e) / sqrt((d * d - 1) * (f * f - 1))


def angle(P: SuperPoint, Q: SuperPoint, R: SuperPoint) -> GrassmannNumber:
    """Interior angle at P of the triangle PQR."""
    c = cos_angle(P, Q, R)
    if abs(_body_real(c)) >= 1 - DEGENERACY:
        raise DegenerateConfiguration("collinear vertices")
    return acos(c)


def law_of_cosines_residual(P, Q, R) -> GrassmannNumber:
    """cosh e - cosh d cosh f + sinh d sinh f cos A, with d, e, f side lengths.

    Side lengths go through acosh and back through cosh/sinh; cos A comes from
    the unit tangents at P.
    """
    d, f, e = distance(P, Q), distance(P, R), distance(Q, R)
    return cosh(e) - cosh(d) * cosh(f) + sinh(d) * sinh(f) * cos_angle(P, Q, R)


@dataclass(frozen=True)
class LocusCheck:
    product: GrassmannNumber
    on_geodesic: bool
    span_roundtrip: bool


def geodesic_locus_check(L: Geodesic, P: SuperPoint, tol: float = 1e-12) -> LocusCheck:
    """Test <P,E><P,F> = 1 and rebuild P as (xE + yF)/(2 sqrt(xy))."""
    x, y = inner(P, L.F), inner(P, L.E)
    product = y * x
    on = _vanishes(product - 1, tol)
    rebuilt = (x * L.E + y * L.F) / (2 * sqrt(x * y)) if _body_real(x * y) > 0 else None
    same = rebuilt is not None and (rebuilt == P if P.ctx.exact else rebuilt.close_to(P, tol))
    return LocusCheck(product, on, bool(on and same))


# ---------------------------------------------------------------------------
# Triangle normalizations


def _conj(z):
    return z.conjugate()


def _solve2(m, rhs):
    a, b, c, d = m
    det = a * d - b * c
    inv = det.invert()
    r1, r2 = rhs
    return (d * r1 - b * r2) * inv, (a * r2 - c * r1) * inv


def share_fermion(P, Q, R, max_iter: int = 16):
    """Find u(xi, eta) so the images of P, Q, R share their first fermion.

    The leading-order system is linear with determinant
    t = p1(qbar - rbar) + q1(rbar - pbar) + r1(pbar - qbar); the higher order
    corrections are removed by iterating with the same matrix, which
    terminates because each pass raises the Grassmann degree of the residual.
    """
    ctx = P.ctx
    p1, q1, r1 = P.x1, Q.x1, R.x1
    pb, qb, rb = _conj(P.x), _conj(Q.x), _conj(R.x)
    t = p1 * (qb - rb) + q1 * (rb - pb) + r1 * (pb - qb)
    if abs(complex(t.body)) <= DEGENERACY:
        raise SingularNormalization("determinant t has vanishing body")
    m = (p1 - q1, pb - qb, q1 - r1, qb - rb)
    xi, eta = ctx.zero(), ctx.zero()
    for _ in range(max_iter):
        u = make_u(xi, eta)
        a, c, e = (act(u, X).point.phi for X in (P, Q, R))
        res = (a - c, c - e)
        if all(_vanishes(r) for r in res):
            return u, tuple(act(u, X).point for X in (P, Q, R))
        dxi, deta = _solve2(m, res)
        xi, eta = xi - dxi, eta - deta
    raise SolverFailure("fermion equalization did not terminate")


def hermitean_block(X: SuperPoint, Y: SuperPoint):
    return (X.x1 - Y.x1, _conj(X.x) - _conj(Y.x), X.x - Y.x, X.x2 - Y.x2)


def _real_part_conditions(abcd, blocks):
    """Re of the transformed off-diagonal differences, plus ad - bc - 1."""
    a, b, c, d = abcd
    out = []
    for h11, h12, h21, h22 in blocks:
        # (bbar dbar) H (a c)^T is the (2,1) entry of Bbar H A
        off = _conj(b) * (h11 * a + h12 * c) + _conj(d) * (h21 * a + h22 * c)
        out.append(off.real_part())
    det = a * d - b * c - 1
    out.extend([det.real_part(), det.imag_part()])
    return out


def _body_system(x, blocks):
    a, b, c, d = x[0::2] + 1j * x[1::2]
    res = []
    for h11, h12, h21, h22 in blocks:
        off = np.conj(b) * (h11 * a + h12 * c) + np.conj(d) * (h21 * a + h22 * c)
        res.append(off.real)
    det = a * d - b * c - 1
    res.extend([det.real, det.imag])
    return np.array(res)


def _initial_guess(block):
    """Unitary diagonalizing the first Hermitean difference (det rescaled to 1)."""
    h11, h12, h21, h22 = block
    H = np.array([[h11, h12], [h21, h22]], dtype=complex)
    _, U = np.linalg.eigh(H)
    U = U / np.sqrt(np.linalg.det(U))
    return np.array([U[0, 0].real, U[0, 0].imag, U[0, 1].real, U[0, 1].imag,
                     U[1, 0].real, U[1, 0].imag, U[1, 1].real, U[1, 1].imag])


def _jacobian(x, blocks):
    # every component is a real quadratic polynomial, so unit central differences are exact
    n = len(x)
    cols = []
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        cols.append((_body_system(x + e, blocks) - _body_system(x - e, blocks)) / 2)
    return np.array(cols).T


def solve_common_real_part(pairs, tol: float = 1e-13, max_iter: int = 100):
    """Body-level unimodular (a, b, c, d) making both Hermitean differences have real off-diagonal zero."""
    blocks = [tuple(complex(z.body) for z in pair) for pair in pairs]
    for h11, h12, h21, h22 in blocks:
        if abs((h11 * h22 - h12 * h21).real) <= DEGENERACY:
            raise DegenerateConfiguration("isotropic difference between vertices")
    x = _initial_guess(blocks[0])
    for _ in range(max_iter):
        r = _body_system(x, blocks)
        if np.max(np.abs(r)) <= tol:
            return x, blocks
        x = x - np.linalg.pinv(_jacobian(x, blocks)) @ r
    raise SolverFailure("unimodular solve did not converge")


def _refine_souls(ctx: AlgebraContext, x, blocks_super, blocks_body, max_iter: int = 32):
    """Newton steps with the body Jacobian, monomial by monomial, until exact."""
    abcd = [ctx.scalar(complex(x[2 * k], x[2 * k + 1])) for k in range(4)]
    Jp = np.linalg.pinv(_jacobian(x, blocks_body))
    # round-off floor relative to the size of the data
    floor = 1e-14 * max(1.0, max(z.max_abs() for blk in blocks_super for z in blk))
    for _ in range(max_iter):
        res = _real_part_conditions(abcd, blocks_super)
        masks = sorted({m for r in res for m in r.terms if m})
        if not masks:
            return abcd
        corrections = [ctx.zero() for _ in range(4)]
        for m in masks:
            vec = np.array([complex(r.terms.get(m, 0)).real for r in res])
            step = Jp @ vec
            if np.max(np.abs(vec)) <= floor:
                continue
            for k in range(4):
                mono = GrassmannNumber(ctx, {m: complex(step[2 * k], step[2 * k + 1])})
                corrections[k] = corrections[k] + mono
        if all(c.is_zero() for c in corrections):
            return abcd
        abcd = [z - dz for z, dz in zip(abcd, corrections)]
    raise SolverFailure("soul refinement did not converge")


@dataclass(frozen=True)
class NormalizedTriple:
    g: object
    points: tuple
    A: tuple
    mu: GrassmannNumber
    seconds: tuple


def normalize_triple(P, Q, R) -> NormalizedTriple:
    """Common first fermion, then a common real part of p, q, r (float mode).

    Returns the combined group element g (apply with ``act(g, X)``), the image
    triple, the 2x2 matrix A taking (mu, rho), (mu, sigma), (mu, tau) to the
    image fermions, and those fermions.
    """
    ctx = P.ctx
    u, shared = share_fermion(P, Q, R)
    P1, Q1, R1 = shared
    pairs = [hermitean_block(P1, Q1), hermitean_block(Q1, R1)]
    x, blocks = solve_common_real_part(pairs)
    a, b, c, d = _refine_souls(ctx, x, pairs, blocks)
    lift = lift_sl2(a, b, c, d, ctx=ctx)
    images = tuple(act(lift, X).point for X in shared)
    A = (_conj(a), _conj(c), _conj(b), _conj(d))
    return NormalizedTriple(sm_mul(u, lift), images, A, P1.phi, tuple(X.psi for X in shared))


def normalize_ideal_triple(Y1, Y2, Y3):
    """Rescale three light-cone rays so that every pairwise inner product is 2."""
    Ys = (Y1, Y2, Y3)
    prods = {}
    for i, j in itertools.combinations(range(3), 2):
        v = inner(Ys[i], Ys[j])
        if _body_real(v) <= DEGENERACY:
            raise DegenerateConfiguration("proportional or non-future rays")
        prods[i, j] = prods[j, i] = v
    out = []
    for i in range(3):
        j, k = (n for n in range(3) if n != i)
        out.append(sqrt(2 * prods[j, k] / (prods[i, j] * prods[i, k])) * Ys[i])
    return tuple(out)


def _s_pm(s):
    root = sqrt(s * s - 4)
    return s + root, s - root


def ideal_triangle_weights(s, t):
    """Scalar weights (a, b, c) with X(s,t) = aP + bQ + cR on the normalized ideal triangle."""
    sp, sm = _s_pm(s)
    a = 1 / (2 * t) - t / (2 * s * s)
    return a, t / (s * sm), t / (s * sp)


def ideal_triangle_point(P, Q, R, s, t) -> SuperPoint:
    ctx = P.ctx
    s, t = ctx.scalar(s), ctx.scalar(t)
    if _body_real(s) <= 2:
        raise ValueError("s must exceed 2")
    sp, _ = _s_pm(s)
    if not 0 < _body_real(t) < _body_real(sp) / 2:
        raise ValueError("t out of range")
    a, b, c = ideal_triangle_weights(s, t)
    return a * P + b * Q + c * R


def ideal_triangle_point_simplified(P, Q, R, s, t) -> SuperPoint:
    """The simplified display with leading term 2P/t; not on IH (see tests)."""
    ctx = P.ctx
    s, t = ctx.scalar(s), ctx.scalar(t)
    sp, sm = _s_pm(s)
    return (2 / t) * P + (t / s) * (Q / sm + R / sp - (2 / s) * P)


# ---------------------------------------------------------------------------
# Tetrahedra


@dataclass(frozen=True)
class GramData:
    d: tuple  # 4x4 nested tuples of even GrassmannNumbers

    def cofactor(self, i: int, j: int) -> GrassmannNumber:
        rows = [r for r in range(4) if r != i]
        cols = [c for c in range(4) if c != j]
        m = [[self.d[r][c] for c in cols] for r in rows]
        det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
               - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
               + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
        return det if (i + j) % 2 == 0 else -det


def gram(points) -> GramData:
    points = list(points)
    if len(points) != 4:
        raise ValueError("a tetrahedron needs four vertices")
    return GramData(tuple(tuple(inner(p, q) for q in points) for p in points))


def gram_from_values(ctx: AlgebraContext, values) -> GramData:
    return GramData(tuple(tuple(ctx.scalar(v) for v in row) for row in values))


def _opposite(i, j):
    k, l = (n for n in range(4) if n not in (i, j))
    return k, l


def dihedral_cos(G: GramData, i: int, j: int) -> GrassmannNumber:
    """-c_ij / sqrt(c_ii c_jj): cosine of the dihedral angle along the edge opposite P_i P_j."""
    cii, cjj = G.cofactor(i, i), G.cofactor(j, j)
    if min(_body_real(cii), _body_real(cjj)) <= DEGENERACY:
        raise DegenerateConfiguration("degenerate face")
    return -G.cofactor(i, j) / (sqrt(cii) * sqrt(cjj))


def dihedral_display(G: GramData, i: int, j: int) -> GrassmannNumber:
    """Closed form in the inner products, written for the edge P_k P_l opposite P_i P_j."""
    k, l = _opposite(i, j)
    d = G.d
    num = (d[k][l] ** 2 - 1) * (d[i][j] - d[i][l] * d[j][l]) + (d[i][k] - d[i][l] * d[k][l]) * (d[j][k] - d[j][l] * d[k][l])
    return -num / (sqrt(H_func(d[i][k], d[i][l], d[k][l])) * sqrt(H_func(d[j][k], d[j][l], d[k][l])))


def dihedral_display_sum_numerator(G: GramData, i: int, j: int) -> GrassmannNumber:
    """The same closed form with the sum in place of the product and no overall sign."""
    k, l = _opposite(i, j)
    d = G.d
    num = (d[k][l] ** 2 - 1) * (d[i][j] - d[i][l] * d[j][l]) + (d[j][k] - d[j][l] * d[k][l]) - (d[i][k] - d[i][l] * d[k][l])
    return num / (sqrt(H_func(d[i][k], d[i][l], d[k][l])) * sqrt(H_func(d[j][k], d[j][l], d[k][l])))


def dihedral_projection(points, i: int, j: int) -> GrassmannNumber:
    """Angle between the faces through edge P_k P_l via projected tangents at P_l."""
    k, l = _opposite(i, j)
    X = points[l]
    v = tangent(X, points[k])
    w = []
    for n in (i, j):
        un = tangent(X, points[n])
        w.append(un + inner(un, v) * v)  # <v,v> = -1, so this is orthogonal to v
    return -inner(w[0], w[1]) / sqrt(inner(w[0], w[0]) * inner(w[1], w[1]))


def all_dihedral_cos(G: GramData) -> dict[tuple[int, int], GrassmannNumber]:
    return {(i, j): dihedral_cos(G, i, j) for i, j in itertools.combinations(range(4), 2)}
