import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superhyp import geometry as geo
from superhyp import minkowski as mk
from superhyp.grassmann import AlgebraContext
from superhyp.sampling import ih_point, light_point
from superhyp.supermatrix import random_osp

EX = AlgebraContext(8)
FC = EX.float_context()
seeds = st.integers(0, 10**6)


def to_float(P):
    return mk.SuperPoint(*(EX.to_float(c) for c in P.coords()))


def points(seed, k, maker=ih_point):
    rng = random.Random(seed)
    out = []
    for _ in range(k):
        gens = rng.sample(range(1, 9), 4)
        out.append(to_float(maker(EX, rng, gens[:2], gens[2:])))
    return out


def pscale(*pts):
    return max(1.0, max(c.max_abs() for X in pts for c in X.coords()))


def small(z, tol, ref=None):
    """|z| <= tol, relative to the coefficient size of ``ref`` when given."""
    scale = 1.0 if ref is None else max(1.0, ref.max_abs())
    return z.max_abs() <= tol * scale


@given(seeds)
def test_geodesic_endpoints_and_norm(seed):
    P, Q = points(seed, 2)
    L, D = geo.geodesic_through(P, Q)
    sc = pscale(P, Q)
    assert geo.geodesic_point(L, FC.zero()).close_to(P, 1e-10 * sc)
    assert geo.geodesic_point(L, D).close_to(Q, 1e-10 * sc)
    sc = pscale(L.E, L.F)
    assert small(mk.inner(L.E, L.F) - 2, 1e-10 * sc**2)
    assert small(mk.quadratic_form(L.E), 1e-10 * sc**2) and small(mk.quadratic_form(L.F), 1e-10 * sc**2)
    for s in (0.1, 0.5, 1.7):
        X = geo.geodesic_point(L, s)
        assert small(mk.quadratic_form(X) - 1, 1e-10 * pscale(X) ** 2)


@given(seeds, st.floats(0.05, 2.0), st.floats(0.05, 2.0))
def test_distance_along_geodesic_is_additive(seed, s, t):
    P, Q = points(seed, 2)
    L, _ = geo.geodesic_through(P, Q)
    X0, Xs, Xst = (geo.geodesic_point(L, v) for v in (0.0, s, s + t))
    assert small(geo.distance(X0, Xs) - s, 1e-9)
    assert small(geo.distance(X0, Xs) + geo.distance(Xs, Xst) - geo.distance(X0, Xst), 1e-9)


@given(seeds, st.floats(-2, 2))
def test_locus_of_geodesic(seed, s):
    P, Q, R = points(seed, 3)
    L, _ = geo.geodesic_through(P, Q)
    chk = geo.geodesic_locus_check(L, geo.geodesic_point(L, s), tol=1e-9)
    assert chk.on_geodesic and chk.span_roundtrip
    assert not geo.geodesic_locus_check(L, R, tol=1e-9).on_geodesic


def test_coincident_points_are_degenerate():
    (P,) = points(0, 1)
    with pytest.raises(geo.DegenerateConfiguration):
        geo.geodesic_through(P, P)
    assert geo.distance(P, P).is_zero()


@given(seeds)
def test_tangents_and_angles(seed):
    P, Q, R = points(seed, 3)
    T = geo.tangent(P, Q)
    sc = pscale(T, P)
    assert small(mk.inner(T, T) + 1, 1e-10 * sc**2)
    assert small(mk.inner(T, P), 1e-10 * sc**2)
    c = geo.cos_angle(P, Q, R)
    assert small(c - geo.cos_angle_formula(P, Q, R), 1e-10, c)


@given(seeds)
def test_law_of_cosines(seed):
    P, Q, R = points(seed, 3)
    # residual is a difference of products of cosh/sinh; compare at the scale of cosh(e)
    assert small(geo.law_of_cosines_residual(P, Q, R), 1e-9, mk.inner(Q, R))


def test_angle_sum_below_pi_for_bosonic_triangle():
    P, Q, R = (X.body() for X in points(4, 3))
    total = sum(complex(geo.angle(*tri).body).real for tri in ((P, Q, R), (Q, R, P), (R, P, Q)))
    assert 0 < total < math.pi


def test_collinear_triple_is_degenerate():
    P, Q = points(2, 2)
    L, D = geo.geodesic_through(P, Q)
    M = geo.geodesic_point(L, D / 2)
    with pytest.raises(geo.DegenerateConfiguration):
        geo.angle(P, Q, M)


@settings(max_examples=15)
@given(seeds)
def test_isometry_preserves_distance(seed):
    P, Q = points(seed, 2)
    g = random_osp(EX, seed, [1, 2, 5]).map(EX.to_float)
    gP, gQ = (mk.act(g, X).point for X in (P, Q))
    d = geo.distance(P, Q)
    assert small(geo.distance(gP, gQ) - d, 1e-9, d)


def test_share_fermion_exact():
    rng = random.Random(7)
    P, Q, R = (ih_point(EX, rng, [1, 2], [3, 4]) for _ in range(3))
    u, imgs = geo.share_fermion(P, Q, R)
    assert imgs[0].phi == imgs[1].phi == imgs[2].phi
    assert all(mk.quadratic_form(X) == EX.one() for X in imgs)


@pytest.mark.parametrize("seed", [7, 8, 9])
def test_normalize_triple(seed):
    rng = random.Random(seed)
    pts = [to_float(ih_point(EX, rng, [1, 2], [3, 4])) for _ in range(3)]
    N = geo.normalize_triple(*pts)
    re = [X.x.real_part() for X in N.points]
    assert small(re[0] - re[1], 1e-12) and small(re[1] - re[2], 1e-12)
    assert all(mk.act(N.g, X).point.close_to(Y, 1e-9) for X, Y in zip(pts, N.points))
    a, c, b, d = N.A
    for X, s in zip(N.points, N.seconds):
        assert small(X.phi - (a * N.mu + c * s), 1e-12)
        assert small(X.psi - (b * N.mu + d * s), 1e-12)


def test_ideal_normalization_and_parametrization():
    Ys = points(3, 3, light_point)
    V = geo.normalize_ideal_triple(*Ys)
    for i, j in itertools.combinations(range(3), 2):
        assert small(mk.inner(V[i], V[j]) - 2, 1e-12)
    for s, t in ((2.5, 0.3), (3.0, 0.7), (10.0, 5.0)):
        X = geo.ideal_triangle_point(*V, s, t)
        assert small(mk.quadratic_form(X) - 1, 1e-10)
    # the simplified display with leading 2P/t has <X,X> = 4 - 3 t^2/s^2
    X = geo.ideal_triangle_point_simplified(*V, 3.0, 0.7)
    assert small(mk.quadratic_form(X) - (4 - 3 * 0.7**2 / 9), 1e-10)
    with pytest.raises(ValueError):
        geo.ideal_triangle_point(*V, 1.5, 0.1)


@settings(max_examples=15)
@given(seeds)
def test_dihedral_routes_agree(seed):
    pts = points(seed, 4)
    G = geo.gram(pts)
    for (i, j), c in geo.all_dihedral_cos(G).items():
        assert small(c - geo.dihedral_display(G, i, j), 1e-9, c)
        assert small(c - geo.dihedral_projection(pts, i, j), 1e-9, c)


def test_sum_numerator_dihedral_display_differs():
    pts = points(5, 4)
    G = geo.gram(pts)
    assert not small(geo.dihedral_cos(G, 0, 1) - geo.dihedral_display_sum_numerator(G, 0, 1), 1e-3)


def test_symmetric_gram():
    G = geo.gram_from_values(FC, [[1 if i == j else 2 for j in range(4)] for i in range(4)])
    vals = [complex(c.body).real for c in geo.all_dihedral_cos(G).values()]
    assert len(vals) == 6
    assert max(vals) - min(vals) <= 1e-12
    # H(2,2,2) = 5 and the off-diagonal cofactor is -2
    assert abs(vals[0] - 0.4) < 1e-12


def test_H_function():
    assert geo.H_func(2, 2, 2) == 5
    assert geo.H_func(1, 1, 1) == 0
