import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from superhyp import minkowski as mk
from superhyp import volume as vol
from superhyp.cli import FACE_NAMES, default_ideal_vertices
from superhyp.geometry import normalize_ideal_triple
from superhyp.grassmann import AlgebraContext, indices_to_mask
from superhyp.sampling import ih_point, odd

EX = AlgebraContext(8)
seeds = st.integers(0, 10**6)
MU_RHO = indices_to_mask([1, 2])[0]


# -- fermion killing (exact)


@given(seeds)
def test_kill_fermions(seed):
    rng = random.Random(seed)
    P = ih_point(EX, rng, rng.sample(range(1, 9), 4), rng.sample(range(1, 9), 4))
    for rule in ("invariant", "ffbar"):
        kf = vol.kill_fermions(P, rule)
        assert kf.image.phi.is_zero() and kf.image.psi.is_zero()
        assert kf.image == kf.bosonic.scale(kf.K)
        assert kf.alpha * kf.beta == P.phi * P.psi
    assert vol.K_inverse_square_residual(P.phi, P.psi).is_zero()


def test_kill_fermions_needs_unit_hyperboloid():
    rng = random.Random(0)
    P = ih_point(EX, rng, [1, 2], [3, 4]).scale(2)
    with pytest.raises(vol.ConstraintViolation):
        vol.kill_fermions(P)


# -- volume form and primitive

FC = AlgebraContext(4).float_context()


def fermions(seed):
    rng = random.Random(seed)
    ex = AlgebraContext(4)
    return ex.to_float(odd(ex, rng, [1, 2])), ex.to_float(odd(ex, rng, [3, 4]))


def fixed_family(seed):
    phi, psi = fermions(seed)
    return lambda p: vol.chart_point(FC, p[0], p[1], p[2], phi, psi)


def test_vol_body_is_positive_on_chart_order():
    fam = fixed_family(1)
    for p in ([2.0, 0.3, 0.4], [0.5, -1.0, 2.0]):
        assert abs(complex(vol.vol_form(fam, p).body) - 1 / p[0]) < 1e-8
        assert abs(complex(vol.vol_form_display(fam, p).body) + 1 / p[0]) < 1e-8


@settings(max_examples=5)
@given(seeds)
def test_stokes_with_fixed_fermions(seed):
    rng = random.Random(seed)
    lo = np.array([rng.uniform(0.5, 3), rng.uniform(-1, 1), rng.uniform(-1, 1)])
    hi = lo + np.array([rng.uniform(0.05, 0.3) for _ in range(3)])
    rep = vol.stokes_check(fixed_family(seed), lo, hi)
    assert rep.relative_error < 1e-6


def test_closed_form_primitive_is_only_fibrewise():
    phi, psi = fermions(3)
    fam = lambda p: vol.chart_point(FC, p[0], p[1], p[2], phi * (1 + p[1]), psi * (1 + p[2] * p[0]))  # noqa: E731
    lo, hi = [2.0, 0.3, 0.4], [2.2, 0.45, 0.5]
    assert vol.stokes_check(fam, lo, hi).relative_error > 1e-2
    assert vol.stokes_check(fam, lo, hi, exact_primitive=True).relative_error < 1e-6


# -- face integral and divergence


@pytest.fixture(scope="module")
def face():
    ctx = AlgebraContext(4, "float", FACE_NAMES)
    return normalize_ideal_triple(*default_ideal_vertices(ctx))


@pytest.fixture(scope="module")
def bosonic_face():
    ctx = AlgebraContext(4, "float", FACE_NAMES)
    return normalize_ideal_triple(*default_ideal_vertices(ctx, bosonic=True))


def test_default_vertices_are_ideal(face):
    assert all(mk.classify(V) == "L+" for V in face)
    assert all((mk.inner(face[i], face[j]) - 2).max_abs() < 1e-12 for i, j in ((0, 1), (1, 2), (0, 2)))


def test_bosonic_face_has_no_fermionic_coefficients(bosonic_face):
    F = vol.face_integral(bosonic_face, 1e-2, smax=10)
    assert set(F.coefficients) <= {0}


def test_mu_rho_grows_as_eps_shrinks(face):
    a = abs(vol.face_integral(face, 1e-1).monomial([1, 2]))
    b = abs(vol.face_integral(face, 1e-2).monomial([1, 2]))
    assert b > 5 * a


def test_s_truncation_is_bounded(face):
    eps = 1e-3
    base = vol.face_integral(face, eps, smax=25).monomial([1, 2])
    doubled = vol.face_integral(face, eps, smax=50).monomial([1, 2])
    smaller_eps = vol.face_integral(face, eps / 10, smax=25).monomial([1, 2])
    assert abs(doubled - base) < 0.1 * abs(smaller_eps - base)


def _leading_coefficient(V):
    """Integral over s of lim t^2 f(s, t): the coefficient of 1/eps, by an independent quadrature."""
    u = complex(V[0].x.body).real
    t = np.array([1e-6])

    def lead(sigma):
        s = 2 * math.cosh(sigma)
        return (t[0] ** 2 * vol.face_integrand(V, s, t, "reduced", u)[MU_RHO, 0]).real * 2 * math.sinh(sigma)

    val, _ = integrate.quad(lead, math.acosh(1 + 5e-7), math.acosh(25), limit=200)
    return val


def test_one_over_eps_coefficient_matches_model(face):
    C = _leading_coefficient(face)
    eps = 1e-4
    I = vol.face_integral(face, eps).monomial([1, 2]).real
    assert abs(eps * I - C) < 1e-3 * abs(C)


def test_power_law_fit_on_model_integrand():
    # I(eps) = C (1/eps - 1/T) is the exact integral of C/t^2 over [eps, T]
    eps = [1e-1, 1e-2, 1e-3, 1e-4]
    vals = [3.0 * (1 / e - 1 / 2.0) for e in eps]
    p, r2 = vol.power_law_fit(eps, vals)
    assert -1.05 <= p <= -0.95 and r2 > 0.999


def test_fit_needs_four_values_over_two_decades(face):
    with pytest.raises(vol.FitFailure):
        vol.divergence_fit(face, [1e-1], [1, 2])
    with pytest.raises(vol.FitFailure):
        vol.divergence_fit(face, [1e-1, 8e-2, 5e-2, 2e-2], [1, 2])


def test_bosonic_fit_reports_no_exponent(bosonic_face):
    rep = vol.divergence_fit(bosonic_face, [1e-1, 1e-2, 1e-3, 1e-4], [1, 2], smax=10)
    assert rep.exponent is None
    assert rep.to_json()["fit"]["channel"] == "mu*rho"


def test_full_pullback_grows_faster(face):
    # u is not constant on the face, so the full pullback picks up an extra 1/t
    a = abs(vol.face_integral(face, 1e-2, integrand="full").monomial([1, 2]))
    b = abs(vol.face_integral(face, 1e-3, integrand="full").monomial([1, 2]))
    assert 50 < b / a < 200


def test_unknown_integrand(face):
    with pytest.raises(ValueError):
        vol.face_integrand(face, 3.0, np.array([0.1]), "other")
