import math

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from superhyp.grassmann import (
    AlgebraContext, ContextMismatch, DomainError, GaussianRational, OddInput, ZeroBody,
    absolute, acos, acosh, compare, cosh, exp, from_json, indices_to_mask, log,
    mask_to_indices, sign, sinh, sqrt, to_json,
)

from conftest import CTX, FCTX, invertible, numbers


def test_generators_anticommute_and_square_to_zero():
    t = CTX.gens()
    for i in range(len(t)):
        assert (t[i] * t[i]).is_zero()
        for j in range(len(t)):
            assert t[i] * t[j] == -(t[j] * t[i])


def test_monomial_ordering_sign():
    assert CTX.monomial([2, 1]) == -CTX.monomial([1, 2])
    assert CTX.monomial([1, 1]).is_zero()
    assert CTX.gen(3) * CTX.gen(1) * CTX.gen(2) == CTX.monomial([1, 2, 3])


def test_mask_roundtrip():
    for m in range(1 << 6):
        idx = mask_to_indices(m)
        assert indices_to_mask(idx) == (m, 1)
    assert indices_to_mask([3, 1]) == (0b101, -1)
    assert indices_to_mask([2, 2])[1] == 0


@given(numbers(), numbers(), numbers())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a + b == b + a
    assert a - a == CTX.zero()


@given(numbers(parity=0), numbers())
def test_even_elements_are_central(e, a):
    assert e * a == a * e


@given(numbers(parity=1), numbers(parity=1))
def test_odd_elements_anticommute(x, y):
    assert x * y == -(y * x)
    assert (x * x).is_zero()


@given(numbers(), numbers())
def test_conjugation_is_a_ring_map(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert a.conjugate().conjugate() == a


@given(numbers())
def test_real_and_imaginary_parts(a):
    i = GaussianRational(0, 1)
    assert a.real_part() + a.imag_part() * i == a
    assert a.real_part().is_real() and a.imag_part().is_real()


@given(invertible())
def test_inverse(a):
    assert a * a.invert() == CTX.one()
    assert a.invert() * a == CTX.one()


def test_zero_body_not_invertible():
    with pytest.raises(ZeroBody):
        CTX.monomial([1, 2]).invert()


def test_nilpotent_soul():
    s = CTX.gen(1) * CTX.gen(2) + CTX.gen(3) * CTX.gen(4) + CTX.gen(1) * CTX.gen(5)
    assert not (s ** 2).is_zero()
    assert (s ** 3).is_zero()


def test_parity_classification():
    assert CTX.gen(1).parity() == 1
    assert (CTX.gen(1) * CTX.gen(2)).parity() == 0
    assert (CTX.gen(1) + CTX.one()).parity() is None
    assert CTX.zero().is_even() and CTX.zero().is_odd()


def test_context_mismatch():
    other = AlgebraContext(3)
    with pytest.raises(ContextMismatch):
        CTX.gen(1) + other.gen(1)


def test_order_relation_uses_bodies():
    a = CTX.scalar(2) + CTX.monomial([1, 2], 100)
    assert compare(a, 3) == -1
    assert compare(a, CTX.scalar(2)) == 0
    assert sign(-a) == -1
    assert absolute(-a) == a
    with pytest.raises(DomainError):
        sign(CTX.scalar(GaussianRational(1, 1)))


# -- analytic lifts


def _soul(ctx):
    g = ctx.gens()
    return g[0] * g[1] * mpq(1, 3) + g[2] * g[3] * mpq(-2, 5) + g[0] * g[4] * mpq(1, 7)


def test_exact_sqrt_squares_back():
    a = CTX.scalar(mpq(9, 4)) + _soul(CTX)
    r = sqrt(a)
    assert r * r == a
    assert r.body == GaussianRational(mpq(3, 2))


def test_exact_sqrt_rejects_irrational_body():
    with pytest.raises(DomainError):
        sqrt(CTX.scalar(2) + _soul(CTX))


def test_exact_exp_log_at_special_bodies():
    s = _soul(CTX)
    assert log(exp(s)) == s
    assert exp(log(1 + s)) == 1 + s
    assert cosh(s) * cosh(s) - sinh(s) * sinh(s) == CTX.one()


def test_odd_argument_rejected():
    with pytest.raises(OddInput):
        exp(CTX.gen(1))


@given(st.floats(1.1, 5.0))
def test_float_inverse_functions(b):
    s = FCTX.to_float(_soul(CTX))
    a = FCTX.scalar(b) + s
    assert cosh(acosh(a)).close_to(a, 1e-12)
    c = FCTX.scalar(1 / b) + s
    y = acos(c)
    assert abs(complex(y.body).real - math.acos(1 / b)) < 1e-14
    # first order: d acos = -ds / sqrt(1 - c^2)
    lin = -complex(s.coefficient([1, 2])) / math.sqrt(1 - 1 / b**2)
    assert abs(complex(y.coefficient([1, 2])) - lin) < 1e-12
    r = sqrt(a)
    assert (r * r).close_to(a, 1e-12)
    assert exp(log(a)).close_to(a, 1e-12)


def test_float_log_matches_series_body():
    a = FCTX.scalar(math.e)
    assert abs(complex(log(a).body) - 1) < 1e-15


@given(numbers())
def test_json_roundtrip_exact(a):
    assert from_json(CTX, to_json(a)) == a


def test_json_is_canonical():
    a = CTX.monomial([2, 1], 3) + CTX.scalar(GaussianRational(1, -2))
    assert to_json(a) == [{"indices": [], "re": "1", "im": "-2"},
                          {"indices": [1, 2], "re": "-3", "im": "0"}]
