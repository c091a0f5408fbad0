import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from superhyp import minkowski as mk
from superhyp.grassmann import AlgebraContext, GaussianRational, ParityError
from superhyp.sampling import constrained_point, ih_point, light_point, odd
from superhyp.suite import trial_pair
from superhyp.supermatrix import lift_sl2, make_u, random_osp, sm_mul

CTX = AlgebraContext(8)
seeds = st.integers(0, 10**6)


def pair(seed):
    return trial_pair(CTX, "mk", seed)


def zero(r):
    return r.is_zero()


@given(seeds)
def test_invariance_with_invariant_theta(seed):
    g, P = pair(seed)
    res = mk.act(g, P)
    assert mk.quadratic_form(res.point) == mk.quadratic_form(P)


@given(seeds)
def test_ffbar_theta_defect_is_known_quartic(seed):
    # the ffbar corner misses the quadratic by 1/2 ab abbar (phi psi + conj)
    g, P = pair(seed)
    th = mk.theta(g, P, "ffbar").value
    ab, abb = g.alpha * g.beta, g.alpha.conjugate() * g.beta.conjugate()
    expected = ab * abb * (P.phi * P.psi + P.phi.conjugate() * P.psi.conjugate()) / 2
    assert mk.delta_quadratic(g, P, th) == expected
    assert mk.invariance_defect(g, P, th) == expected


def test_sabotaged_theta_breaks_invariance():
    broke = 0
    for seed in range(5):
        g, P = pair(seed)
        th = mk.theta(g, P, "x-only").value
        broke += not zero(mk.delta_quadratic(g, P, th))
    assert broke == 5


@given(seeds)
def test_dual_path_action(seed):
    g, P = pair(seed)
    for rule in ("invariant", "ffbar"):
        assert mk.act(g, P, rule).point == mk.act_explicit(g, P, rule).point


@given(seeds)
def test_theta_is_imaginary_and_formulas_agree(seed):
    g, P = pair(seed)
    for rule in ("invariant", "ffbar"):
        t = mk.theta(g, P, rule)
        assert t.factored == t.expanded
        assert t.value.conjugate() == -t.value


@given(seeds)
def test_corner_is_minus_theta(seed):
    g, P = pair(seed)
    rel = mk.corner_relations(g, P)
    assert zero(rel["theta' = -theta"])


def test_corner_is_not_minus_two_theta():
    g, P = pair(3)
    assert not zero(mk.corner_relations(g, P)["theta' = -2 theta"])


@given(seeds)
def test_expansion_identities(seed):
    g, P = pair(seed)
    th = mk.theta(g, P, "ffbar").value  # the identities hold for any imaginary corner
    for fn in (mk.bosonic_expansion, mk.fermionic_expansion, mk.grouped_expansion):
        assert all(map(zero, fn(g, P, th).values())), fn.__name__
    assert all(map(zero, mk.pure_imaginary_suite(g, P).values()))
    assert mk.delta_quadratic(g, P, th) == mk.delta_quadratic_expanded(g, P, th)


@given(seeds)
def test_closed_form_transformation_rules(seed):
    g, P = pair(seed)
    for rule in ("invariant", "ffbar"):
        cor = mk.corollary_identities(g, P, rule)
        for key in ("bosons 11", "bosons 12", "bosons 21", "bosons 22",
                    "fermions (1) completed", "fermions (2) completed"):
            assert zero(cor[key]), (rule, key)
        assert all(map(zero, mk.transformation_general_forms(g, P, rule).values()))
    assert zero(mk.corollary_identities(g, P, "ffbar")["-2 theta"])


def test_closed_form_fermion_rows_fail_generically():
    g, P = pair(11)
    cor = mk.corollary_identities(g, P, "ffbar")
    assert not zero(cor["fermions (1)"]) and not zero(cor["fermions (2)"])


@given(seeds)
def test_right_action_with_bosonic_factor(seed):
    rng = random.Random(seed)
    g1 = random_osp(CTX, rng, [1, 2, 3])
    g2 = lift_sl2(2, 1, 3, 2, ctx=CTX)
    P = constrained_point(CTX, rng, 1, [4, 5], [6, 7])
    assert mk.composition_check(g1, g2, P)["right action"]
    assert mk.composition_check(g2, g1, P)["right action"]


def test_composition_of_two_fermionic_factors_is_not_an_action():
    rng = random.Random(5)
    g1 = make_u(odd(CTX, rng, [1, 2]), odd(CTX, rng, [3, 4]))
    g2 = make_u(odd(CTX, rng, [5, 6]), odd(CTX, rng, [7, 8]))
    P = constrained_point(CTX, rng, 1, [1, 3], [5, 7])
    res = mk.composition_check(g1, g2, P)
    assert not res["right action"] and not res["left action"]


@given(seeds)
def test_real_restriction(seed):
    rng = random.Random(seed)
    a, b, c = (mpq(rng.randint(1, 6), rng.randint(1, 6)) for _ in range(3))
    sl2 = lift_sl2(a, b, c, (1 + b * c) / a, ctx=CTX)
    h = sm_mul(sl2, make_u(odd(CTX, rng, [1, 2], real=True), odd(CTX, rng, [3, 4], real=True)))
    P = constrained_point(CTX, rng, 1, [], [], real_x=True)
    P = P.with_fermions(odd(CTX, rng, [5, 6], real=True), odd(CTX, rng, [2, 7], real=True))
    assert all(mk.real_restriction_check(h, P).values())


def test_classification():
    rng = random.Random(0)
    assert mk.classify(ih_point(CTX, rng, [1, 2], [3, 4])) == "IH"
    assert mk.classify(light_point(CTX, rng, [1], [2])) == "L+"
    P = constrained_point(CTX, rng, -1, [], [])
    assert mk.classify(P) == "H"
    Q = mk.SuperPoint.make(CTX, -1, -1, 0)
    assert mk.classify(Q) is None


def test_quadratic_form_value_and_kappa_pairing():
    P = mk.SuperPoint.make(CTX, 2, 3, GaussianRational(1, 1), CTX.gen(1), CTX.gen(2))
    q = mk.quadratic_form(P)
    assert q.body == GaussianRational(4)
    assert mk.inner(P, P) == q


def test_point_parity_and_reality_checks():
    with pytest.raises(ParityError):
        mk.SuperPoint.make(CTX, 1, 1, 0, CTX.one(), None)
    with pytest.raises(ValueError):
        mk.SuperPoint.make(CTX, GaussianRational(1, 1), 1, 0)


@given(seeds)
def test_point_json_round_trip(seed):
    _, P = pair(seed)
    assert mk.point_from_json(CTX, mk.point_to_json(P)) == P


def test_point_json_accepts_plain_numbers():
    P = mk.point_from_json(CTX, {"x1": 2, "x2": "1/2", "x": 0})
    assert P.x2 == CTX.scalar(mpq(1, 2))
