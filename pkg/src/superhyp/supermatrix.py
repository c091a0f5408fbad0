"""(2|1)x(2|1) supermatrices and the complex orthosymplectic group OSp(1|2).

Block layout, even entries lower-case and odd entries Greek::

    ( a      b      alpha )
    ( c      d      beta  )
    ( gamma  delta  f     )

There is exactly one product, :func:`sm_mul`, which puts a minus sign on
every odd-times-odd contribution.  It is used for group elements and for
point matrices alike.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import sampling
from .grassmann import (
    AlgebraContext,
    GrassmannNumber,
    ParityError,
    ZeroBody,
    from_json,
    to_json,
)

EVEN_SLOTS = ("a", "b", "c", "d", "f")
ODD_SLOTS = ("alpha", "beta", "gamma", "delta")
SLOTS = ("a", "b", "alpha", "c", "d", "beta", "gamma", "delta", "f")
FLOAT_TOL = 1e-10


class NotOrthosymplectic(ValueError):
    pass


@dataclass(frozen=True)
class SuperMatrix:
    a: GrassmannNumber
    b: GrassmannNumber
    alpha: GrassmannNumber
    c: GrassmannNumber
    d: GrassmannNumber
    beta: GrassmannNumber
    gamma: GrassmannNumber
    delta: GrassmannNumber
    f: GrassmannNumber

    def __post_init__(self):
        for name in EVEN_SLOTS:
            if not getattr(self, name).is_even():
                raise ParityError(f"entry {name} must be even")
        for name in ODD_SLOTS:
            if not getattr(self, name).is_odd():
                raise ParityError(f"entry {name} must be odd")

    @property
    def ctx(self) -> AlgebraContext:
        return self.a.ctx

    def entries(self) -> tuple[GrassmannNumber, ...]:
        return tuple(getattr(self, s) for s in SLOTS)

    def rows(self):
        e = self.entries()
        return [e[0:3], e[3:6], e[6:9]]

    def __matmul__(self, other):
        return sm_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def close_to(self, other: SuperMatrix, tol: float = FLOAT_TOL) -> bool:
        return all(x.close_to(y, tol) for x, y in zip(self.entries(), other.entries()))

    def conjugate(self) -> SuperMatrix:
        return SuperMatrix(*(x.conjugate() for x in self.entries()))

    def map(self, fn) -> SuperMatrix:
        return SuperMatrix(*(fn(x) for x in self.entries()))

    def body_block(self) -> np.ndarray:
        """Bodies of the even 2x2 block as a complex array."""
        return np.array([[complex(self.a.body), complex(self.b.body)],
                         [complex(self.c.body), complex(self.d.body)]])

    def __repr__(self):
        rows = ["  ".join(repr(x) for x in r) for r in self.rows()]
        return "SuperMatrix(\n  " + "\n  ".join(rows) + "\n)"


def from_rows(rows) -> SuperMatrix:
    (a, b, al), (c, d, be), (ga, de, f) = rows
    return SuperMatrix(a, b, al, c, d, be, ga, de, f)


def constant(ctx: AlgebraContext, rows) -> SuperMatrix:
    """SuperMatrix from a 3x3 array of scalars (odd slots must be zero)."""
    return from_rows([[ctx.scalar(x) for x in r] for r in rows])


def identity(ctx: AlgebraContext) -> SuperMatrix:
    return constant(ctx, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def J_matrix(ctx: AlgebraContext) -> SuperMatrix:
    return constant(ctx, [[0, -1, 0], [1, 0, 0], [0, 0, 1]])


def sm_mul(g1: SuperMatrix, g2: SuperMatrix) -> SuperMatrix:
    """The signed product: odd*odd contributions enter with a minus sign."""
    a1, b1, al1, c1, d1, be1, ga1, de1, f1 = g1.entries()
    a2, b2, al2, c2, d2, be2, ga2, de2, f2 = g2.entries()
    return SuperMatrix(
        a1 * a2 + b1 * c2 - al1 * ga2,
        a1 * b2 + b1 * d2 - al1 * de2,
        a1 * al2 + b1 * be2 + al1 * f2,
        c1 * a2 + d1 * c2 - be1 * ga2,
        c1 * b2 + d1 * d2 - be1 * de2,
        c1 * al2 + d1 * be2 + be1 * f2,
        ga1 * a2 + de1 * c2 + f1 * ga2,
        ga1 * b2 + de1 * d2 + f1 * de2,
        -ga1 * al2 - de1 * be2 + f1 * f2,
    )


def super_transpose(g: SuperMatrix) -> SuperMatrix:
    return SuperMatrix(g.a, g.c, g.gamma, g.b, g.d, g.delta, -g.alpha, -g.beta, g.f)


def dagger(g: SuperMatrix) -> SuperMatrix:
    """Conjugate super transpose."""
    return super_transpose(g).conjugate()


def berezinian(g: SuperMatrix) -> GrassmannNumber:
    if not g.f.body:
        raise ZeroBody("f has zero body")
    fi = g.f.invert()
    a = g.a + fi * g.alpha * g.gamma
    b = g.b + fi * g.alpha * g.delta
    c = g.c + fi * g.beta * g.gamma
    d = g.d + fi * g.beta * g.delta
    return fi * (a * d - b * c)


sdet = berezinian


@dataclass
class Certificate:
    """Outcome of a membership check; truthy iff every condition held."""

    ok: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _vanishes(x: GrassmannNumber, tol) -> bool:
    if x.ctx.exact:
        return x.is_zero()
    return x.max_abs() <= tol


def is_orthosymplectic(g: SuperMatrix, tol: float = FLOAT_TOL) -> Certificate:
    """Check sdet g = 1 and g^st J g = J."""
    failures = []
    try:
        if not _vanishes(berezinian(g) - 1, tol):
            failures.append("sdet")
    except ZeroBody:
        failures.append("sdet: f not invertible")
    J = J_matrix(g.ctx)
    lhs = sm_mul(super_transpose(g), sm_mul(J, g))
    for name, x, y in zip(SLOTS, lhs.entries(), J.entries()):
        if not _vanishes(x - y, tol):
            failures.append(f"st J g: {name}")
    return Certificate(not failures, failures)


def defining_relations(g: SuperMatrix) -> dict[str, GrassmannNumber]:
    """Residuals of the six defining relations plus alpha*beta = gamma*delta."""
    a, b, al, c, d, be, ga, de, f = g.entries()
    res = {
        "alpha = b gamma - a delta": al - (b * ga - a * de),
        "beta = d gamma - c delta": be - (d * ga - c * de),
        "f = 1 + alpha beta": f - (1 + al * be),
        "gamma = a beta - c alpha": ga - (a * be - c * al),
        "delta = b beta - d alpha": de - (b * be - d * al),
        "alpha beta = gamma delta": al * be - ga * de,
    }
    try:
        res["1/f = ad - bc"] = f.invert() - (a * d - b * c)
    except ZeroBody:
        res["1/f = ad - bc"] = g.ctx.one()
    return res


class OspElement(SuperMatrix):
    """A SuperMatrix certified on construction to lie in OSp(1|2)."""

    def __post_init__(self):
        super().__post_init__()
        cert = is_orthosymplectic(self)
        if not cert:
            raise NotOrthosymplectic(", ".join(cert.failures))

    @classmethod
    def certify(cls, g: SuperMatrix) -> OspElement:
        return cls(*g.entries())

    def __matmul__(self, other):
        prod = sm_mul(self, other)
        if isinstance(other, OspElement):
            return OspElement.certify(prod)
        return prod


def make_u(alpha: GrassmannNumber, beta: GrassmannNumber) -> OspElement:
    """u(alpha, beta): the fermionic factor of the factorization."""
    if not (alpha.is_odd() and beta.is_odd()):
        raise ParityError("u(alpha, beta) needs odd arguments")
    ab = alpha * beta
    one = alpha.ctx.one()
    zero = alpha.ctx.zero()
    return OspElement(one - ab / 2, zero, alpha, zero, one - ab / 2, beta, beta, -alpha, one + ab)


def lift_sl2(a, b, c, d, ctx: AlgebraContext | None = None) -> OspElement:
    """Block-diagonal embedding of an even 2x2 matrix of determinant one."""
    ctx = ctx or next(x.ctx for x in (a, b, c, d) if isinstance(x, GrassmannNumber))
    a, b, c, d = (ctx.scalar(x) for x in (a, b, c, d))
    det = a * d - b * c
    if not _vanishes(det - 1, FLOAT_TOL):
        raise NotOrthosymplectic(f"determinant {det!r} is not 1")
    zero = ctx.zero()
    return OspElement(a, b, zero, c, d, zero, zero, zero, ctx.one())


def factorize(g: SuperMatrix):
    """Split g = lift_sl2(a,b,c,d) * u(alpha, beta).

    Returns ``(sl2_part, alpha, beta)``.  Since det of the bosonic factor is 1,
    alpha*beta equals g.alpha*g.beta and the bosonic block of g is the
    bosonic factor times (1 - alpha*beta/2).
    """
    scale = (1 - g.alpha * g.beta / 2).invert()
    a, b, c, d = g.a * scale, g.b * scale, g.c * scale, g.d * scale
    alpha = d * g.alpha - b * g.beta
    beta = a * g.beta - c * g.alpha
    return lift_sl2(a, b, c, d), alpha, beta


def reconstruct(sl2_part: SuperMatrix, alpha, beta) -> SuperMatrix:
    return sm_mul(sl2_part, make_u(alpha, beta))


def reconstruct_left(sl2_part: SuperMatrix, alpha, beta) -> SuperMatrix:
    """u(a alpha + b beta, c alpha + d beta) * sl2_part."""
    s = sl2_part
    return sm_mul(make_u(s.a * alpha + s.b * beta, s.c * alpha + s.d * beta), s)


def random_osp(ctx: AlgebraContext, seed, gens) -> OspElement:
    """lift_sl2(random rational block) * u(alpha, beta), alpha/beta odd over ``gens``.

    ``d`` is solved from ``ad - bc = 1`` so the body block is exactly unimodular.
    """
    rng = sampling.as_rng(seed)
    gens = sampling.check_gens(ctx, gens)
    a = sampling.coefficient(ctx, rng, nonzero=True)
    b = sampling.coefficient(ctx, rng)
    c = sampling.coefficient(ctx, rng)
    d = (1 + b * c) / a
    alpha = sampling.odd(ctx, rng, gens)
    beta = sampling.odd(ctx, rng, gens)
    return OspElement.certify(sm_mul(lift_sl2(a, b, c, d, ctx=ctx), make_u(alpha, beta)))


# ---------------------------------------------------------------------------
# Lie superalgebra osp(1|2) on numeric basis matrices


def _E(i, j):
    m = np.zeros((3, 3), dtype=int)
    m[i - 1, j - 1] = 1
    return m


LIE_BASIS = {
    "v+": _E(1, 3) - _E(3, 2),
    "v-": _E(2, 3) + _E(3, 1),
    "h": _E(1, 1) - _E(2, 2),
}
HAT_BASIS = {
    "v+^": _E(1, 3) + _E(3, 2),
    "v-^": _E(2, 3) - _E(3, 1),
    "h^": _E(1, 1) + _E(2, 2),
}
ODD_GENERATORS = {"v+", "v-"}
J_NUMERIC = -_E(1, 2) + _E(2, 1) + _E(3, 3)
_PARITY = (0, 0, 1)


def numeric_sm_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """The signed product applied to plain numeric 3x3 arrays."""
    out = A @ B
    for i in range(3):
        for k in range(3):
            for j in range(3):
                if _PARITY[i] == _PARITY[k] != _PARITY[j]:
                    out[i, k] -= 2 * A[i, j] * B[j, k]
    return out


def numeric_st(A: np.ndarray) -> np.ndarray:
    (a, b, al), (c, d, be), (ga, de, f) = A
    return np.array([[a, c, ga], [b, d, de], [-al, -be, f]])


def bracket(A, B, odd_a: bool, odd_b: bool, mul=np.matmul):
    """Super commutator: anticommutator iff both arguments are odd."""
    if odd_a and odd_b:
        return mul(A, B) + mul(B, A)
    return mul(A, B) - mul(B, A)


def derived_X():
    """X+ and X- from [v+,v+] = -2X+ and [v-,v-] = 2X-."""
    vp, vm = LIE_BASIS["v+"], LIE_BASIS["v-"]
    return -bracket(vp, vp, True, True) // 2, bracket(vm, vm, True, True) // 2


def lie_basis():
    Xp, Xm = derived_X()
    return dict(LIE_BASIS, **{"X+": Xp, "X-": Xm})


def lie_relations_check() -> dict:
    """Evaluate the osp(1|2) bracket relations and the infinitesimal membership condition.

    Brackets use the ordinary matrix product; the signed group product is
    reported alongside for comparison (it flips the sign of [v+, v-]).
    """
    basis = lie_basis()
    vp, vm, h = basis["v+"], basis["v-"], basis["h"]
    Xp, Xm = basis["X+"], basis["X-"]
    J = J_NUMERIC
    report = {"X+": Xp.tolist(), "X-": Xm.tolist(), "relations": {}, "signed_product": {},
              "membership": {}, "additive_functional_equation": {}}
    for label, mul, key in [("plain", np.matmul, "relations"), ("signed", numeric_sm_mul, "signed_product")]:
        rel = report[key]
        rel["[h,v+] = v+"] = bool((bracket(h, vp, False, True, mul) == vp).all())
        rel["[h,v-] = -v-"] = bool((bracket(h, vm, False, True, mul) == -vm).all())
        rel["[v+,v+] = -2X+"] = bool((bracket(vp, vp, True, True, mul) == -2 * Xp).all())
        rel["[v-,v-] = 2X-"] = bool((bracket(vm, vm, True, True, mul) == 2 * Xm).all())
        rel["[v+,v-] = h"] = bool((bracket(vp, vm, True, True, mul) == h).all())
    for name, A in basis.items():
        report["membership"][name] = bool(not (numeric_st(A) @ J + J @ A).any())
        report["additive_functional_equation"][name] = bool(not (A + J @ numeric_st(A)).any())
    # real case: B = psi v+ - phi v- + x h + x2 X+ - x1 X-  should give A = JB in point layout
    x1, x2, x, phi, psi = 2, 3, 5, 7, 11
    B = psi * vp - phi * vm + x * h + x2 * Xp - x1 * Xm
    report["A = JB consistent"] = bool(
        (J @ B == np.array([[x1, x, phi], [x, x2, psi], [-phi, -psi, 0]])).all())
    report["ok"] = all(report["relations"].values()) and all(report["membership"].values())
    return report


def decompose_vector(A: SuperMatrix) -> dict[str, GrassmannNumber]:
    """Coefficients of J^-1 A over {v+, v+^, v-, v-^, h, h^, X+, X-}.

    ``A`` must have the point layout (x1, xbar, phi / x, x2, psi / -phibar, -psibar, *).
    The coefficient attached to a hatted matrix already includes the factor i,
    so ``reconstruct_vector`` is a plain linear combination.
    """
    x1, xb, phi, x, x2, psi, mphib, mpsib, _ = A.entries()
    if not ((xb - x.conjugate()).is_zero() and (mphib + phi.conjugate()).is_zero()
            and (mpsib + psi.conjugate()).is_zero()):
        raise ValueError("matrix is not in point layout")
    if not (x1.is_real() and x2.is_real()):
        raise ValueError("diagonal entries must be real")
    re = lambda z: (z + z.conjugate()) / 2  # noqa: E731
    ire = lambda z: (z - z.conjugate()) / 2  # noqa: E731  (i * Im z)
    return {
        "v+": re(psi), "v+^": ire(psi),
        "v-": -re(phi), "v-^": -ire(phi),
        "h": re(x), "h^": ire(x),
        "X+": x2, "X-": -x1,
    }


def reconstruct_vector(ctx: AlgebraContext, coeffs: dict) -> list[list[GrassmannNumber]]:
    """Entrywise sum of coefficient times basis matrix, as a 3x3 nested list."""
    basis = dict(lie_basis(), **HAT_BASIS)
    out = [[ctx.zero() for _ in range(3)] for _ in range(3)]
    for name, coef in coeffs.items():
        M = basis[name]
        for i in range(3):
            for j in range(3):
                if M[i, j]:
                    out[i][j] = out[i][j] + coef * int(M[i, j])
    return out


def j_inverse_times(A: SuperMatrix) -> list[list[GrassmannNumber]]:
    """J^-1 A entrywise (J is a signed permutation so no signs from odd products)."""
    r1, r2, r3 = A.rows()
    return [list(r2), [-x for x in r1], list(r3)]


# ---------------------------------------------------------------------------
# JSON


def matrix_to_json(g: SuperMatrix) -> dict:
    return {name: to_json(getattr(g, name)) for name in SLOTS}


def matrix_from_json(ctx: AlgebraContext, data: dict, cls=SuperMatrix) -> SuperMatrix:
    return cls(*(from_json(ctx, data[name]) for name in SLOTS))


__all__ = [
    "SuperMatrix", "OspElement", "sm_mul", "super_transpose", "dagger", "berezinian", "sdet",
    "is_orthosymplectic", "make_u", "lift_sl2", "factorize", "random_osp", "lie_relations_check",
    "decompose_vector", "identity", "J_matrix",
]
