"""Finitely generated Grassmann algebras over the Gaussian rationals or C.

A :class:`GrassmannNumber` is a sparse map ``{monomial bitmask: coefficient}``
where bit ``i - 1`` set means the generator ``theta_i`` occurs.  Monomials are
always stored in increasing generator order, so the bitmask is canonical.

Two coefficient modes share one interface:

``exact``
    coefficients are :class:`GaussianRational` (pairs of ``gmpy2.mpq``), and
    equality is structural equality of canonical forms.
``float``
    coefficients are Python ``complex``.

Complex conjugation acts on coefficients only.  The generators are real and
the order of factors inside a monomial is *not* reversed, so for
``alpha = theta1 + i theta2`` one gets ``conj(alpha) * alpha = 2i theta1 theta2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Number

from gmpy2 import mpq

MAX_GENERATORS = 64
EXACT = "exact"
FLOAT = "float"


class GrassmannError(Exception):
    """Base class for algebra errors."""


class ContextMismatch(GrassmannError):
    pass


class ZeroBody(GrassmannError, ZeroDivisionError):
    pass


class DomainError(GrassmannError, ValueError):
    pass


class OddInput(GrassmannError, ValueError):
    pass


class ParityError(GrassmannError, ValueError):
    pass


# ---------------------------------------------------------------------------
# Gaussian rationals


def _to_mpq(x):
    if isinstance(x, bool):
        return mpq(int(x))
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if type(x).__name__ == "mpq":
        return x
    if type(x).__name__ == "mpz":
        return mpq(x)
    if isinstance(x, str):
        return mpq(x)
    raise TypeError(f"cannot represent {x!r} exactly as a rational")


class GaussianRational:
    """``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_mpq(re)
        self.im = _to_mpq(im)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("complex floats are not exact")
        if isinstance(x, float):
            raise TypeError("floats are not exact")
        return cls(x, 0)

    def __add__(self, o):
        o = GaussianRational.coerce(o)
        return _gq(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussianRational.coerce(o)
        return _gq(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussianRational.coerce(o) - self

    def __mul__(self, o):
        o = GaussianRational.coerce(o)
        if not self.im and not o.im:
            return _gq(self.re * o.re, self.im)
        return _gq(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return _gq(-self.re, -self.im)

    def __truediv__(self, o):
        o = GaussianRational.coerce(o)
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero")
        return self * _gq(o.re / n, -o.im / n)

    def __rtruediv__(self, o):
        return GaussianRational.coerce(o) / self

    def conjugate(self):
        return _gq(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        try:
            o = GaussianRational.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


def _gq(re, im):
    g = GaussianRational.__new__(GaussianRational)
    g.re = re
    g.im = im
    return g


# ---------------------------------------------------------------------------
# Monomial sign


@lru_cache(maxsize=1 << 20)
def _merge_sign(ma: int, mb: int) -> int:
    """Sign of the permutation sorting theta_{ma} theta_{mb} (disjoint masks)."""
    inversions = 0
    b = mb
    while b:
        low = b & -b
        inversions += bin(ma & ~((low << 1) - 1)).count("1")
        b ^= low
    return -1 if inversions & 1 else 1


def mask_to_indices(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def indices_to_mask(indices) -> tuple[int, int]:
    """Return ``(mask, sign)`` for the product of generators in the given order.

    ``sign`` is 0 if an index repeats.
    """
    mask = 0
    sign = 1
    for i in indices:
        bit = 1 << (i - 1)
        if mask & bit:
            return mask, 0
        sign *= _merge_sign(mask, bit)
        mask |= bit
    return mask, sign


# ---------------------------------------------------------------------------
# Context


@dataclass(frozen=True)
class AlgebraContext:
    """Grassmann algebra on ``generator_count`` real odd generators."""

    generator_count: int
    mode: str = EXACT
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if not 0 < self.generator_count <= MAX_GENERATORS:
            raise ValueError(f"generator_count must be in 1..{MAX_GENERATORS}")
        if self.mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown coefficient mode {self.mode!r}")
        if self.names is not None and len(self.names) != self.generator_count:
            raise ValueError("one name per generator")

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    def coeff(self, x):
        if self.exact:
            return GaussianRational.coerce(x)
        return complex(x)

    def scalar(self, x) -> GrassmannNumber:
        if isinstance(x, GrassmannNumber):
            x._check(self)
            return x
        c = self.coeff(x)
        return GrassmannNumber(self, {0: c} if c else {})

    def zero(self) -> GrassmannNumber:
        return GrassmannNumber(self, {})

    def one(self) -> GrassmannNumber:
        return self.scalar(1)

    def gen(self, i: int) -> GrassmannNumber:
        """The generator theta_i (1-based)."""
        if not 1 <= i <= self.generator_count:
            raise IndexError(f"generator {i} outside 1..{self.generator_count}")
        return GrassmannNumber(self, {1 << (i - 1): self.coeff(1)})

    def gens(self) -> list[GrassmannNumber]:
        return [self.gen(i) for i in range(1, self.generator_count + 1)]

    def monomial(self, indices, c=1) -> GrassmannNumber:
        mask, sign = indices_to_mask(indices)
        if max(indices, default=0) > self.generator_count:
            raise IndexError("generator index outside context")
        if sign == 0:
            return self.zero()
        c = self.coeff(c)
        return GrassmannNumber(self, {mask: c if sign > 0 else -c})

    def float_context(self) -> AlgebraContext:
        return AlgebraContext(self.generator_count, FLOAT, self.names)

    def to_float(self, a: GrassmannNumber) -> GrassmannNumber:
        ctx = self.float_context()
        return GrassmannNumber(ctx, {m: complex(c) for m, c in a.terms.items()})


# ---------------------------------------------------------------------------
# Numbers


class GrassmannNumber:
    """Immutable element of a finitely generated Grassmann algebra."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: dict):
        self.ctx = ctx
        self.terms = {m: c for m, c in terms.items() if c}

    # -- helpers
    def _check(self, ctx):
        if ctx is not self.ctx and ctx != self.ctx:
            raise ContextMismatch(f"{ctx} vs {self.ctx}")

    def _coerce(self, other):
        if isinstance(other, GrassmannNumber):
            other._check(self.ctx)
            return other
        if isinstance(other, (Number, GaussianRational)) or type(other).__name__ in ("mpq", "mpz"):
            return self.ctx.scalar(other)
        return NotImplemented

    # -- structure
    @property
    def body(self):
        return self.terms.get(0, self.ctx.coeff(0))

    @property
    def soul(self) -> GrassmannNumber:
        return GrassmannNumber(self.ctx, {m: c for m, c in self.terms.items() if m})

    def parity(self) -> int | None:
        """0 for even, 1 for odd, None if mixed.  Zero counts as even."""
        ps = {bin(m).count("1") & 1 for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def is_even(self) -> bool:
        return all(not (bin(m).count("1") & 1) for m in self.terms)

    def is_odd(self) -> bool:
        return all(bin(m).count("1") & 1 for m in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_real(self, tol: float = 0.0) -> bool:
        """True if fixed by conjugation (all coefficients real)."""
        if self.ctx.exact:
            return all(not c.im for c in self.terms.values())
        return all(abs(c.imag) <= tol for c in self.terms.values())

    def is_imaginary(self, tol: float = 0.0) -> bool:
        if self.ctx.exact:
            return all(not c.re for c in self.terms.values())
        return all(abs(c.real) <= tol for c in self.terms.values())

    def coefficient(self, indices=()):
        mask, sign = indices_to_mask(indices)
        c = self.terms.get(mask, self.ctx.coeff(0))
        return c if sign > 0 else -c

    def degree(self) -> int:
        return max((bin(m).count("1") for m in self.terms), default=0)

    def max_abs(self) -> float:
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)

    # -- ring operations
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return GrassmannNumber(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannNumber(self.ctx, {m: -c for m, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        sign = _merge_sign
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                c = ca * cb
                if sign(ma, mb) < 0:
                    c = -c
                m = ma | mb
                out[m] = out[m] + c if m in out else c
        return GrassmannNumber(self.ctx, out)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self

    def __truediv__(self, other):
        if isinstance(other, GrassmannNumber):
            return self * other.invert()
        other = self.ctx.coeff(other)
        if not other:
            raise ZeroDivisionError("division by zero")
        return GrassmannNumber(self.ctx, {m: c / other for m, c in self.terms.items()})

    def __rtruediv__(self, other):
        return self.ctx.scalar(other) * self.invert()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.invert() ** (-k)
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> GrassmannNumber:
        return GrassmannNumber(self.ctx, {m: c.conjugate() for m, c in self.terms.items()})

    def real_part(self) -> GrassmannNumber:
        return (self + self.conjugate()) / 2

    def imag_part(self) -> GrassmannNumber:
        """``(a - conj a) / 2i``; conjugation-fixed."""
        half_minus_i = GaussianRational(0, mpq(-1, 2)) if self.ctx.exact else -0.5j
        return (self - self.conjugate()) * half_minus_i

    def invert(self) -> GrassmannNumber:
        b = self.body
        if not b:
            raise ZeroBody("body is zero, element is not invertible")
        inv_b = self.ctx.coeff(1) / b
        x = self.soul * (-inv_b)  # nilpotent
        total = self.ctx.one()
        term = self.ctx.one()
        while True:
            term = term * x
            if term.is_zero():
                break
            total = total + term
        return total * inv_b

    # -- comparison
    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, GrassmannNumber) else other
        if other is NotImplemented:
            return NotImplemented
        if other.ctx != self.ctx:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def close_to(self, other, tol: float = 1e-10) -> bool:
        """Coefficient-wise closeness (absolute tolerance)."""
        d = self - other
        return d.max_abs() <= tol

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        names = self.ctx.names
        for m in sorted(self.terms, key=lambda m: (bin(m).count("1"), m)):
            c = self.terms[m]
            mono = "".join(names[i - 1] if names else f"θ{i}" for i in mask_to_indices(m))
            parts.append(f"{c}{'·' + mono if mono else ''}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Order relation on real bodies


def _real_body(a: GrassmannNumber):
    b = a.body
    if a.ctx.exact:
        if b.im:
            raise DomainError("order relation needs a real body")
        return b.re
    if b.imag != 0:
        raise DomainError("order relation needs a real body")
    return b.real


def compare(a, b) -> int:
    """-1, 0 or 1 according to the bodies; souls are ignored."""
    if not isinstance(a, GrassmannNumber):
        a = b.ctx.scalar(a)
    if not isinstance(b, GrassmannNumber):
        b = a.ctx.scalar(b)
    x, y = _real_body(a), _real_body(b)
    return (x > y) - (x < y)


def sign(a: GrassmannNumber) -> int:
    x = _real_body(a)
    return (x > 0) - (x < 0)


def absolute(a: GrassmannNumber) -> GrassmannNumber:
    s = sign(a)
    if s == 0:
        raise DomainError("absolute value undefined for zero body")
    return a if s > 0 else -a


# ---------------------------------------------------------------------------
# Analytic lifting  f(b + s) = sum_k f^(k)(b) s^k / k!


def _taylor(a: GrassmannNumber, coeffs) -> GrassmannNumber:
    """``sum_k coeffs(k) * soul**k``; coeffs(k) already contains the 1/k!."""
    s = a.soul
    total = a.ctx.scalar(coeffs(0))
    term = a.ctx.one()
    k = 0
    while True:
        k += 1
        term = term * s
        if term.is_zero():
            return total
        total = total + term * a.ctx.coeff(coeffs(k))


def _exact_sqrt(q):
    """Exact square root of a non-negative rational, or None."""
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(int(num)), math.isqrt(int(den))
    if rn * rn == num and rd * rd == den:
        return mpq(rn, rd)
    return None


def _body_real(a, f):
    b = a.body
    if a.ctx.exact:
        if b.im:
            raise DomainError(f"{f} needs a real body")
        return b.re
    if b.imag != 0:
        raise DomainError(f"{f} needs a real body")
    return b.real


def _inexact(f):
    return DomainError(f"{f} of this body is irrational; use float mode")


def _sqrt(a):
    b = _body_real(a, "sqrt")
    if b <= 0:
        raise DomainError("sqrt needs a positive body")
    if a.ctx.exact:
        r = _exact_sqrt(b)
        if r is None:
            raise _inexact("sqrt")
    else:
        r = math.sqrt(b)

    def c(k):
        # binom(1/2, k) * r / b**k
        num = 1
        for j in range(k):
            num *= (Fraction(1, 2) - j)
        coef = Fraction(num) / math.factorial(k)
        if a.ctx.exact:
            return mpq(coef.numerator, coef.denominator) * r / b**k
        return float(coef) * r / b**k

    return _taylor(a, c)


def _log(a):
    b = _body_real(a, "log")
    if b <= 0:
        raise DomainError("log needs a positive body")
    if a.ctx.exact and b != 1:
        raise _inexact("log")
    logb = 0 if a.ctx.exact else math.log(b)

    def c(k):
        if k == 0:
            return logb
        return (-1) ** (k + 1) / (mpq(k) * b**k if a.ctx.exact else k * b**k)

    return _taylor(a, c)


def _exp_like(a, name):
    b = a.body
    if a.ctx.exact:
        if b:
            raise _inexact(name)
        vals = {"exp": (1, 1), "cosh": (1, 0), "sinh": (0, 1), "cos": (1, 0), "sin": (0, 1)}[name]
        even, odd = vals
    else:
        z = complex(b)
        if name == "exp":
            even = odd = cmath.exp(z)
        elif name in ("cosh", "sinh"):
            ch, sh = cmath.cosh(z), cmath.sinh(z)
            even, odd = (ch, sh) if name == "cosh" else (sh, ch)
        else:
            cs, sn = cmath.cos(z), cmath.sin(z)
            even, odd = (cs, -sn) if name == "cos" else (sn, cs)
        if b.imag == 0:
            even, odd = complex(even.real), complex(odd.real)
    trig = name in ("cos", "sin")

    def c(k):
        v = even if k % 2 == 0 else odd
        if trig and k % 4 >= 2:
            v = -v
        return v / math.factorial(k) if not a.ctx.exact else mpq(v, math.factorial(k))

    return _taylor(a, c)


def _newton_inverse(a, y0, forward, forward_deriv):
    """Solve forward(y) = a for even y with body y0; nilpotency makes this finite."""
    y = a.ctx.scalar(y0)
    for _ in range(a.ctx.generator_count + 2):
        r = forward(y) - a
        if r.is_zero() or (not a.ctx.exact and r.max_abs() < 1e-300):
            break
        y = y - r * forward_deriv(y).invert()
    return y


def _acosh(a):
    b = _body_real(a, "acosh")
    if not b > 1:
        raise DomainError("acosh needs body > 1")
    if a.ctx.exact:
        raise _inexact("acosh")
    return _newton_inverse(a, math.acosh(b), lambda y: _exp_like(y, "cosh"), lambda y: _exp_like(y, "sinh"))


def _acos(a):
    b = _body_real(a, "acos")
    if not -1 < b < 1:
        raise DomainError("acos needs |body| < 1")
    if a.ctx.exact:
        raise _inexact("acos")
    return _newton_inverse(a, math.acos(b), lambda y: _exp_like(y, "cos"), lambda y: -_exp_like(y, "sin"))


ANALYTIC = {
    "sqrt": _sqrt,
    "exp": lambda a: _exp_like(a, "exp"),
    "log": _log,
    "cosh": lambda a: _exp_like(a, "cosh"),
    "sinh": lambda a: _exp_like(a, "sinh"),
    "acosh": _acosh,
    "acos": _acos,
}


def lift_analytic(f: str, a: GrassmannNumber) -> GrassmannNumber:
    """Apply a named analytic function to an even Grassmann number.

    The result is the (finite) Taylor expansion about the body, on the
    principal branch.
    """
    if f not in ANALYTIC:
        raise ValueError(f"unknown function {f!r}; choose from {sorted(ANALYTIC)}")
    if not a.is_even():
        raise OddInput(f"{f} needs an even argument")
    return ANALYTIC[f](a)


def sqrt(a):
    return lift_analytic("sqrt", a)


def exp(a):
    return lift_analytic("exp", a)


def log(a):
    return lift_analytic("log", a)


def cosh(a):
    return lift_analytic("cosh", a)


def sinh(a):
    return lift_analytic("sinh", a)


def acosh(a):
    return lift_analytic("acosh", a)


def acos(a):
    return lift_analytic("acos", a)


# ---------------------------------------------------------------------------
# Serialization


def _coeff_to_json(c, exact):
    if exact:
        return str(c.re), str(c.im)
    return float(c.real), float(c.imag)


def to_json(a: GrassmannNumber) -> list[dict]:
    out = []
    for m in sorted(a.terms, key=lambda m: (bin(m).count("1"), mask_to_indices(m))):
        re, im = _coeff_to_json(a.terms[m], a.ctx.exact)
        out.append({"indices": mask_to_indices(m), "re": re, "im": im})
    return out


def from_json(ctx: AlgebraContext, data) -> GrassmannNumber:
    total = ctx.zero()
    for term in data:
        if ctx.exact:
            c = GaussianRational(mpq(str(term.get("re", "0"))), mpq(str(term.get("im", "0"))))
        else:
            c = complex(float(term.get("re", 0)), float(term.get("im", 0)))
        total = total + ctx.monomial(term["indices"], c)
    return total
