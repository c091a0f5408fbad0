import random

import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from superhyp.grassmann import AlgebraContext, GaussianRational, GrassmannNumber

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

N = 5
CTX = AlgebraContext(N)
FCTX = CTX.float_context()


def rationals(bound=6):
    return st.builds(lambda p, q: mpq(p, q), st.integers(-bound, bound), st.integers(1, bound))


def gaussian(bound=6):
    return st.builds(GaussianRational, rationals(bound), rationals(bound))


@st.composite
def numbers(draw, ctx=CTX, parity=None, max_terms=6):
    """Exact Grassmann numbers; parity 0/1 restricts to even/odd monomials."""
    masks = list(range(1 << ctx.generator_count))
    if parity is not None:
        masks = [m for m in masks if bin(m).count("1") % 2 == parity]
    chosen = draw(st.lists(st.sampled_from(masks), max_size=max_terms, unique=True))
    return GrassmannNumber(ctx, {m: draw(gaussian()) for m in chosen})


@st.composite
def invertible(draw, ctx=CTX):
    a = draw(numbers(ctx))
    body = draw(gaussian().filter(bool))
    return a.soul + ctx.scalar(body)


@pytest.fixture
def ctx():
    return CTX


@pytest.fixture
def rng():
    return random.Random(1234)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
