import math

import numpy as np
import pytest
from hypothesis import strategies as st

from psl2rigid import core


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def assert_entries_close(g, expected, tol):
    got = np.array(g.entries)
    want = np.array(expected, dtype=float).ravel()
    err = min(np.abs(got - want).max(), np.abs(got + want).max())
    assert err <= tol, f"{g} vs {expected}: error {err:.3e}"


finite = st.floats(min_value=-4.0, max_value=4.0, allow_nan=False, allow_infinity=False)


@st.composite
def elements(draw):
    """Random unimodular elements with moderately sized entries."""
    a, b, c = draw(finite), draw(finite), draw(finite)
    # solve for d when a is not tiny, otherwise use a rotation-scaled form
    if abs(a) < 0.1:
        t = draw(st.floats(min_value=0.0, max_value=math.pi))
        s = draw(st.floats(min_value=0.3, max_value=3.0))
        return core.from_entries(s * math.cos(t), s * math.sin(t), -math.sin(t) / s, math.cos(t) / s)
    d = (1.0 + b * c) / a
    return core.from_entries(a, b, c, d)


@st.composite
def moderate_elements(draw):
    """rotation(phi) diag(e^t, e^-t) [[1, s], [0, 1]] with |t|, |s| <= 1."""
    phi = draw(st.floats(min_value=0.0, max_value=math.pi))
    t = draw(st.floats(min_value=-1.0, max_value=1.0))
    s = draw(st.floats(min_value=-1.0, max_value=1.0))
    k = core.compose(core.rotation(phi), core.from_entries(math.exp(t), 0, 0, math.exp(-t)))
    return core.compose(k, core.from_entries(1, s, 0, 1))
