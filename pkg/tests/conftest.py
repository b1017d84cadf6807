from fractions import Fraction

import pytest
from hypothesis import strategies as st

from tsirelson_norms.spaces import make_tsirelson, make_V, make_W
from tsirelson_norms.vectors import FinVec
from tsirelson_norms.weights import geometric_alpha, geometric_theta

THETA = geometric_theta(Fraction(3, 4))
HALF_THETA = geometric_theta(Fraction(1, 2))
ALPHA = geometric_alpha(Fraction(1, 2))
ENTRIES = [Fraction(s, d) for d in (1, 2, 3) for s in (1, -1)]


def vectors(max_support=5, window=10, low=1):
    """Small random vectors with entries in {+-1, +-1/2, +-1/3}."""
    coords = st.dictionaries(
        st.integers(low, low + window - 1), st.sampled_from(ENTRIES), min_size=1, max_size=max_support
    )
    return coords.map(FinVec.from_dict)


@pytest.fixture
def core_laws():
    return {
        "V": make_V(THETA).law,
        "W1": make_W(THETA, 1).law,
        "T": make_tsirelson(Fraction(1, 2)).law,
    }
