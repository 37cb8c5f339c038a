import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from arcticpaths.boundary import StartSequence

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def sequences(draw, n_max=8, an_max=20, n_min=1):
    n = draw(st.integers(n_min, n_max))
    an = draw(st.integers(max(n, 1), an_max))
    inner = draw(st.lists(st.integers(1, an - 1), min_size=n - 1, max_size=n - 1, unique=True)) \
        if n > 1 else []
    return StartSequence((0, *sorted(inner), an))


def random_sequence(rng: random.Random, n_max=8, an_max=20, n_min=1) -> StartSequence:
    n = rng.randint(n_min, n_max)
    an = rng.randint(n, an_max)
    return StartSequence((0, *sorted(rng.sample(range(1, an), n - 1)), an))


@pytest.fixture
def rng():
    return random.Random(20261016)
