import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

H2 = np.array([[1.0, 1.0], [1.0, -1.0]])


@pytest.fixture
def h2():
    return H2.copy()


def sign_matrices(max_m=4, max_n=4, min_m=1, min_n=1):
    shapes = st.tuples(st.integers(min_m, max_m), st.integers(min_n, max_n))
    return shapes.flatmap(lambda s: hnp.arrays(np.float64, s, elements=st.sampled_from([-1.0, 1.0])))


def real_matrices(max_m=6, max_n=6, bound=10.0):
    shapes = st.tuples(st.integers(1, max_m), st.integers(1, max_n))
    elems = st.floats(-bound, bound, allow_nan=False, allow_infinity=False, width=64)
    return shapes.flatmap(lambda s: hnp.arrays(np.float64, s, elements=elems))


def low_rank(rng, m, n, r):
    return rng.standard_normal((m, r)) @ rng.standard_normal((r, n))


def block_sign_matrix(m, n, r, seed):
    """Sign matrix whose rows repeat r random patterns (rank <= r)."""
    rng = np.random.default_rng(seed)
    rows = np.where(rng.random((r, n)) < 0.5, -1.0, 1.0)
    return rows[rng.integers(0, r, m)]
