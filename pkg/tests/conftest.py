import itertools

import pytest
from hypothesis import strategies as st

from confsup import fixtures
from confsup.core.complexes import build_complex


@st.composite
def small_complexes(draw, max_vertices=6, max_dim=2):
    """Random simplicial complexes on at most ``max_vertices`` vertices."""
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    candidates = [s for k in range(1, max_dim + 2) for s in itertools.combinations(range(n), k)]
    tops = draw(st.lists(st.sampled_from(candidates), min_size=1, max_size=8, unique=True))
    return build_complex(tops, name="random")


def int_matrices(max_rows=5, max_cols=5, bound=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


@pytest.fixture(scope="session")
def cover_table():
    return fixtures.covers()
