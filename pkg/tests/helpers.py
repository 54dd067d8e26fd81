"""Shared strategies and generators for the test suite."""

import numpy as np
from hypothesis import assume
from hypothesis import strategies as st

from pgfmetrics import DiscreteDist, make_dist


@st.composite
def prob_vectors(draw, max_k: int = 12) -> DiscreteDist:
    """Normalized non-negative vectors on {0, ..., K}, K <= max_k."""
    k = draw(st.integers(min_value=0, max_value=max_k))
    raw = draw(
        st.lists(
            st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
            min_size=k + 1,
            max_size=k + 1,
        )
    )
    total = sum(raw)
    assume(total > 1e-3)
    return make_dist(np.asarray(raw) / total)


def equal_mean_triple(rng: np.random.Generator) -> tuple[DiscreteDist, ...]:
    """Three random distributions sharing mean 3 exactly (convex mixtures of
    fixed-mean building blocks on {0, ..., 6})."""
    blocks = np.array(
        [
            [0, 0, 0, 1, 0, 0, 0],
            [0, 0, 0.5, 0, 0.5, 0, 0],
            [0, 0.5, 0, 0, 0, 0.5, 0],
            [0.5, 0, 0, 0, 0, 0, 0.5],
            [1, 6, 15, 20, 15, 6, 1],  # Binomial(6, 1/2) * 64
        ],
        dtype=float,
    )
    blocks[4] /= 64.0
    dists = []
    for _ in range(3):
        w = rng.dirichlet(np.ones(len(blocks)))
        dists.append(make_dist(w @ blocks))
    return tuple(dists)
