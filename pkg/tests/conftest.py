import math

import numpy as np
import pytest

from gwdbox import Convention, make_box


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def random_params(rng, min_gap: float = 0.0, center_span: float = 50.0):
    """Random raw quintuple with extents in [1, 100] and uniform angle."""
    while True:
        w = rng.uniform(1.0, 100.0)
        h = rng.uniform(1.0, 100.0)
        if abs(w - h) / max(w, h) > min_gap:
            break
    return (rng.uniform(-center_span, center_span),
            rng.uniform(-center_span, center_span),
            w, h,
            rng.uniform(-math.pi, math.pi))


def random_box(rng, convention=None, min_gap: float = 0.0, center_span: float = 50.0):
    if convention is None:
        convention = Convention.OPENCV if rng.integers(2) == 0 else Convention.LONGEDGE
    return make_box(*random_params(rng, min_gap, center_span), convention)
