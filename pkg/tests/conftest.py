import json

import pytest

from curve_algebra import Curve
from sampler import FeedSource


@pytest.fixture
def line():
    """(T, 0): constant speed, arc length 2."""
    return Curve.from_coefficients([[0.0, 1.0], [0.0]])


@pytest.fixture
def parabola():
    """(T, T^2): squared speed 1 + 4T^2, roots at +-i/2."""
    return Curve.from_coefficients([[0.0, 1.0], [0.0, 0.0, 1.0]])


@pytest.fixture
def twisted():
    """(3T^3 - 2T, 2T^2): squared speed 81T^4 - 20T^2 + 4."""
    return Curve.from_coefficients([[0.0, -2.0, 0.0, 3.0], [0.0, 0.0, 2.0]])


@pytest.fixture
def feed():
    return FeedSource


@pytest.fixture
def curve_file(tmp_path):
    def write(components, domain=(-1.0, 1.0), name="curve.json"):
        path = tmp_path / name
        path.write_text(json.dumps({"domain": list(domain), "components": components}))
        return path

    return write
