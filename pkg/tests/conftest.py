import numpy as np
import pytest

from affiq.bodies import standard_body
from affiq.numerics.rng import RngStream


@pytest.fixture
def rng():
    return RngStream(1234)


@pytest.fixture
def cube3():
    return standard_body("cube", 3)


@pytest.fixture
def simplex3():
    return standard_body("simplex", 3)


def random_unit(gen, n):
    v = gen.standard_normal(n)
    return v / np.linalg.norm(v)
