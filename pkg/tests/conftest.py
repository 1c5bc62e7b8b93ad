import random

import pytest

from afl_lab import gf
from afl_lab.linalg import Matrix
from afl_lab.poly import Poly


def felem(p, level, *coeffs):
    return gf.elem(p, level, coeffs)


def random_matrix(p, level, n, rng):
    return Matrix.from_rows(
        p, level,
        [[gf.elem(p, level, [rng.randrange(p) for _ in range(level)]) for _ in range(n)] for _ in range(n)],
    )


def random_monic(p, level, degree, rng, nonzero_constant=True):
    while True:
        coeffs = [gf.elem(p, level, [rng.randrange(p) for _ in range(level)]) for _ in range(degree)]
        coeffs.append(gf.one(p, level))
        f = Poly.from_elems(p, level, coeffs)
        if not nonzero_constant or not f.coeffs[0].is_zero:
            return f


@pytest.fixture
def rng():
    return random.Random(1234)
