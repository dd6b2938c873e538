import itertools
import random
from fractions import Fraction

import pytest

from rmlab import NonclassicalPoly


def brute_force_eval(poly: NonclassicalPoly, point) -> Fraction:
    """Independent evaluation oracle: sum the canonical terms as exact
    fractions, mod 1, without going through TorusValue arithmetic."""
    total = Fraction(0)
    for mono, c in poly.terms.items():
        prod = c
        for x, e in zip(point, mono.exps):
            prod *= x**e
        total += Fraction(prod, poly.prime ** (mono.k + 1))
    return total % 1


def all_points(p: int, n: int):
    return itertools.product(range(p), repeat=n)


@pytest.fixture
def rng():
    return random.Random(20240811)
