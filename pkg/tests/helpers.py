"""Shared fixtures: frozen reference data and deterministic random generators."""

import random
from fractions import Fraction

# The canonical 18x9 weight matrix of the arrow-rescaling action, one
# row per arrow (-1 at the source vertex, +1 at the target vertex),
# frozen as reference data.
CANONICAL_WEIGHT_ROWS = [
    [-1, 0, 0, 1, 0, 0, 0, 0, 0], [-1, 0, 0, 0, 1, 0, 0, 0, 0], [-1, 0, 0, 0, 0, 1, 0, 0, 0],
    [0, -1, 0, 0, 1, 0, 0, 0, 0], [0, -1, 0, 0, 0, 1, 0, 0, 0], [0, -1, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, -1, 0, 0, 1, 0, 0, 0], [0, 0, -1, 1, 0, 0, 0, 0, 0], [0, 0, -1, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, -1, 0, 0, 1, 0, 0], [0, 0, 0, -1, 0, 0, 0, 1, 0], [0, 0, 0, -1, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, -1, 0, 0, 1, 0], [0, 0, 0, 0, -1, 0, 0, 0, 1], [0, 0, 0, 0, -1, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, -1, 0, 0, 1], [0, 0, 0, 0, 0, -1, 1, 0, 0], [0, 0, 0, 0, 0, -1, 0, 1, 0],
]

# The nine disjoint generator pairs of the distinguished monomial
# relation ideal, as (first arrow, second arrow) coordinate indices.
TORIC_PAIRS = [(0, 9), (1, 12), (2, 15), (3, 14), (4, 17), (5, 11), (6, 16), (7, 10), (8, 13)]

SPECIAL_THETA = (-11, -11, -11, 3, 3, 6, 7, 7, 7)


def nonzero_rational(rng: random.Random, span: int = 9) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(-span, span)
    return Fraction(num, rng.randint(1, span))


def rational(rng: random.Random, span: int = 9) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def random_point_values(rng: random.Random, zero_prob_thirds: int = 1):
    """18 coordinates, each zero with probability 1/3."""
    vals = []
    for _ in range(18):
        if rng.randrange(3) < zero_prob_thirds:
            vals.append(Fraction(0))
        else:
            vals.append(nonzero_rational(rng))
    return vals


def det_fraction(rows):
    """Determinant by exact rational elimination (test-local oracle)."""
    m = [[Fraction(v) for v in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def general_position_params(rng: random.Random):
    """Draw (a, b, c, d) until the configuration is in general position."""
    from qgm import cubicrel

    while True:
        params = tuple(nonzero_rational(rng, 7) for _ in range(4))
        cfg = cubicrel.PointConfiguration(*params)
        if cubicrel.general_position_check(cfg):
            return cfg
