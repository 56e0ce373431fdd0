import random
from fractions import Fraction

import pytest

from fwalg.gaussrat import GaussRat
from fwalg.opalg import BETA, E, F, MC2, O, OperatorExpr


WORD_SYMBOLS = (BETA, O, F, E)
RAW_SYMBOLS = (BETA, O, F, E, MC2)  # m allowed in raw words pre-normalization


def rand_coeff(rng: random.Random, allow_zero: bool = False) -> GaussRat:
    re = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
    im = Fraction(rng.randint(-2, 2), rng.randint(1, 3)) if rng.random() < 0.4 else Fraction(0)
    c = GaussRat(re, im)
    if not allow_zero and c.is_zero:
        return GaussRat(1)
    return c


def rand_raw_term(rng: random.Random, max_len: int = 4, symbols=RAW_SYMBOLS):
    length = rng.randint(0, max_len)
    w = tuple(rng.choice(symbols) for _ in range(length))
    return (rand_coeff(rng), rng.randint(-1, 2), rng.randint(0, 1), w)


def rand_expr(rng: random.Random, max_terms: int = 3, max_len: int = 4,
              symbols=WORD_SYMBOLS) -> OperatorExpr:
    n = rng.randint(1, max_terms)
    return OperatorExpr([rand_raw_term(rng, max_len, symbols) for _ in range(n)])


def rand_expr_min_weight(rng: random.Random, scheme, min_order: int = 1,
                         max_terms: int = 2, max_len: int = 3) -> OperatorExpr:
    """Random expression whose minimum order under the scheme is >= min_order."""
    while True:
        x = rand_expr(rng, max_terms, max_len)
        kept = tuple(t for t in x.terms if t.order(scheme) >= min_order)
        if kept:
            return OperatorExpr(kept, _normalized=True)


@pytest.fixture
def rng():
    return random.Random(20240811)
