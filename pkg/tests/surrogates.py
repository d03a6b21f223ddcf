"""Reproducible certified surrogates for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from rotset import certify_stability, parse_rho

# parameter windows, as exact endpoints
INTERVALS = {
    "(1/2,3/5)": (Fraction(1, 2), Fraction(3, 5)),
    "(3/5,2/3)": (Fraction(3, 5), Fraction(2, 3)),
    "(2/3,1)": (Fraction(2, 3), Fraction(1)),
    "F_2": (Fraction(1, 3), Fraction(3, 8)),
    "G_2": (Fraction(3, 8), Fraction(2, 5)),
    "F_3": (Fraction(1, 4), Fraction(3, 11)),
    "G_3": (Fraction(3, 11), Fraction(2, 7)),
    "notE": (Fraction(2, 5), Fraction(1, 2)),
}


def expr_in(rng: random.Random, lo: Fraction, hi: Fraction, margin: float = 0.02) -> str:
    """An irrational-looking expression strictly inside (lo, hi)."""
    u = margin + (1 - 2 * margin) * rng.random()
    val = float(lo) + float(hi - lo) * u
    return f"{val:.9f}+pi*1e-12"


def certified(expr: str, window: int = 100_000):
    rho = parse_rho(expr, max_index=window)
    rep = certify_stability(rho, window)
    assert rep.passed, (expr, rep.reason, rep.first_failure)
    return rep.rho


def sample(lo, hi, count: int, seed: int, window: int = 100_000, margin: float = 0.02) -> list:
    rng = random.Random(seed)
    return [certified(expr_in(rng, Fraction(lo), Fraction(hi), margin), window) for _ in range(count)]


def sample_regimes(count: int, seed: int, window: int = 100_000) -> list:
    """``count`` surrogates above 1/2 followed by ``count`` below."""
    high = sample(Fraction(1, 2), Fraction(1), count, seed, window)
    low = sample(Fraction(0), Fraction(1, 2), count, seed + 1, window)
    return high + low
