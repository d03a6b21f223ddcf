from fractions import Fraction

import pytest

from rotset import RegimeError, make_rho, parse_rho
from rotset.diagonal import (
    EXTREME,
    NOT_EXTREME,
    best_diagonal,
    brute_diagonal,
    classify_intervals,
    domination_check,
    extremality,
    in_E,
    j_rho_t,
    k_rho,
    u_seq,
    v_seq,
)
from rotset.geometry import family_hull


@pytest.mark.parametrize(
    "expr, d, index",
    [
        ("0.93+pi*1e-9", Fraction(13, 27), 13),
        ("0.31+pi*1e-9", Fraction(4, 25), 12),
        ("0.5+1e-6", Fraction(1, 3), 1),
        ("0.7+pi*1e-9", Fraction(2, 5), 2),
    ],
)
def test_best_diagonal_values(expr, d, index):
    rho = parse_rho(expr)
    rep = best_diagonal(rho)
    assert (rep.d, rep.realizing_index) == (d, index)
    assert brute_diagonal(rho, 5000) == (index, d)


@pytest.mark.parametrize(
    "value, d, tag",
    [
        (Fraction(36, 100), Fraction(1, 5), "F_2"),
        (Fraction(26, 100), Fraction(1, 7), "F_3"),
        (Fraction(29, 100), Fraction(2, 13), "notE"),
    ],
)
def test_low_regime_tags(value, d, tag):
    rho = make_rho(value)
    assert best_diagonal(rho).d == d
    assert classify_intervals(rho) == tag
    rep = extremality(rho)
    assert rep.classification == EXTREME


def test_high_not_extreme_case():
    rho = parse_rho("0.645+pi*1e-5")
    assert classify_intervals(rho) == "(3/5,2/3)"
    assert k_rho(rho) == 4
    rep = extremality(rho)
    assert rep.classification == NOT_EXTREME
    assert rep.threshold == 4
    a, b = rep.edge_endpoints
    assert (a.m, a.n) == (1, 13)
    assert (a.x, a.y) == (Fraction(1, 15), Fraction(3, 5))
    assert (b.x, b.y) == (Fraction(3, 5), Fraction(1, 15))
    assert (a.x + b.x) / 2 == rep.d == (a.y + b.y) / 2


def test_low_not_extreme_case():
    rho = parse_rho("0.395+pi*1e-5")
    assert classify_intervals(rho) == "G_2"
    assert in_E(rho)
    assert j_rho_t(rho) == 8
    rep = extremality(rho)
    assert rep.classification == NOT_EXTREME
    a, b = rep.edge_endpoints
    assert a.x == Fraction(1, 40)
    assert a.x + a.y == 2 * rep.d


def test_threshold_at_small_k():
    assert k_rho(parse_rho("0.61+pi*1e-9")) == 1


@pytest.mark.parametrize("expr", ["0.645+pi*1e-5", "0.61+pi*1e-9", "0.66+pi*1e-9", "0.63+pi*1e-9"])
def test_k_threshold_is_last_zero_of_u(expr):
    rho = parse_rho(expr)
    k = k_rho(rho)
    values = [u_seq(rho, i) for i in range(0, k + 20)]
    assert values[0] == 0
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert max(i for i, v in enumerate(values) if v == 0) == k


@pytest.mark.parametrize("expr", ["0.395+pi*1e-5", "0.36+pi*1e-9", "0.28+pi*1e-9", "0.27+pi*1e-9"])
def test_j_threshold_is_last_zero_of_v(expr):
    rho = parse_rho(expr)
    j = j_rho_t(rho)
    values = [v_seq(rho, i) for i in range(1, j + 20)]
    assert values[0] == 0
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert max(i for i, v in enumerate(values, start=1) if v == 0) == j
    if classify_intervals(rho).startswith("F_"):
        assert j == 1


def test_sequence_preconditions():
    with pytest.raises(RegimeError):
        k_rho(parse_rho("0.7+pi*1e-9"))
    with pytest.raises(RegimeError):
        j_rho_t(make_rho(Fraction(29, 100)))


@pytest.mark.parametrize("expr", ["0.93+pi*1e-9", "0.645+pi*1e-5", "0.395+pi*1e-5", "0.31+pi*1e-9"])
def test_verdict_agrees_with_hull_and_domination(expr):
    rho = parse_rho(expr)
    rep = extremality(rho)
    fh = family_hull(rho, 2000)
    assert fh.is_vertex(rep.d, rep.d) == (rep.classification == EXTREME)
    dom = domination_check(rho, rep.d, 2000)
    assert dom.strict_above == []
    assert dom.max_excess == 0
    if rep.classification == NOT_EXTREME:
        lo, hi = dom.extreme_on_line(rho)
        assert (lo.xy, hi.xy) == (rep.edge_endpoints[0].xy, rep.edge_endpoints[1].xy)


def test_describe_is_json_ready():
    out = extremality(parse_rho("0.645+pi*1e-5")).describe()
    assert out["classification"] == NOT_EXTREME
    assert out["edge_endpoints"][0]["x"] == {"num": 1, "den": 15}
