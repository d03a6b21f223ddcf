from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from rotset import RotsetError, WindowError, make_rho, parse_rho
from rotset.exact import boundary_name
from rotset.geometry import (
    canonical,
    circle_containment,
    circle_containment_brute,
    claim_equivalence_check,
    convex_hull,
    difference_points,
    family_hull,
    from_xy,
    gamma_sup,
    gen_family,
    index_list,
    lattice_point,
    orient,
    point_in_convex,
    polygon_area,
    slope_gamma,
    slope_scan,
)

SURROGATES = ["0.93+pi*1e-9", "0.645+pi*1e-5", "0.55+pi*1e-9", "0.395+pi*1e-5", "0.31+pi*1e-9", "0.12+pi*1e-9"]


def test_orientation_sign():
    assert orient((0, 0, 1), (1, 0, 1), (0, 1, 1)) > 0
    assert orient((0, 0, 1), (0, 1, 1), (1, 0, 1)) < 0
    assert orient((0, 0, 1), (1, 1, 2), (1, 1, 1)) == 0


def test_hull_drops_collinear_and_interior_points():
    pts = [(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (1, 1), (Fraction(1, 2), 2)]
    hull = convex_hull(pts)
    assert hull.vertices == [(0, 0), (2, 0), (2, 2), (0, 2)]
    assert hull.area == 4
    assert point_in_convex(hull.hom, (1, 1, 1))
    assert point_in_convex(hull.hom, (2, 1, 1))
    assert not point_in_convex(hull.hom, (5, 1, 2))


def test_degenerate_hull_is_an_error():
    with pytest.raises(RotsetError):
        convex_hull([(0, 0), (1, 1), (2, 2)])


def test_polygon_area_of_triangle():
    assert polygon_area([(0, 0), (Fraction(1, 3), 0), (0, Fraction(1, 2))]) == Fraction(1, 12)


def test_lattice_point_coordinates():
    rho = parse_rho("0.645+pi*1e-5")
    pt = lattice_point(rho, 1, 13)
    assert pt.xy == (Fraction(1, 15), Fraction(3, 5))
    with pytest.raises(WindowError):
        lattice_point(make_rho(Fraction(93, 100)), 1, 99)


@pytest.mark.parametrize("expr", SURROGATES)
def test_pruned_hull_equals_full_hull(expr):
    rho = parse_rho(expr)
    pruned = family_hull(rho, 200)
    full = family_hull(rho, 200, prune=False)
    assert pruned.hull.hom == full.hull.hom
    assert pruned.best_diagonal == full.best_diagonal


@pytest.mark.parametrize("expr", SURROGATES[:3])
def test_family_hull_equals_hull_of_enumerated_points(expr):
    rho = parse_rho(expr)
    fam = gen_family(rho, 60, quadrants=4)
    direct = convex_hull([pt.xy for pt in fam.points] + fam.anchors)
    assert family_hull(rho, 60, quadrants=4).hull.vertex_set() == direct.vertex_set()


@pytest.mark.parametrize("expr", SURROGATES)
def test_four_quadrant_area_is_four_times_one_quadrant(expr):
    rho = parse_rho(expr)
    one = family_hull(rho, 1000)
    four = family_hull(rho, 1000, quadrants=4)
    assert four.hull.area == 4 * one.hull.area


def test_extreme_points_carry_indices():
    rho = parse_rho("0.645+pi*1e-5")
    fh = family_hull(rho, 300)
    pts = fh.extreme_points()
    assert pts
    for pt in pts:
        assert lattice_point(rho, pt.m, pt.n).xy == pt.xy


@pytest.mark.parametrize("expr", SURROGATES)
def test_circle_containment_matches_brute_force(expr):
    rho = parse_rho(expr)
    assert circle_containment(rho, 300) == circle_containment_brute(rho, 300)
    assert circle_containment(rho, 10_000).ok


@pytest.mark.parametrize("expr", SURROGATES)
def test_slope_scan_matches_pairwise_maximum(expr):
    rho = parse_rho(expr)
    idx = index_list(rho, 150)[1:]
    brute = max(slope_gamma(rho, m, n) for m in idx for n in idx)
    res = slope_scan(rho, 150)
    assert res.maximum == brute
    assert res.all_below
    assert res.sup == gamma_sup(rho)


def test_difference_points_cover_signed_quadrant_points():
    rho = parse_rho("0.645+pi*1e-5")
    diff = difference_points(rho, 6)
    for m in index_list(rho, 6):
        for n in index_list(rho, 6):
            for sx, sy in ((1, 1), (-1, 1), (-1, -1), (1, -1)):
                pt = lattice_point(rho, m, n, sx, sy)
                assert canonical(from_xy(pt.x, pt.y)) in diff


@pytest.mark.parametrize("expr", ["0.645+pi*1e-5", "0.395+pi*1e-5"])
def test_claim_check_small(expr):
    rep = claim_equivalence_check(parse_rho(expr), 41, 10)
    assert rep.ok
    assert rep.difference_points == len(index_list(parse_rho(expr), 10)) ** 4


def test_claim_check_bounds_are_validated():
    rho = parse_rho("0.645+pi*1e-5")
    with pytest.raises(RotsetError):
        claim_equivalence_check(rho, 40, 10)
    with pytest.raises(RotsetError):
        claim_equivalence_check(rho, 400, 41)


@settings(max_examples=40, deadline=None)
@given(st.integers(10**6, 10**7), st.data())
def test_family_points_stay_inside_the_circle(q, data):
    p = data.draw(st.integers(q // 50, q - q // 50))
    frac = Fraction(p, q)
    assume(boundary_name(frac.numerator, frac.denominator) is None and frac.denominator > 402)
    rho = make_rho(frac, max_index=400)
    assert circle_containment(rho, 400).ok
