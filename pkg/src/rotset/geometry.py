"""Point families A_{m,n} = (ceil(m rho), ceil(n rho)) / (m + n + 1), their
exact convex hulls, slopes from (0, rho), circle containment and the
difference-family hull check.

Points are carried in homogeneous integer form ``(X, Y, W)`` with ``W > 0``
so that every orientation test is a single integer determinant.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Iterator, Sequence

from .exact import RhoParam, RotsetError, WindowError
from .indexsets import index_list

Hom = tuple[int, int, int]


@dataclass(frozen=True)
class LatticePoint:
    m: int
    n: int
    x: Fraction
    y: Fraction
    sign_x: int = 1
    sign_y: int = 1

    @property
    def xy(self) -> tuple[Fraction, Fraction]:
        return (self.x, self.y)


def canonical(h: Hom) -> Hom:
    x, y, w = h
    g = gcd(gcd(x, y), w)
    return (x // g, y // g, w // g)


def to_xy(h: Hom) -> tuple[Fraction, Fraction]:
    return (Fraction(h[0], h[2]), Fraction(h[1], h[2]))


def from_xy(x, y) -> Hom:
    x, y = Fraction(x), Fraction(y)
    w = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    return (x.numerator * (w // x.denominator), y.numerator * (w // y.denominator), w)


def orient(a: Hom, b: Hom, c: Hom) -> int:
    """Positive when a, b, c turn counterclockwise (all weights positive)."""
    ax, ay, aw = a
    bx, by, bw = b
    cx, cy, cw = c
    return ax * (by * cw - bw * cy) - ay * (bx * cw - bw * cx) + aw * (bx * cy - by * cx)


def _cmp_xy(a: Hom, b: Hom) -> int:
    lhs, rhs = a[0] * b[2], b[0] * a[2]
    if lhs != rhs:
        return -1 if lhs < rhs else 1
    lhs, rhs = a[1] * b[2], b[1] * a[2]
    if lhs != rhs:
        return -1 if lhs < rhs else 1
    return 0


def ceil_table(rho: RhoParam, indices: Sequence[int]) -> dict[int, int]:
    p, q = rho.numerator, rho.denominator
    return {m: -((-m * p) // q) for m in indices}


def anchors(rho: RhoParam, quadrants: int = 1) -> list[Hom]:
    p, q = rho.numerator, rho.denominator
    pts = [(0, 0, 1), (p, 0, q), (0, p, q)]
    if quadrants == 4:
        pts += [(-p, 0, q), (0, -p, q)]
    return pts


def lattice_point(rho: RhoParam, m: int, n: int, sign_x: int = 1, sign_y: int = 1) -> LatticePoint:
    if max(m, n) > rho.max_safe_index:
        raise WindowError(f"index {max(m, n)} outside the certified window")
    p, q = rho.numerator, rho.denominator
    s = m + n + 1
    cm, cn = -((-m * p) // q), -((-n * p) // q)
    return LatticePoint(m, n, sign_x * Fraction(cm, s), sign_y * Fraction(cn, s), sign_x, sign_y)


_SIGNS = {1: [(1, 1)], 4: [(1, 1), (-1, 1), (-1, -1), (1, -1)]}


def iter_family(rho: RhoParam, index_bound: int, quadrants: int = 1) -> Iterator[tuple]:
    """Yield ``(m, n, sign_x, sign_y, X, Y, W)`` for every index pair.

    Pairs whose signed point repeats an earlier sign pattern (a zero
    coordinate) are skipped so each four-quadrant point appears once per
    index pair.
    """
    if quadrants not in _SIGNS:
        raise RotsetError("quadrants must be 1 or 4")
    idx = index_list(rho, index_bound)
    c = ceil_table(rho, idx)
    for m in idx:
        cm = c[m]
        for n in idx:
            cn = c[n]
            w = m + n + 1
            seen = set()
            for sx, sy in _SIGNS[quadrants]:
                key = (sx * cm, sy * cn)
                if key in seen:
                    continue
                seen.add(key)
                yield (m, n, sx, sy, sx * cm, sy * cn, w)


@dataclass
class PointFamily:
    rho: RhoParam
    index_bound: int
    quadrants: int
    points: list[LatticePoint]
    anchors: list[tuple[Fraction, Fraction]]

    def homogeneous(self) -> list[Hom]:
        return [from_xy(pt.x, pt.y) for pt in self.points]


def gen_family(rho: RhoParam, index_bound: int, quadrants: int = 1) -> PointFamily:
    """Full enumeration, de-duplicated by coordinates (small bounds only)."""
    seen: set[Hom] = set()
    pts = []
    for m, n, sx, sy, x, y, w in iter_family(rho, index_bound, quadrants):
        key = canonical((x, y, w))
        if key in seen:
            continue
        seen.add(key)
        pts.append(LatticePoint(m, n, Fraction(x, w), Fraction(y, w), sx, sy))
    anc = [to_xy(h) for h in anchors(rho, quadrants)]
    return PointFamily(rho, index_bound, quadrants, pts, anc)


@dataclass
class HullPolygon:
    """Counterclockwise vertices in strictly convex position."""

    hom: list[Hom]
    area: Fraction = field(init=False)

    def __post_init__(self):
        self.area = shoelace(self.hom)

    @property
    def vertices(self) -> list[tuple[Fraction, Fraction]]:
        return [to_xy(h) for h in self.hom]

    def vertex_set(self) -> set[Hom]:
        return {canonical(h) for h in self.hom}

    def contains(self, pt: Hom) -> bool:
        return point_in_convex(self.hom, pt)


def shoelace(hom: Sequence[Hom]) -> Fraction:
    total = Fraction(0)
    k = len(hom)
    for i in range(k):
        x1, y1, w1 = hom[i]
        x2, y2, w2 = hom[(i + 1) % k]
        total += Fraction(x1 * y2 - x2 * y1, w1 * w2)
    return total / 2


def hull_area(hull: HullPolygon) -> Fraction:
    return hull.area


def polygon_area(vertices: Sequence[tuple]) -> Fraction:
    """Shoelace area of an arbitrary simple polygon given as (x, y) pairs."""
    return abs(shoelace([from_xy(x, y) for x, y in vertices]))


def convex_hull(points: Sequence) -> HullPolygon:
    """Exact monotone chain; collinear boundary points are dropped.

    Accepts homogeneous triples or ``(x, y)`` pairs of rationals.
    """
    hom = [p if len(p) == 3 else from_xy(*p) for p in points]
    uniq = sorted({canonical(h) for h in hom}, key=cmp_to_key(_cmp_xy))
    if len(uniq) < 3:
        raise RotsetError("convex hull needs at least three distinct points")
    lower: list[Hom] = []
    for pt in uniq:
        while len(lower) >= 2 and orient(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    upper: list[Hom] = []
    for pt in reversed(uniq):
        while len(upper) >= 2 and orient(upper[-2], upper[-1], pt) <= 0:
            upper.pop()
        upper.append(pt)
    ring = lower[:-1] + upper[:-1]
    if len(ring) < 3:
        raise RotsetError("all input points are collinear")
    return HullPolygon(ring)


def point_in_convex(ring: Sequence[Hom], pt: Hom) -> bool:
    """Inside-or-on test against a CCW strictly convex ring, O(log n)."""
    k = len(ring)
    v0 = ring[0]
    if orient(v0, ring[1], pt) < 0 or orient(v0, ring[-1], pt) > 0:
        return False
    lo, hi = 1, k - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if orient(v0, ring[mid], pt) >= 0:
            lo = mid
        else:
            hi = mid
    return orient(ring[lo], ring[lo + 1], pt) >= 0


def reflect4(ring: Sequence[Hom]) -> list[Hom]:
    out = []
    for x, y, w in ring:
        out += [(x, y, w), (-x, y, w), (-x, -y, w), (x, -y, w)]
    return out


# -- pruned hull of the full family -------------------------------------------


@dataclass
class FamilyHull:
    rho: RhoParam
    index_bound: int
    quadrants: int
    hull: HullPolygon
    labels: dict[Hom, tuple]
    best_diagonal: Fraction
    best_index: int
    candidates: int

    def extreme_points(self) -> list[LatticePoint]:
        """Hull vertices that are family points, with index provenance."""
        out = []
        for h in self.hull.hom:
            lab = self.labels.get(canonical(h))
            if lab is None or lab[0] == "anchor":
                continue
            m, n = lab
            sx = -1 if h[0] < 0 else 1
            sy = -1 if h[1] < 0 else 1
            x, y = to_xy(h)
            out.append(LatticePoint(m, n, x, y, sx, sy))
        return out

    def is_vertex(self, x, y) -> bool:
        return canonical(from_xy(x, y)) in self.hull.vertex_set()


def diagonal_argmax(rho: RhoParam, idx: Sequence[int], c: dict[int, int]) -> tuple[int, Fraction]:
    """Smallest n attaining the largest ceil(n rho) / (2n + 1)."""
    best_n, best_c = 0, 0
    for n in idx:
        cn = c[n]
        # cn / (2n+1) > best_c / (2 best_n + 1)
        if cn * (2 * best_n + 1) > best_c * (2 * n + 1):
            best_n, best_c = n, cn
    return best_n, Fraction(best_c, 2 * best_n + 1)


def _outside_candidates(rho: RhoParam, idx, c, d: Fraction) -> list[tuple[int, int]]:
    """Index pairs (m, n) beyond the line through (0, rho) and (d, d).

    For a fixed row m the condition is alpha_n > rho (m + 1) - (rho - d) c_m / d,
    so the row's candidates are a suffix of the indices sorted by alpha.
    """
    p, q = rho.numerator, rho.denominator
    a, b = d.numerator, d.denominator
    resid = sorted(((c[n] * q - n * p), n) for n in idx)
    keys = [r for r, _ in resid]
    top = keys[-1]
    slope = p * b - a * q  # (rho - d) scaled, positive
    out = []
    for m in idx:
        thr = p * a * (m + 1) - slope * c[m]
        cut = thr // a
        if cut >= top:
            continue
        start = bisect_right(keys, cut)
        out.extend((m, n) for _, n in resid[start:])
    return out


def family_hull(rho: RhoParam, index_bound: int, quadrants: int = 1, prune: bool = True) -> FamilyHull:
    """Exact hull of all A_{m,n} (m, n in the index set with 0, up to the
    bound) together with the axis anchors.

    With ``prune`` only points outside the quadrilateral spanned by the
    origin, the two axis anchors and the best diagonal point found in the
    family are passed to the hull; that quadrilateral lies inside the hull,
    so the result is identical.
    """
    if quadrants not in (1, 4):
        raise RotsetError("quadrants must be 1 or 4")
    p, q = rho.numerator, rho.denominator
    idx = index_list(rho, index_bound)
    c = ceil_table(rho, idx)
    best_n, d_emp = diagonal_argmax(rho, idx, c)
    labels: dict[Hom, tuple] = {}
    pts: list[Hom] = []

    def add(m: int, n: int) -> None:
        h = canonical((c[m], c[n], m + n + 1))
        prev = labels.get(h)
        if prev is None or (m + n, m) < (prev[0] + prev[1], prev[0]):
            labels[h] = (m, n)
        pts.append(h)

    if prune:
        d_q = max(d_emp, rho.value / 2)
        pairs = _outside_candidates(rho, idx, c, d_q)
        for m, n in pairs:
            add(m, n)
            add(n, m)
        add(best_n, best_n)
        ncand = len(pairs)
    else:
        for m in idx:
            for n in idx:
                add(m, n)
        ncand = len(pts)
    for h in anchors(rho, 1):
        h = canonical(h)
        labels.setdefault(h, ("anchor",))
        pts.append(h)
    hull = convex_hull(pts)
    if quadrants == 4:
        ring = [h for h in hull.hom if h != (0, 0, 1)]
        full = convex_hull(reflect4(ring))
        for h in list(labels):
            for sx, sy in ((-1, 1), (-1, -1), (1, -1)):
                labels.setdefault(canonical((sx * h[0], sy * h[1], h[2])), labels[h])
        hull = full
    return FamilyHull(rho, index_bound, quadrants, hull, labels, d_emp, best_n, ncand)


# -- slopes from (0, rho) -------------------------------------------------------


def slope_gamma(rho: RhoParam, m: int, n: int) -> Fraction:
    """Slope from (0, rho) to A_{m,n}: -1 + (alpha_m + alpha_n - rho) / ceil(m rho)."""
    if m < 1:
        raise RotsetError("slope needs m >= 1")
    if max(m, n) > rho.max_safe_index:
        raise WindowError("index outside the certified window")
    p, q = rho.numerator, rho.denominator
    cm, cn = -((-m * p) // q), -((-n * p) // q)
    am, an = cm - Fraction(m * p, q), cn - Fraction(n * p, q)
    return -1 + (am + an - rho.value) / cm


def gamma_sup(rho: RhoParam) -> Fraction:
    """-rho * floor(1 / rho)."""
    return -rho.value * (rho.denominator // rho.numerator)


@dataclass
class SlopeScan:
    sup: Fraction
    maximum: Fraction
    argmax: tuple[int, int]
    all_below: bool
    pairs: int


def slope_scan(rho: RhoParam, bound: int) -> SlopeScan:
    """Largest slope over all m, n in the index set up to ``bound``.

    For fixed m the slope grows with alpha_n, so pairing each row with the
    largest alpha settles every pair at once.
    """
    p, q = rho.numerator, rho.denominator
    idx = index_list(rho, bound)[1:]
    if not idx:
        raise RotsetError("index set is empty within the bound")
    res = {n: (-((-n * p) // q)) * q - n * p for n in idx}
    n_top = max(idx, key=lambda n: (res[n], -n))
    a_top = res[n_top]
    sup = gamma_sup(rho)
    best = None
    best_m = idx[0]
    all_below = True
    for m in idx:
        cm = -((-m * p) // q)
        g = -1 + Fraction(res[m] + a_top - p, q * cm)
        if g >= sup:
            all_below = False
        if best is None or g > best:
            best, best_m = g, m
    return SlopeScan(sup, best, (best_m, n_top), all_below, len(idx) ** 2)


# -- circle containment --------------------------------------------------------


@dataclass
class CircleReport:
    ok: bool
    violation: tuple[int, int] | None
    rows: int


def circle_containment(rho: RhoParam, bound: int) -> CircleReport:
    """Check x^2 + y^2 < rho^2 for every A_{m,n} up to ``bound``.

    Scaled by q^2 the condition for row m reads
    max_n [F(n) - L_m n] < p^2 (m+1)^2 - q^2 c_m^2 with
    F(n) = q^2 c_n^2 - p^2 n^2 and L_m = 2 p^2 (m + 1);
    the maximum is read off the upper hull of (n, F(n)) with a moving pointer.
    """
    p, q = rho.numerator, rho.denominator
    idx = index_list(rho, bound)
    c = ceil_table(rho, idx)
    pts = [(n, q * q * c[n] ** 2 - p * p * n * n) for n in idx]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it is not strictly above the chord
            if (y2 - y1) * (pt[0] - x1) <= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    ptr = 0
    for m in idx:  # slopes increase with m, so the optimum moves right
        lam = 2 * p * p * (m + 1)
        while ptr + 1 < len(hull) and hull[ptr + 1][1] - lam * hull[ptr + 1][0] >= hull[ptr][1] - lam * hull[ptr][0]:
            ptr += 1
        n, fn = hull[ptr]
        if fn - lam * n >= p * p * (m + 1) ** 2 - q * q * c[m] ** 2:
            return CircleReport(False, (m, n), len(idx))
    return CircleReport(True, None, len(idx))


def circle_containment_brute(rho: RhoParam, bound: int) -> CircleReport:
    p, q = rho.numerator, rho.denominator
    idx = index_list(rho, bound)
    c = ceil_table(rho, idx)
    for m in idx:
        for n in idx:
            if q * q * (c[m] ** 2 + c[n] ** 2) >= p * p * (m + n + 1) ** 2:
                return CircleReport(False, (m, n), len(idx))
    return CircleReport(True, None, len(idx))


# -- difference family ------------------------------------------------------------


@dataclass
class ClaimReport:
    rho: RhoParam
    quadrant_bound: int
    difference_bound: int
    difference_points: int
    distinct: int
    outside: list[tuple[int, int, int, int]]
    reverse_missing: int

    @property
    def ok(self) -> bool:
        return not self.outside and self.reverse_missing == 0


def difference_points(rho: RhoParam, bound: int) -> dict[Hom, tuple[int, int, int, int]]:
    """Canonical points ((c_m - c_m'), (c_n - c_n')) / (m + m' + n + n' + 1)."""
    idx = index_list(rho, bound)
    c = ceil_table(rho, idx)
    out: dict[Hom, tuple[int, int, int, int]] = {}
    pairs = [(m, mp, c[m] - c[mp], m + mp) for m in idx for mp in idx]
    for m, mp, dx, sx in pairs:
        for n, np_, dy, sy in pairs:
            h = canonical((dx, dy, sx + sy + 1))
            if h not in out:
                out[h] = (m, mp, n, np_)
    return out


def claim_equivalence_check(rho: RhoParam, quadrant_bound: int, difference_bound: int) -> ClaimReport:
    if difference_bound > 40:
        raise RotsetError("difference bound is capped at 40")
    if quadrant_bound < 4 * difference_bound + 1:
        raise RotsetError("quadrant bound must be at least 4 * difference bound + 1")
    p, q = rho.numerator, rho.denominator
    fh = family_hull(rho, quadrant_bound, quadrants=4)
    ring = fh.hull.hom
    diff = difference_points(rho, difference_bound)
    outside = []
    for h, prov in diff.items():
        x, y, w = h
        if (abs(x) + abs(y)) * q <= p * w:  # inside the anchor diamond
            continue
        if not point_in_convex(ring, h):
            outside.append(prov)
    # a signed quadrant point is a difference point whose other indices are
    # zero: a negative coordinate puts its index in the primed slot
    missing = 0
    idx = index_list(rho, difference_bound)
    c = ceil_table(rho, idx)
    for m in idx:
        for n in idx:
            for sx, sy in _SIGNS[4]:
                if canonical((sx * c[m], sy * c[n], m + n + 1)) not in diff:
                    missing += 1
    total = len(idx) ** 4
    return ClaimReport(rho, quadrant_bound, difference_bound, total, len(diff), outside, missing)


def nearest_vertex_distance(hull: HullPolygon, target: tuple[Fraction, Fraction], exclude: set[Hom]) -> float:
    """Euclidean distance from ``target`` to the closest vertex not in ``exclude``."""
    tx, ty = target
    best = None
    for h in hull.hom:
        if canonical(h) in exclude:
            continue
        x, y = to_xy(h)
        dist2 = (x - tx) ** 2 + (y - ty) ** 2
        if best is None or dist2 < best:
            best = dist2
    return float(best) ** 0.5 if best is not None else float("inf")
