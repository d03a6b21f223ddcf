"""Best diagonal point (d, d) of the family and whether it is a hull vertex.

Above 1/2 the verdict depends on where rho sits relative to 3/5 and 2/3.
Below 1/2 it depends on t = floor(1/rho) and the windows
E_t = (1/(t+1), 2/(2t+1)) split at 3/(3t+2) into F_t and G_t.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import RegimeError, RhoParam, WindowError
from .geometry import LatticePoint, lattice_point
from .indexsets import floor_inv, index_list, m_seq, n_prime, run_end

EXTREME = "Extreme"
NOT_EXTREME = "NotExtreme"


@dataclass
class DiagonalReport:
    rho: RhoParam
    d: Fraction
    realizing_index: int
    regime: str
    classification: str | None = None
    edge_endpoints: tuple[LatticePoint, LatticePoint] | None = None
    threshold: int | None = None
    interval_tag: str = ""
    notes: list[str] = field(default_factory=list)

    def describe(self) -> dict:
        def rat(v: Fraction) -> dict:
            return {"num": v.numerator, "den": v.denominator}

        out = {
            **self.rho.describe(),
            "regime": self.regime,
            "d": rat(self.d),
            "realizing_index": self.realizing_index,
            "classification": self.classification,
            "interval_tag": self.interval_tag,
            "threshold": self.threshold,
            "edge_endpoints": None,
        }
        if self.edge_endpoints:
            out["edge_endpoints"] = [
                {"m": pt.m, "n": pt.n, "x": rat(pt.x), "y": rat(pt.y)}
                for pt in self.edge_endpoints
            ]
        return out


def best_diagonal(rho: RhoParam) -> DiagonalReport:
    """Closed-form d and the smallest index n with A_{n,n} = (d, d)."""
    p, q = rho.numerator, rho.denominator
    if rho.high:
        big = q // (q - p)  # floor(1 / (1 - rho))
        return DiagonalReport(rho, Fraction(big - 1, 2 * big - 1), big - 1, "high")
    t = q // p
    m1 = m_seq(rho, 1)
    return DiagonalReport(rho, Fraction(m1, 2 * m1 * t + 1), m1 * t, "low")


def brute_diagonal(rho: RhoParam, bound: int) -> tuple[int, Fraction]:
    """Smallest index attaining max ceil(n rho)/(2n+1) over the index set."""
    p, q = rho.numerator, rho.denominator
    best_n, best_c = 0, 0
    for n in index_list(rho, bound):
        cn = -((-n * p) // q)
        if cn * (2 * best_n + 1) > best_c * (2 * n + 1):
            best_n, best_c = n, cn
    return best_n, Fraction(best_c, 2 * best_n + 1)


def _require_high_window(rho: RhoParam) -> None:
    p, q = rho.numerator, rho.denominator
    if not (2 * p > q and 3 * p < 2 * q):
        raise RegimeError("this sequence is defined for 1/2 < rho < 2/3")


def u_seq(rho: RhoParam, k: int) -> int:
    """3k + 1 - N_k, for 1/2 < rho < 2/3."""
    _require_high_window(rho)
    nk = run_end(rho, k)
    if nk > rho.max_safe_index:
        raise WindowError(f"run end {nk} exceeds the certified window")
    return 3 * k + 1 - nk


def k_rho(rho: RhoParam) -> int:
    """floor((2 rho - 1) / (2 - 3 rho))."""
    _require_high_window(rho)
    p, q = rho.numerator, rho.denominator
    return (2 * p - q) // (2 * q - 3 * p)


def in_E(rho: RhoParam) -> bool:
    """rho < 1/2 and rho < 2/(2t+1) with t = floor(1/rho)."""
    p, q = rho.numerator, rho.denominator
    if 2 * p > q:
        return False
    t = q // p
    return (2 * t + 1) * p < 2 * q


def _require_E(rho: RhoParam) -> None:
    if not in_E(rho):
        raise RegimeError("this sequence is defined only when M_1 = 1")


def v_seq(rho: RhoParam, j: int) -> int:
    """j M_1 + j - 1 - M_j, for rho in E (where M_1 = 1)."""
    _require_E(rho)
    if j < 1:
        raise ValueError("j must be positive")
    m1 = m_seq(rho, 1)
    return j * m1 + j - 1 - m_seq(rho, j)


def j_rho_t(rho: RhoParam) -> int:
    """floor((1 - t rho) / (2 - (1 + 2t) rho)) with t = floor(1/rho)."""
    _require_E(rho)
    p, q = rho.numerator, rho.denominator
    t = q // p
    return (q - t * p) // (2 * q - (1 + 2 * t) * p)


def classify_intervals(rho: RhoParam) -> str:
    """Exact interval tag: "(1/2,3/5)", "(3/5,2/3)", "(2/3,1)", "F_t", "G_t"
    or "notE"."""
    p, q = rho.numerator, rho.denominator
    if 2 * p > q:
        if 5 * p < 3 * q:
            return "(1/2,3/5)"
        if 3 * p < 2 * q:
            return "(3/5,2/3)"
        return "(2/3,1)"
    t = q // p
    inside = (2 * t + 1) * p < 2 * q
    if inside != (m_seq(rho, 1) == 1):
        raise AssertionError("window test disagrees with M_1 = 1")
    if not inside:
        return "notE"
    if (3 * t + 2) * p < 3 * q:
        return f"F_{t}"
    return f"G_{t}"


def extremality(rho: RhoParam) -> DiagonalReport:
    """Complete report: classification, threshold and edge endpoints."""
    rep = best_diagonal(rho)
    tag = classify_intervals(rho)
    rep.interval_tag = tag
    if rho.high:
        if tag == "(3/5,2/3)":
            k = k_rho(rho)
            rep.threshold = k
            m, n = run_end(rho, 0), run_end(rho, k)
            rep.classification = NOT_EXTREME
            rep.edge_endpoints = _endpoints(rho, m, n)
        else:
            rep.classification = EXTREME
            if tag == "(1/2,3/5)":
                rep.threshold = 0
    else:
        if tag.startswith("G_"):
            j = j_rho_t(rho)
            rep.threshold = j
            m = n_prime(rho, m_seq(rho, 1))
            n = n_prime(rho, m_seq(rho, j))
            rep.classification = NOT_EXTREME
            rep.edge_endpoints = _endpoints(rho, m, n)
        else:
            rep.classification = EXTREME
            if tag.startswith("F_"):
                rep.threshold = j_rho_t(rho)
    if rep.edge_endpoints:
        a, b = rep.edge_endpoints
        if a.x + a.y != 2 * rep.d or b.x + b.y != 2 * rep.d:
            raise AssertionError("edge endpoints are off the line x + y = 2d")
        if (a.x + b.x) / 2 != rep.d or (a.y + b.y) / 2 != rep.d:
            raise AssertionError("edge midpoint is not (d, d)")
    return rep


def _endpoints(rho: RhoParam, m: int, n: int) -> tuple[LatticePoint, LatticePoint]:
    """A_{m,n} and its swap, smaller x first (coordinates need no window)."""
    p, q = rho.numerator, rho.denominator
    s = m + n + 1
    cm, cn = -((-m * p) // q), -((-n * p) // q)
    a = LatticePoint(m, n, Fraction(cm, s), Fraction(cn, s))
    b = LatticePoint(n, m, Fraction(cn, s), Fraction(cm, s))
    return (a, b) if a.x <= b.x else (b, a)


@dataclass
class DominationReport:
    bound: int
    max_excess: int  # max of g(m) + g(n) - 2a; nonpositive means nothing above
    strict_above: list[tuple[int, int]]
    on_line: list[tuple[int, int]]

    def extreme_on_line(self, rho: RhoParam) -> tuple[LatticePoint, LatticePoint]:
        """The on-line points with smallest and largest x."""
        pts = [lattice_point_free(rho, m, n) for m, n in self.on_line]
        return min(pts, key=lambda pt: pt.x), max(pts, key=lambda pt: pt.x)


def lattice_point_free(rho: RhoParam, m: int, n: int) -> LatticePoint:
    p, q = rho.numerator, rho.denominator
    s = m + n + 1
    return LatticePoint(m, n, Fraction(-((-m * p) // q), s), Fraction(-((-n * p) // q), s))


def domination_check(rho: RhoParam, d: Fraction, bound: int | None = None,
                     realizing_index: int = 0) -> DominationReport:
    """Compare x + y against 2d for every A_{m,n} up to ``bound``.

    With g(m) = b c_m - 2 a m (d = a/b) the sum exceeds 2d iff
    g(m) + g(n) > 2a, so each row needs one bisect into the sorted g values.
    """
    if bound is None:
        bound = max(5000, 3 * realizing_index)
    bound = min(bound, rho.max_safe_index)
    p, q = rho.numerator, rho.denominator
    a, b = d.numerator, d.denominator
    idx = index_list(rho, bound)
    g = {m: b * (-((-m * p) // q)) - 2 * a * m for m in idx}
    ordered = sorted((val, m) for m, val in g.items())
    vals = [v for v, _ in ordered]
    above, on = [], []
    best = None
    for m in idx:
        need = 2 * a - g[m]
        start = bisect_left(vals, need)
        for v, n in ordered[start:]:
            if v == need:
                on.append((m, n))
            else:
                above.append((m, n))
        top = g[m] + vals[-1] - 2 * a
        if best is None or top > best:
            best = top
    return DominationReport(bound, best, above, on)
