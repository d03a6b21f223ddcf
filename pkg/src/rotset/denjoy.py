"""One-dimensional model on a bouquet of four circles.

A Denjoy-type circle map ``psi`` is built by blowing up the rotation orbit
frac(n rho), |n| <= N_w, into intervals of length proportional to
1/(|n|+2)^2 (total 1/2).  The remaining half of the circle is the rotation
itself, rescaled by 1/2.  ``psi`` is exactly semiconjugate to the rotation,
so its rotation number is the surrogate rho by construction.

Angles live in the window [-b, 1 - b) where J = [-b, b] is the wandering
interval of index 0.  Unlike the rest of the package this module uses
floating point; only tolerance checks are meaningful here.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import floor

import numpy as np
from scipy.stats import qmc

from .exact import RhoParam, RotsetError
from .geometry import HullPolygon, from_xy, point_in_convex

CIRCLES = ("h", "h'", "v", "v'")
H, HP, V, VP = 0, 1, 2, 3
# both horizontal circles run along the first axis, both vertical ones along
# the second; backward motion comes from the inverse legs of the composition
AXIS = np.array([0, 0, 1, 1])
COLLAPSE_RATIO = Fraction(17, 18)


@dataclass(frozen=True)
class BouquetPoint:
    circle: int
    angle: float

    def __post_init__(self):
        if self.circle not in (H, HP, V, VP):
            raise RotsetError(f"unknown circle {self.circle}")


@dataclass
class LiftState:
    """Point on the bouquet plus the integer part of its lift."""

    point: BouquetPoint
    base: tuple[float, float] = (0.0, 0.0)
    steps: int = 0

    def position(self) -> np.ndarray:
        pos = np.array(self.base, dtype=float)
        pos[AXIS[self.point.circle]] += self.point.angle
        return pos


class DenjoyMap:
    """Blow-up construction; immutable after ``build_denjoy``."""

    def __init__(self, rho: RhoParam, wander_count: int):
        if wander_count < 1:
            raise RotsetError("wander_count must be positive")
        if 2 * wander_count >= rho.denominator:
            raise RotsetError("too many wandering intervals for this surrogate")
        self.rho = rho
        self.wander_count = nw = wander_count
        p, q = rho.numerator, rho.denominator
        self.rho_f = p / q
        ns = list(range(-nw, nw + 1))
        weights = [Fraction(1, (abs(n) + 2) ** 2) for n in ns]
        scale = Fraction(1, 2) / sum(weights)
        lengths = [scale * w for w in weights]
        thetas = [Fraction((n * p) % q, q) for n in ns]
        order = sorted(range(len(ns)), key=lambda i: thetas[i])
        half = lengths[nw] / 2
        # exact left ends in sorted circle order
        left_sorted = []
        run = Fraction(0)
        for i in order:
            left_sorted.append(-half + thetas[i] / 2 + run)
            run += lengths[i]
        self.exact_half = half
        self.exact_left = {ns[i]: left_sorted[k] for k, i in enumerate(order)}
        self.exact_length = {n: lengths[i] for i, n in enumerate(ns)}
        self.exact_theta = {n: thetas[i] for i, n in enumerate(ns)}

        self.b = float(half)
        self.w = float(half * COLLAPSE_RATIO)
        self.n_sorted = np.array([ns[i] for i in order])
        self.a_sorted = np.array([float(v) for v in left_sorted])
        self.len_sorted = np.array([float(lengths[i]) for i in order])
        self.theta_sorted = np.array([float(thetas[i]) for i in order])
        self.cum_len = np.concatenate(([0.0], np.cumsum(self.len_sorted)))
        off = nw
        self.A = np.empty(2 * nw + 1)
        self.L = np.empty(2 * nw + 1)
        self.TH = np.empty(2 * nw + 1)
        for n in ns:
            self.A[n + off] = float(self.exact_left[n])
            self.L[n + off] = float(self.exact_length[n])
            self.TH[n + off] = float(self.exact_theta[n])
        # integer part of theta_n +/- rho, decided exactly
        self.wrap_fwd = np.array([((n * p) % q + p) // q for n in ns], dtype=float)
        self.wrap_bwd = np.array([((n * p) % q - p) // q for n in ns], dtype=float)
        self.tau = float(self.exact_left[1] + self.exact_length[1] / 2)
        self._a_list = self.a_sorted.tolist()
        self._theta_list = self.theta_sorted.tolist()

    # -- semiconjugacy ---------------------------------------------------------

    def blowup(self, theta):
        """Position of base angle theta in [0, 1) (vectorized)."""
        theta = np.asarray(theta, dtype=float)
        k = np.searchsorted(self.theta_sorted, theta, side="left")
        return -self.b + theta / 2 + self.cum_len[k]

    def locate(self, x):
        """Sorted slot, inside flag, relative position and base angle."""
        x = np.asarray(x, dtype=float)
        k = np.searchsorted(self.a_sorted, x, side="right") - 1
        k = np.clip(k, 0, len(self.a_sorted) - 1)
        a = self.a_sorted[k]
        ln = self.len_sorted[k]
        inside = x <= a + ln
        rel = np.where(inside, (x - a) / ln, 0.0)
        theta = np.where(inside, self.theta_sorted[k], self.theta_sorted[k] + 2 * (x - a - ln))
        return k, inside, rel, theta

    def collapse_semiconj(self, x):
        """Base angle of x: the interval's orbit point, or the gap inverse."""
        return self.locate(x)[3]

    # -- psi and its inverse ---------------------------------------------------

    def psi(self, x, direction: int = 1):
        """Return (psi^{+-1}(x) in [-b, 1-b), integer lift shift)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        nw = self.wander_count
        k, inside, rel, theta = self.locate(x)
        n = self.n_sorted[k]
        target = n + direction
        out = np.empty_like(x)
        shift = np.empty_like(x)
        moving = inside & (np.abs(target) <= nw)
        if moving.any():
            src = n[moving] + nw
            dst = target[moving] + nw
            out[moving] = self.A[dst] + rel[moving] * self.L[dst]
            wraps = self.wrap_fwd if direction > 0 else self.wrap_bwd
            shift[moving] = wraps[src]
        rest = ~moving
        if rest.any():
            th = theta[rest] + direction * self.rho_f
            wrap = np.floor(th)
            out[rest] = self.blowup(th - wrap)
            shift[rest] = wrap
        return out, shift

    def psi_scalar(self, x: float, direction: int = 1) -> tuple[float, int]:
        """Pure-Python route to the same map (bisect instead of numpy)."""
        nw = self.wander_count
        k = bisect_right(self._a_list, x) - 1
        k = min(max(k, 0), len(self._a_list) - 1)
        a = self._a_list[k]
        ln = float(self.len_sorted[k])
        n = int(self.n_sorted[k])
        if x <= a + ln:
            tgt = n + direction
            if abs(tgt) <= nw:
                rel = (x - a) / ln
                wraps = self.wrap_fwd if direction > 0 else self.wrap_bwd
                return float(self.A[tgt + nw] + rel * self.L[tgt + nw]), int(wraps[n + nw])
            theta = self._theta_list[k]
        else:
            theta = self._theta_list[k] + 2 * (x - a - ln)
        th = theta + direction * self.rho_f
        wrap = floor(th)
        th -= wrap
        j = bisect_left(self._theta_list, th)
        return -self.b + th / 2 + float(self.cum_len[j]), wrap

    # -- collapse and bump -----------------------------------------------------

    def collapse_p(self, x):
        """Identity off J, zero on I, affine on J minus I."""
        x = np.asarray(x, dtype=float)
        b, w = self.b, self.w
        ax = np.abs(x)
        inner = np.sign(x) * (ax - w) * (b / (b - w))
        return np.where(ax <= w, 0.0, np.where(ax < b, inner, x))

    def eta_tau(self, x, sign: int = 1):
        """+-tau (1 - (x/w)^2) on I = [-w, w]."""
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) > self.w * (1 + 1e-12)):
            raise RotsetError("eta_tau is defined on the collapse window only")
        return sign * self.tau * (1.0 - (x / self.w) ** 2)

    def phi(self, x):
        """psi after p, exposed as a derived map only."""
        return self.psi(self.collapse_p(x))[0]

    def canonical(self, y):
        """Reduce an angle to [-b, 1 - b); returns (angle, integer shift)."""
        y = np.asarray(y, dtype=float)
        k = np.floor(y + self.b)
        return y - k, k

    # -- maps on the bouquet ---------------------------------------------------

    def f_sigma_arrays(self, circle, angle, base, sigma: int, direction: int) -> None:
        """Apply +-F^(sigma) in place to arrays of bouquet states."""
        own = circle == sigma
        if own.any():
            new, shift = self.psi(angle[own], direction)
            angle[own] = new
            base[own, AXIS[sigma]] += shift
        other = ~own
        window = other & (np.abs(angle) <= self.w)
        if window.any():
            y = self.eta_tau(angle[window], direction)
            y, shift = self.canonical(y)
            circle[window] = sigma
            angle[window] = y
            base[window, AXIS[sigma]] += shift
        rest = other & ~window
        if rest.any():
            angle[rest] = self.collapse_p(angle[rest])

    def f_sigma(self, sigma: int, state: LiftState, direction: int = 1) -> LiftState:
        circle = np.array([state.point.circle])
        angle = np.array([state.point.angle], dtype=float)
        base = np.array([state.base], dtype=float)
        self.f_sigma_arrays(circle, angle, base, sigma, direction)
        return LiftState(BouquetPoint(int(circle[0]), float(angle[0])), (base[0, 0], base[0, 1]), state.steps)

    def f_composed_arrays(self, circle, angle, base) -> None:
        """F = (-F^h') o (-F^v') o F^h o F^v, applied right to left."""
        self.f_sigma_arrays(circle, angle, base, V, 1)
        self.f_sigma_arrays(circle, angle, base, H, 1)
        self.f_sigma_arrays(circle, angle, base, VP, -1)
        self.f_sigma_arrays(circle, angle, base, HP, -1)

    def f_composed(self, state: LiftState) -> tuple[LiftState, np.ndarray]:
        circle = np.array([state.point.circle])
        angle = np.array([state.point.angle], dtype=float)
        base = np.array([state.base], dtype=float)
        before = state.position()
        self.f_composed_arrays(circle, angle, base)
        new = LiftState(BouquetPoint(int(circle[0]), float(angle[0])), (base[0, 0], base[0, 1]), state.steps + 1)
        return new, new.position() - before


def build_denjoy(rho: RhoParam, wander_count: int = 1000) -> DenjoyMap:
    return DenjoyMap(rho, wander_count)


def intervals_disjoint(dm: DenjoyMap) -> bool:
    """Exact check that the stored intervals are pairwise disjoint, sorted
    consistently with frac(n rho), and fit inside [-b, 1 - b)."""
    order = sorted(dm.exact_left, key=lambda n: dm.exact_theta[n])
    prev_end = None
    for n in order:
        lo = dm.exact_left[n]
        hi = lo + dm.exact_length[n]
        if prev_end is not None and lo <= prev_end:
            return False
        prev_end = hi
    first = dm.exact_left[order[0]]
    return first == -dm.exact_half and prev_end < 1 - dm.exact_half


def psi_rotation_number(dm: DenjoyMap, steps: int, start: float = 0.123, scalar: bool = True) -> float:
    """(lift of psi^steps(x) - x) / steps."""
    x = start
    shift_total = 0
    if scalar:
        for _ in range(steps):
            x, s = dm.psi_scalar(x)
            shift_total += s
    else:
        xa = np.array([x])
        for _ in range(steps):
            xa, s = dm.psi(xa)
            shift_total += int(s[0])
        x = float(xa[0])
    return (x + shift_total - start) / steps


def simulate_arrays(dm: DenjoyMap, circle, angle, steps: int) -> np.ndarray:
    """Run ``steps`` composed maps; return displacement / steps per orbit."""
    circle = np.array(circle, dtype=int)
    angle = np.array(angle, dtype=float)
    base = np.zeros((len(circle), 2))
    start = base.copy()
    start[np.arange(len(circle)), AXIS[circle]] += angle
    for _ in range(steps):
        dm.f_composed_arrays(circle, angle, base)
    if not np.all(np.isfinite(angle)) or not np.all(np.isfinite(base)):
        raise RotsetError("non-finite simulator state")
    end = base.copy()
    end[np.arange(len(circle)), AXIS[circle]] += angle
    return (end - start) / steps


def estimate_rotation(dm: DenjoyMap, start: BouquetPoint, steps: int) -> np.ndarray:
    return simulate_arrays(dm, [start.circle], [start.angle], steps)[0]


def halton_starts(dm: DenjoyMap, count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Scrambled Halton points mapped to (circle, angle)."""
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(count)
    circle = np.minimum((u[:, 0] * 4).astype(int), 3)
    angle = -dm.b + u[:, 1]
    return circle, angle


def within_dilated(hull: HullPolygon, x: float, y: float, eps: Fraction) -> bool:
    """Exact: the rational value of (x, y) lies in the hull or within eps of it."""
    pt = from_xy(Fraction(x), Fraction(y))
    if point_in_convex(hull.hom, pt):
        return True
    px, py = Fraction(x), Fraction(y)
    verts = hull.vertices
    k = len(verts)
    eps2 = eps * eps
    for i in range(k):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % k]
        dx, dy = bx - ax, by - ay
        tnum = (px - ax) * dx + (py - ay) * dy
        den = dx * dx + dy * dy
        t = min(max(tnum / den, Fraction(0)), Fraction(1))
        cx, cy = ax + t * dx, ay + t * dy
        if (px - cx) ** 2 + (py - cy) ** 2 <= eps2:
            return True
    return False


@dataclass
class EnsembleReport:
    rho: RhoParam
    steps: int
    epsilon: Fraction
    seed: int
    start_circle: np.ndarray
    start_angle: np.ndarray
    estimates: np.ndarray
    inside: list[bool]

    @property
    def fraction(self) -> float:
        return sum(self.inside) / len(self.inside)


def ensemble_containment(dm: DenjoyMap, hull: HullPolygon, samples: int, steps: int,
                         epsilon=Fraction(1, 20), seed: int = 0) -> EnsembleReport:
    epsilon = Fraction(epsilon)
    circle, angle = halton_starts(dm, samples, seed)
    est = simulate_arrays(dm, circle, angle, steps)
    inside = [within_dilated(hull, float(ex), float(ey), epsilon) for ex, ey in est]
    return EnsembleReport(dm.rho, steps, epsilon, seed, circle, angle, est, inside)


def vertex_search(rho: RhoParam, estimates: np.ndarray, max_index: int = 10,
                  tol: float = 0.05) -> list[tuple[int, int, int, int, float]]:
    """Signed points A_{m,n} (small m, n in the index set) that some
    ensemble estimate approximates within ``tol``: (m, n, sx, sy, distance)."""
    from .indexsets import index_list

    p, q = rho.numerator, rho.denominator
    idx = index_list(rho, min(max_index, rho.max_safe_index))
    hits = []
    for m in idx:
        for n in idx:
            if m == 0 and n == 0:
                continue
            cm, cn = -((-m * p) // q), -((-n * p) // q)
            for sx, sy in ((1, 1), (-1, 1), (-1, -1), (1, -1)):
                target = np.array([sx * cm, sy * cn]) / (m + n + 1)
                dist = float(np.min(np.hypot(*(estimates - target).T)))
                if dist <= tol:
                    hits.append((m, n, sx, sy, dist))
    return hits
