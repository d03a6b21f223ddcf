"""Roundness bounds for the four-quadrant hull, kept as exact rational
multiples of 1/pi so that every comparison cancels pi."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .diagonal import best_diagonal, classify_intervals
from .exact import RhoParam, RotsetError, parse_rho
from .geometry import family_hull, gamma_sup

DECIMAL_DIGITS = 12


def lower_factor(rho: Fraction, d: Fraction) -> Fraction:
    """lower = factor / pi with factor = 4 d / rho."""
    return 4 * d / rho


def upper_factor(rho: Fraction, d: Fraction, t: int) -> Fraction:
    """Pentagon bound: 4/(1 - rho t) * (-1 + 4 d/rho - 2 (1 + rho t) (d/rho)^2)."""
    r = d / rho
    rt = rho * t
    return 4 / (1 - rt) * (-1 + 4 * r - 2 * (1 + rt) * r * r)


def pentagon_vertex(rho: Fraction, d: Fraction, gamma: Fraction) -> tuple[Fraction, Fraction]:
    """Where the line of slope gamma through (0, rho) meets x + y = 2d."""
    return ((2 * d - rho) / (1 + gamma), (2 * d * gamma + rho) / (1 + gamma))


def pentagon_area(rho: Fraction, d: Fraction, gamma: Fraction) -> Fraction:
    return (-rho * rho + 4 * rho * d - 2 * (1 - gamma) * d * d) / (1 + gamma)


def pi_decimal(factor: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    with mpmath.workdps(digits + 10):
        val = mpmath.mpf(factor.numerator) / factor.denominator / mpmath.pi
        return mpmath.nstr(val, digits)


def iso_decimal(ratio: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    """sqrt(2) * ratio at ``digits`` significant digits."""
    with mpmath.workdps(digits + 10):
        val = mpmath.sqrt(2) * mpmath.mpf(ratio.numerator) / ratio.denominator
        return mpmath.nstr(val, digits)


def iso_interval(rho: RhoParam) -> tuple[Fraction, Fraction] | None:
    """The interval ((k+1)/(k+2), (k+2)/(k+3)) containing rho, above 1/2."""
    if not rho.high:
        return None
    p, q = rho.numerator, rho.denominator
    big = q // (q - p)  # rho in (1 - 1/big, 1 - 1/(big+1))
    return (Fraction(big - 1, big), Fraction(big, big + 1))


@dataclass
class RoundnessReport:
    rho: RhoParam
    d: Fraction
    gamma: Fraction
    lower: Fraction
    upper: Fraction
    iso_ratio: Fraction  # iso = sqrt(2) * iso_ratio
    estimate: Fraction | None = None
    index_bound: int | None = None
    tag: str = ""
    d_source: str = ""
    digits: int = DECIMAL_DIGITS

    @property
    def iso(self) -> str:
        return iso_decimal(self.iso_ratio, self.digits)

    @property
    def sandwich_ok(self) -> bool | None:
        if self.estimate is None:
            return None
        return self.lower <= self.estimate <= self.upper

    def describe(self) -> dict:
        def rat(v):
            return None if v is None else {"num": v.numerator, "den": v.denominator}

        return {
            **self.rho.describe(),
            "d": rat(self.d),
            "d_formula": self.d_source,
            "gamma": rat(self.gamma),
            "lower_factor": rat(self.lower),
            "upper_factor": rat(self.upper),
            "estimate_factor": rat(self.estimate),
            "factor_unit": "1/pi",
            "lower_decimal": pi_decimal(self.lower, self.digits),
            "upper_decimal": pi_decimal(self.upper, self.digits),
            "estimate_decimal": None if self.estimate is None else pi_decimal(self.estimate, self.digits),
            "iso_decimal": self.iso,
            "iso_interval": _interval_json(iso_interval(self.rho)),
            "decimal_digits": self.digits,
            "index_bound": self.index_bound,
            "sandwich_ok": self.sandwich_ok,
            "tag": self.tag,
        }


def _interval_json(iv):
    if iv is None:
        return None
    return [{"num": v.numerator, "den": v.denominator} for v in iv]


def bounds(rho: RhoParam) -> RoundnessReport:
    rep = best_diagonal(rho)
    r = rho.value
    t = rho.denominator // rho.numerator
    d = rep.d
    return RoundnessReport(
        rho=rho,
        d=d,
        gamma=gamma_sup(rho),
        lower=lower_factor(r, d),
        upper=upper_factor(r, d, t),
        iso_ratio=d / r,
        tag=classify_intervals(rho),
        d_source="(K-1)/(2K-1), K=floor(1/(1-rho))" if rho.high else "M1/(2 M1 t + 1), t=floor(1/rho)",
    )


def numeric_roundness(rho: RhoParam, index_bound: int) -> Fraction:
    """4 Area(one-quadrant hull at the bound) / rho^2, a factor of 1/pi."""
    area = family_hull(rho, index_bound).hull.area
    return 4 * area / (rho.value * rho.value)


def roundness(rho: RhoParam, index_bound: int | None = None) -> RoundnessReport:
    rep = bounds(rho)
    if index_bound is not None:
        rep.estimate = numeric_roundness(rho, index_bound)
        rep.index_bound = index_bound
    return rep


def iso_roundness(rho: RhoParam, digits: int = DECIMAL_DIGITS) -> tuple[str, tuple | None]:
    rep = bounds(rho)
    return iso_decimal(rep.iso_ratio, digits), iso_interval(rho)


# -- grid scan -----------------------------------------------------------------


@dataclass
class ScanRow:
    expr: str
    report: RoundnessReport | None
    error: str = ""
    jump: bool = False


@dataclass
class ScanResult:
    rows: list[ScanRow]
    jump_factor: float
    typical_step: float | None = None
    notes: list[str] = field(default_factory=list)


def grid_exprs(start: str, stop: str, step: str, offset: str = "pi*1e-7") -> list[str]:
    """Grid a, a+h, ... (<= b), each shifted by an irrational offset so the
    surrogates avoid rational boundaries."""
    a, b, h = Fraction(start), Fraction(stop), Fraction(step)
    if h <= 0:
        raise RotsetError("step must be positive")
    out = []
    k = 0
    while a + k * h <= b:
        val = a + k * h
        out.append(f"{_dec(val)}+{offset}")
        k += 1
    return out


def _dec(v: Fraction) -> str:
    """Finite decimal rendering of a grid value (steps are decimal)."""
    s = f"{v.numerator / v.denominator:.15f}".rstrip("0").rstrip(".")
    if Fraction(s) != v:
        # fall back to an exact quotient for non-decimal grids
        return f"{v.numerator}/{v.denominator}"
    return s or "0"


def scan(exprs: list[str], index_bound: int | None, precision: int | None = None,
         jump_factor: float = 10.0, workers: int = 1) -> ScanResult:
    """Evaluate the bounds (and the estimate when ``index_bound`` is set) on
    each grid point, then flag adjacent jumps in the lower bound larger than
    ``jump_factor`` times the median increment."""

    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_one, [(e, index_bound, precision) for e in exprs]))
    else:
        rows = [_scan_one((e, index_bound, precision)) for e in exprs]
    res = ScanResult(rows, jump_factor)
    vals = [(i, float(r.report.lower)) for i, r in enumerate(rows) if r.report is not None]
    diffs = [abs(b[1] - a[1]) for a, b in zip(vals, vals[1:])]
    if diffs:
        typical = statistics.median(diffs)
        res.typical_step = typical
        for (ia, va), (ib, vb) in zip(vals, vals[1:]):
            if abs(vb - va) > jump_factor * typical:
                rows[ib].jump = True
    return res


def _scan_one(args) -> ScanRow:
    expr, index_bound, precision = args
    try:
        rho = parse_rho(expr, precision, index_bound)
        return ScanRow(expr, roundness(rho, index_bound))
    except RotsetError as exc:
        return ScanRow(expr, None, str(exc))
