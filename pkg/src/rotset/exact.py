"""Exact rational stand-in for an irrational rotation parameter.

Every predicate in the package (ceilings, comparisons of gaps against the
parameter) is decided on a reduced fraction ``p/q``.  The index guard
``m <= max_safe_index <= q - 2`` keeps ``m * p / q`` away from the integers
and every gap ``alpha_m`` away from ``p / q`` itself, and
:func:`certify_stability` transfers the predicates to any real number within
the stated uncertainty.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd

import mpmath

DEFAULT_PRECISION = 15
DEFAULT_MAX_INDEX = 100_000
PRECISION_ENV = "ROTSET_PRECISION"
MIN_PRECISION = 12


class RotsetError(Exception):
    """Base class for domain errors raised by this package."""


class ParseError(RotsetError):
    pass


class BoundaryCollision(RotsetError):
    """The surrogate equals a parameter value where the regime changes."""


class WindowError(RotsetError):
    """An index lies outside the certified window."""


class RegimeError(RotsetError):
    pass


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_PRECISION
    try:
        value = int(raw)
    except ValueError as exc:
        raise ParseError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from exc
    return value


def window_limit(q: int) -> int:
    """Largest admissible window: below q - 1, where alpha_{q-1} equals p/q."""
    return q - 2


def boundary_name(p: int, q: int) -> str | None:
    """Name the excluded boundary that ``p/q`` hits, or None.

    Excluded values: 1/2, 1/k, 1 - 1/k, 3/(3t+2) (includes 3/5) and
    2/(2t+1) (includes 2/3).
    """
    if 2 * p == q:
        return "1/2"
    if p == 1:
        return f"1/{q}"
    if q - p == 1:
        return f"1-1/{q}"
    if p == 3 and q % 3 == 2:
        return f"3/{q}"
    if p == 2 and q % 2 == 1:
        return f"2/{q}"
    return None


@dataclass(frozen=True)
class RhoParam:
    """Reduced fraction ``numerator/denominator`` in (0, 1) with a window.

    ``uncertainty`` is the radius around the fraction in which the intended
    real parameter lies (zero when the fraction itself is studied).
    """

    numerator: int
    denominator: int
    uncertainty: Fraction = Fraction(0)
    max_safe_index: int = 1
    expr: str = ""
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        p, q = self.numerator, self.denominator
        if not (0 < p < q):
            raise RotsetError(f"rho = {p}/{q} is outside (0, 1)")
        if gcd(p, q) != 1:
            raise RotsetError(f"{p}/{q} is not reduced")
        if self.uncertainty < 0:
            raise RotsetError("uncertainty must be nonnegative")
        if not (1 <= self.max_safe_index <= window_limit(q)):
            raise WindowError(
                f"max_safe_index {self.max_safe_index} must lie in [1, {window_limit(q)}]"
            )
        hit = boundary_name(p, q)
        if hit is not None:
            raise BoundaryCollision(f"rho = {p}/{q} collides with the boundary {hit}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def high(self) -> bool:
        """True in the regime rho > 1/2."""
        return 2 * self.numerator > self.denominator

    @property
    def regime(self) -> str:
        return "high" if self.high else "low"

    def mirror(self) -> "RhoParam":
        """The surrogate for ``1 - rho`` with the same window."""
        return replace(
            self,
            numerator=self.denominator - self.numerator,
            expr=f"1-({self.expr})" if self.expr else "",
        )

    def with_window(self, max_index: int) -> "RhoParam":
        return replace(self, max_safe_index=max_index)

    def describe(self) -> dict:
        return {
            "rho_expr": self.expr,
            "rho": {"num": self.numerator, "den": self.denominator},
            "uncertainty": {
                "num": self.uncertainty.numerator,
                "den": self.uncertainty.denominator,
            },
            "max_safe_index": self.max_safe_index,
            "precision": self.precision,
        }


def make_rho(value, max_index: int | None = None, uncertainty=0, expr: str = "") -> RhoParam:
    """Build a surrogate straight from a rational value (mostly for tests)."""
    frac = Fraction(value)
    q = frac.denominator
    window = _resolve_window(q, max_index)
    return RhoParam(frac.numerator, q, Fraction(uncertainty), window, expr or str(frac))


def _resolve_window(q: int, max_index: int | None) -> int:
    if max_index is None:
        return min(DEFAULT_MAX_INDEX, window_limit(q))
    if max_index < 1:
        raise WindowError("max_index must be positive")
    if max_index > window_limit(q):
        raise WindowError(
            f"denominator {q} is too small for the requested window {max_index} "
            f"(largest is {window_limit(q)}); raise --precision"
        )
    return max_index


_NUM = r"(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?"
_ATOM = rf"(?:{_NUM}|pi|sqrt\(\s*[0-9]+\s*\))"
_TERM_RE = re.compile(rf"\s*([-+]?)\s*({_ATOM})(?:\s*([*/])\s*({_ATOM}))?\s*")
_FRACTION_RE = re.compile(r"^\s*([0-9]+)\s*/\s*([0-9]+)\s*$")


def _truncate(value: Fraction, precision: int) -> Fraction:
    scale = 10**precision
    return Fraction((value.numerator * scale) // value.denominator, scale)


def _atom(text: str, digits: int) -> tuple[Fraction, bool]:
    """Value of a number, pi or sqrt(d), and whether it is exact."""
    if text == "pi":
        with mpmath.workdps(digits + 10):
            scaled = mpmath.floor(mpmath.pi * mpmath.mpf(10) ** digits)
        return Fraction(int(scaled), 10**digits), False
    if text.startswith("sqrt"):
        radicand = int(text[text.index("(") + 1 : text.index(")")])
        root = int(mpmath.floor(mpmath.sqrt(radicand)))
        if root * root == radicand:
            return Fraction(root), True
        with mpmath.workdps(digits + 10):
            scaled = mpmath.floor(mpmath.sqrt(radicand) * mpmath.mpf(10) ** digits)
        return Fraction(int(scaled), 10**digits), False
    return Fraction(text), True


def _parse_value(expr: str, precision: int) -> tuple[Fraction, bool]:
    """Evaluate a signed sum of terms; each term is an atom or a product or
    quotient of two atoms.  Irrational atoms carry far more digits than the
    final truncation needs."""
    m = _FRACTION_RE.match(expr)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ParseError(f"zero denominator in {expr!r}")
        return Fraction(int(m.group(1)), den), True
    digits = precision + 40
    pos, total, exact, first = 0, Fraction(0), True, True
    text = expr.strip()
    if not text:
        raise ParseError("empty expression")
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos or (not first and not m.group(1)):
            raise ParseError(
                f"cannot parse {expr!r}; expected a decimal, p/q, a+pi*b or a+sqrt(d)*b"
            )
        sign, left, op, right = m.groups()
        val, ex = _atom(left, digits)
        if op:
            rval, rex = _atom(right, digits)
            if op == "*":
                val = val * rval
            else:
                if rval == 0:
                    raise ParseError(f"division by zero in {expr!r}")
                val = val / rval
            ex = ex and rex
        total += -val if sign == "-" else val
        exact = exact and ex
        pos, first = m.end(), False
    return total, exact


def parse_rho(expr: str, precision: int | None = None, max_index: int | None = None) -> RhoParam:
    """Parse a parameter expression into a certified rational surrogate.

    Exact inputs (decimal literals with at most ``precision`` decimals, or
    ``p/q``) are kept as they are with zero uncertainty.  Anything else is
    truncated to ``precision`` decimal places with uncertainty one unit in the
    last place.
    """
    if precision is None:
        precision = default_precision()
    if precision < MIN_PRECISION:
        raise ParseError(f"precision must be at least {MIN_PRECISION} digits")
    value, exact = _parse_value(expr, precision)
    if not (0 < value < 1):
        raise RotsetError(f"rho = {float(value)!r} is outside (0, 1)")
    if exact:
        # an exact input that names a boundary is rejected before truncation
        # could move it off the boundary
        hit = boundary_name(value.numerator, value.denominator)
        if hit is not None:
            raise BoundaryCollision(f"rho = {value} collides with the boundary {hit}")
    uncertainty = Fraction(0)
    truncated = _truncate(value, precision)
    if not exact or truncated != value:
        value = truncated
        uncertainty = Fraction(1, 10**precision)
        if not (0 < value < 1):
            raise RotsetError(f"rho truncates to {value}, outside (0, 1)")
    window = _resolve_window(value.denominator, max_index)
    return RhoParam(
        value.numerator,
        value.denominator,
        uncertainty,
        window,
        expr.strip(),
        precision,
    )


def _check_index(rho: RhoParam, m: int, lowest: int) -> None:
    if not (lowest <= m <= rho.max_safe_index):
        raise WindowError(
            f"index {m} outside the certified window [{lowest}, {rho.max_safe_index}]"
        )


def ceil_mul(rho: RhoParam, m: int) -> int:
    """Exact ceiling of ``m * rho`` for ``0 <= m <= max_safe_index``."""
    _check_index(rho, m, 0)
    return -((-m * rho.numerator) // rho.denominator)


def alpha(rho: RhoParam, m: int) -> Fraction:
    """Gap ``ceil(m rho) - m rho`` as an exact fraction in (0, 1)."""
    _check_index(rho, m, 1)
    p, q = rho.numerator, rho.denominator
    return Fraction(-((-m * p) // q) * q - m * p, q)


def alpha_residue(p: int, q: int, m: int) -> int:
    """``q * alpha_m`` as an integer; zero only when q divides m p."""
    return (-m * p) % q


@dataclass(frozen=True)
class CertificationReport:
    passed: bool
    checked_up_to: int
    first_failure: int | None
    reason: str
    rho: RhoParam

    def describe(self) -> dict:
        return {
            "status": "PASS" if self.passed else "FAIL",
            "checked_up_to": self.checked_up_to,
            "first_failure": self.first_failure,
            "reason": self.reason,
            **self.rho.describe(),
        }


def certify_stability(rho: RhoParam, M: int) -> CertificationReport:
    """Check that every ceiling and every gap-vs-rho comparison up to ``M``
    is the same for all reals within ``rho.uncertainty`` of the surrogate.

    Conditions per m: ``dist(m rho, Z) > m eps`` and
    ``|alpha_m - rho| > (m + 1) eps``.  Everything is scaled by ``q`` and
    by the uncertainty denominator so the loop stays in integers.
    """
    p, q = rho.numerator, rho.denominator
    if M < 1:
        raise WindowError("M must be positive")
    if M > window_limit(q):
        raise WindowError(f"M = {M} exceeds {window_limit(q)}, the largest window for denominator {q}")
    eps = rho.uncertainty
    if eps == 0:
        return CertificationReport(True, M, None, "zero uncertainty", rho.with_window(M))
    en, ed = eps.numerator, eps.denominator
    for m in range(1, M + 1):
        r = (m * p) % q
        dist_q = min(r, q - r)
        # dist / 1 > m * en / ed  <=>  dist_q * ed > m * en * q
        if dist_q * ed <= m * en * q:
            return CertificationReport(
                False, M, m, "m*rho lies within m*uncertainty of an integer", rho
            )
        a_q = (q - r) % q
        if abs(a_q - p) * ed <= (m + 1) * en * q:
            return CertificationReport(
                False, M, m, "alpha_m lies within (m+1)*uncertainty of rho", rho
            )
    return CertificationReport(True, M, None, "all indices stable", rho.with_window(M))
