"""Exact rotation sets of a parametric family of torus maps."""

__version__ = "0.1.0"

from .exact import (  # noqa: E402
    BoundaryCollision,
    ParseError,
    RegimeError,
    RhoParam,
    RotsetError,
    WindowError,
    alpha,
    ceil_mul,
    certify_stability,
    make_rho,
    parse_rho,
)

__all__ = [
    "BoundaryCollision",
    "ParseError",
    "RegimeError",
    "RhoParam",
    "RotsetError",
    "WindowError",
    "alpha",
    "ceil_mul",
    "certify_stability",
    "make_rho",
    "parse_rho",
]
