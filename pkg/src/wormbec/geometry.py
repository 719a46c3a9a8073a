"""Static wormhole geometry for the power-law shape family.

Shape functions ``b(r) = b0 * (r/b0)**q`` pin the throat at ``r = b0`` for
every exponent. Everything in this module depends only on the ratio
``r/b0``, so any single length unit (micrometres elsewhere in this
package) can be used throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad

from .exceptions import ConvergenceError, DomainError

__all__ = [
    "ShapeFunction",
    "ThroatClass",
    "classify_throat",
    "shape_b",
    "metric_factor",
    "effective_light_speed",
    "proper_distance",
    "embedding_height",
]


class ThroatClass(enum.Enum):
    """Throat geometry class as a function of the shape exponent."""

    TRAVERSABLE = "traversable"            # q < 1
    DEGENERATE = "degenerate"              # q = 1
    SIGNATURE_BROKEN = "signature_broken"  # q > 1


def classify_throat(q: float) -> ThroatClass:
    """Classify the throat: the metric factor outside it is positive only
    for q < 1, identically zero for q = 1, and negative for q > 1."""
    if q < 1.0:
        return ThroatClass.TRAVERSABLE
    if q == 1.0:
        return ThroatClass.DEGENERATE
    return ThroatClass.SIGNATURE_BROKEN


@dataclass(frozen=True)
class ShapeFunction:
    """Power-law shape function with throat radius ``b0`` and exponent ``q``."""

    b0: float
    q: float

    def __post_init__(self) -> None:
        if not self.b0 > 0.0:
            raise DomainError(f"throat radius must be positive, got {self.b0!r}")

    @property
    def throat_class(self) -> ThroatClass:
        return classify_throat(self.q)


def _require_outside_throat(shape: ShapeFunction, r: float) -> None:
    if r < shape.b0:
        raise DomainError(f"r = {r!r} is inside the throat (b0 = {shape.b0!r})")


def _require_traversable(shape: ShapeFunction, what: str) -> None:
    if shape.q >= 1.0:
        raise DomainError(f"{what} requires q < 1, got q = {shape.q!r} "
                          f"({shape.throat_class.value})")


def shape_b(shape: ShapeFunction, r: float) -> float:
    """b(r) = b0 * (r/b0)**q; equals b0 exactly at the throat."""
    _require_outside_throat(shape, r)
    return shape.b0 * (r / shape.b0) ** shape.q


def metric_factor(shape: ShapeFunction, r: float) -> float:
    """1 - b(r)/r, in [0, 1) outside the throat for q < 1.

    For q > 1 the value is negative for r > b0; callers decide whether a
    broken signature is an error for them.
    """
    _require_outside_throat(shape, r)
    # expm1 keeps precision where b(r)/r -> 1 near the throat.
    return -math.expm1(-(1.0 - shape.q) * math.log(r / shape.b0))


def effective_light_speed(shape: ShapeFunction, r: float, light_speed: float) -> float:
    """Position-dependent signal speed c * sqrt(1 - b(r)/r)."""
    factor = metric_factor(shape, r)
    if factor < 0.0:
        raise DomainError(f"metric factor {factor!r} < 0 at r = {r!r}: "
                          "no real signal speed")
    return light_speed * math.sqrt(factor)


def _check_side(side: int) -> int:
    if side not in (1, -1):
        raise DomainError(f"side must be +1 or -1, got {side!r}")
    return side


def _integrate_from_throat(integrand: Callable[[float, float, float], float],
                           shape: ShapeFunction, r: float,
                           rel_tol: float, abs_tol: float) -> float:
    # Both radial integrands behave like (r' - b0)**-1/2 at the throat;
    # integrating in u = sqrt(r' - b0) removes the singularity.
    u_max = math.sqrt(r - shape.b0)
    result = quad(integrand, 0.0, u_max, args=(shape.b0, 1.0 - shape.q),
                  epsabs=abs_tol, epsrel=rel_tol, limit=200, full_output=1)
    if len(result) > 3:
        raise ConvergenceError(
            f"quadrature failed on [{shape.b0!r}, {r!r}] "
            f"(estimate {result[0]!r}, error {result[1]!r}): {result[3]}")
    return result[0]


def _proper_integrand(u: float, b0: float, one_minus_q: float) -> float:
    if u == 0.0:
        return 2.0 * math.sqrt(b0 / one_minus_q)
    factor = -math.expm1(-one_minus_q * math.log1p(u * u / b0))
    return 2.0 * u / math.sqrt(factor)


def _embedding_integrand(u: float, b0: float, one_minus_q: float) -> float:
    if u == 0.0:
        return 2.0 * math.sqrt(b0 / one_minus_q)
    rise = math.expm1(one_minus_q * math.log1p(u * u / b0))
    return 2.0 * u / math.sqrt(rise)


def proper_distance(shape: ShapeFunction, r: float, side: int = 1, *,
                    rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> float:
    """Signed proper radial distance from the throat to r.

    Zero at the throat, strictly increasing in r, with the sign chosen by
    ``side`` for the two branches.
    """
    _require_traversable(shape, "proper distance")
    _require_outside_throat(shape, r)
    sign = _check_side(side)
    if r == shape.b0:
        return 0.0
    return sign * _integrate_from_throat(_proper_integrand, shape, r, rel_tol, abs_tol)


def embedding_height(shape: ShapeFunction, r: float, *,
                     rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> float:
    """Height z(r) >= 0 of the embedding surface of revolution.

    The surface is the one in flat cylindrical space whose induced metric
    reproduces the spatial slice, i.e. dz/dr = (r/b(r) - 1)**-1/2. Mirror
    the result to -z for the second sheet.
    """
    _require_traversable(shape, "embedding")
    _require_outside_throat(shape, r)
    if r == shape.b0:
        return 0.0
    return _integrate_from_throat(_embedding_integrand, shape, r, rel_tol, abs_tol)
