"""1+1D recipe: control profiles B(x), a(x), c_s(x) over the lab coordinate
and the slope-based feasibility audit against demonstrated field control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .exceptions import DomainError
from .feshbach import (BOHR_RADIUS, CondensateSpec, FeshbachResonance,
                       sound_speed_from_scattering)
from .geometry import ShapeFunction, _require_outside_throat, metric_factor
from .tableio import write_csv

__all__ = [
    "SLOPE_CAPABILITY_PER_UM",
    "ProfileSample1D",
    "Feasibility1D",
    "field_profile_1d",
    "scattering_profile_1d",
    "lab_coordinate_1d",
    "lab_coordinate_inverse",
    "slope_metric",
    "symmetric_grid",
    "sample_profile_1d",
    "feasibility_1d",
    "write_profile_csv",
]

# Demonstrated spatial control of a/(100 a0), per micron.
SLOPE_CAPABILITY_PER_UM = 0.067

CSV_COLUMNS = ("x_um", "r_um", "a_over_abg", "a_over_100a0",
               "B_gauss", "cs_m_per_s", "valid")


@dataclass(frozen=True)
class ProfileSample1D:
    """One grid point of the 1+1D control profile."""

    x: float
    r: float
    a_over_abg: float
    a_over_100a0: float
    b_gauss: float
    c_s: float
    valid: bool


@dataclass(frozen=True)
class Feasibility1D:
    """Result of the slope audit: max |d[a/(100a0)]/dx| outside the
    throat-exclusion window versus the capability threshold."""

    max_slope: float
    slope_at: float
    threshold: float
    feasible: bool
    window: float


def field_profile_1d(shape: ShapeFunction, res: FeshbachResonance, r: float) -> float:
    """Magnetic field (Gauss) that realizes the target sound-speed profile."""
    _require_outside_throat(shape, r)
    return (r / shape.b0) ** (1.0 - shape.q) * res.width + res.b_res


def scattering_profile_1d(shape: ShapeFunction, r: float) -> float:
    """a(r)/a_bg = 1 - (b0/r)**(1-q).

    Identical to the metric factor: that equality is the design condition
    the field profile enforces.
    """
    return metric_factor(shape, r)


def lab_coordinate_1d(r: float, b0: float, side: int = 1) -> float:
    """Lab coordinate x = +-(r - b0), zero at the throat."""
    if r < b0:
        raise DomainError(f"r = {r!r} is inside the throat (b0 = {b0!r})")
    if side not in (1, -1):
        raise DomainError(f"side must be +1 or -1, got {side!r}")
    return side * (r - b0)


def lab_coordinate_inverse(x: float, b0: float) -> tuple[float, int]:
    """Map a lab coordinate back to (r, side)."""
    return abs(x) + b0, (1 if x >= 0.0 else -1)


def slope_metric(shape: ShapeFunction, res: FeshbachResonance, x: float) -> float:
    """Analytic d[a/(100 a0)]/d|x| at lab coordinate x (per micron).

    At x = 0 this evaluates to the finite one-sided throat limit
    (1-q)/b0 * a_bg/(100 a0); the profile itself only has a kink there.
    """
    scale = res.a_bg / (100.0 * BOHR_RADIUS)
    r = abs(x) + shape.b0
    return scale * (1.0 - shape.q) * shape.b0 ** (1.0 - shape.q) * r ** (shape.q - 2.0)


def symmetric_grid(x_max: float, step: float) -> list[float]:
    """Grid over [-x_max, x_max] containing x = 0 exactly."""
    if step <= 0.0:
        raise DomainError(f"step must be positive, got {step!r}")
    if x_max < 0.0:
        raise DomainError(f"x_max must be non-negative, got {x_max!r}")
    half = int(math.floor(x_max / step + 1e-9))
    return [k * step for k in range(-half, half + 1)]


def sample_profile_1d(shape: ShapeFunction, spec: CondensateSpec,
                      x_max: float = 20.0, step: float = 0.1) -> list[ProfileSample1D]:
    """Sample all 1+1D control quantities on a symmetric lab grid.

    Samples where the scattering length goes negative (q > 1) carry
    valid=False and a NaN sound speed.
    """
    grid = symmetric_grid(x_max, step)
    if not grid:
        raise DomainError("empty grid")
    a_bg = spec.resonance.a_bg
    samples = []
    for x in grid:
        r = abs(x) + shape.b0
        a_over = scattering_profile_1d(shape, r)
        b = field_profile_1d(shape, spec.resonance, r)
        valid = a_over >= 0.0
        # The scattering route keeps c_s(throat) exactly zero; agreement
        # with the field route is covered by the consistency tests.
        c_s = sound_speed_from_scattering(a_bg * a_over, spec) if valid else math.nan
        samples.append(ProfileSample1D(
            x=x, r=r,
            a_over_abg=a_over,
            a_over_100a0=a_over * a_bg / (100.0 * BOHR_RADIUS),
            b_gauss=b, c_s=c_s, valid=valid))
    return samples


def feasibility_1d(shape: ShapeFunction, spec: CondensateSpec,
                   x_max: float = 20.0, step: float = 0.1, *,
                   threshold: float = SLOPE_CAPABILITY_PER_UM,
                   window: float = 1.0) -> Feasibility1D:
    """Audit the profile slope against the capability threshold.

    The max of |slope_metric| is taken over grid points with |x| >= window
    (the profile is even in x, so only the x >= 0 half needs scanning).
    """
    candidates = [x for x in symmetric_grid(x_max, step)
                  if x >= 0.0 and abs(x) >= window]
    if not candidates:
        raise DomainError("exclusion window leaves no grid points")
    max_slope = -math.inf
    slope_at = candidates[0]
    for x in candidates:
        slope = abs(slope_metric(shape, spec.resonance, x))
        if slope > max_slope:
            max_slope = slope
            slope_at = x
    return Feasibility1D(max_slope=max_slope, slope_at=slope_at,
                         threshold=threshold,
                         feasible=max_slope <= threshold, window=window)


def write_profile_csv(samples: Sequence[ProfileSample1D], path: str | Path) -> Path:
    rows = [(s.x, s.r, s.a_over_abg, s.a_over_100a0, s.b_gauss, s.c_s, s.valid)
            for s in samples]
    return write_csv(path, CSV_COLUMNS, rows)
