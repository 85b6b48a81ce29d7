"""Distributions of the relative rounding error, in multiples of the unit roundoff.

The error variable is t = (X - Round(X)) / (X u), supported on [-1, 1].  Two
routes are provided: the exact density obtained by enumerating every
representable of a low-precision format, and the closed-form typical density
(with its finite-precision refinement) that the exact curves approach as the
precision grows.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .density import Density, adaptive_from_callable
from .errors import FeasibilityError
from .minifloat import FloatFormat, MiniFloat

__all__ = [
    "ErrorDistribution",
    "TRange",
    "t_range",
    "coefficient_C",
    "mantissa_cutoff",
    "exact_error_density",
    "typical_density",
    "typical_density_finite_p",
    "typical_pdf",
]

MAX_ENUMERATION = 10_000_000
EDGE_BAND_WARN = 1e-3

MODE_EXACT = "exact"
MODE_TYPICAL = "typical"
MODE_TYPICAL_FINITE_P = "typical_finite_p"


@dataclass(frozen=True)
class ErrorDistribution:
    """A rounding-error density on [-1, 1] plus bookkeeping about its origin."""

    density: Density
    mode: str
    source_format: FloatFormat | None
    excluded_mass: float = 0.0
    edge_band_mass: float = 0.0  # input mass rounding into the e_min/e_max bands


@dataclass(frozen=True)
class TRange:
    """The t-interval on which z / (1 - t u) still rounds to z."""

    owner: MiniFloat
    t_min: float
    t_max: float


def _t_range_ek(e: int, k: int, fmt: FloatFormat) -> tuple[float, float]:
    p = fmt.precision
    two_p1 = 1 << (p + 1)
    if e == fmt.e_min and k == 0:
        return -1.0, two_p1 / (two_p1 + 1)
    if k == 0:
        return -two_p1 / (2 * two_p1 - 1), two_p1 / (two_p1 + 1)
    if e == fmt.e_max and k == (1 << p) - 1:
        return -two_p1 / (2 * two_p1 - 3), 0.0
    return -two_p1 / (two_p1 + 2 * k - 1), two_p1 / (two_p1 + 2 * k + 1)


def t_range(z: MiniFloat, fmt: FloatFormat) -> TRange:
    """Closed-form TRange of a finite non-zero representable; the sign of z
    does not affect the bounds."""
    if z.is_special:
        raise ValueError("t_range is defined only for finite non-zero values")
    t_min, t_max = _t_range_ek(z.exponent_e, z.mantissa_k, fmt)
    return TRange(z, t_min, t_max)


def coefficient_C(e: int, k: int, fmt: FloatFormat) -> float:
    """Closed-form per-representable weight C(e, k).

    For interior exponents this equals
    ((1 - t_max u)(1 - t_min u)) / (t_max - t_min), the factor relating the
    rounding-interval width to |z| u; the extreme-exponent cases use their
    conventional closed forms.
    """
    p = fmt.precision
    two_p = 1 << p
    two_p1 = 1 << (p + 1)
    if not fmt.e_min <= e <= fmt.e_max or not 0 <= k < two_p:
        raise ValueError(f"invalid exponent/mantissa ({e}, {k})")
    if e == fmt.e_min and k == 0:
        return (two_p1 + 1) / (two_p * (two_p1 - 1))
    if k == 0:
        return 2.0 / 3.0
    if e == fmt.e_max and k == two_p - 1:
        return 3.0 * (two_p1 - 1) / two_p1
    return (two_p + k) / two_p1


def mantissa_cutoff(t: float, fmt: FloatFormat) -> int:
    """Largest mantissa k with k <= 2^p (1/|t| - 1) - 1/2, clamped to [-1, 2^p - 1]."""
    if not -1.0 <= t <= 1.0 or t == 0.0:
        raise ValueError(f"t must be in [-1, 1] and non-zero, got {t}")
    two_p = 1 << fmt.precision
    if abs(t) <= 0.5:
        return two_p - 1
    raw = math.floor(two_p * (1.0 / abs(t) - 1.0) - 0.5)
    return int(min(max(raw, -1), two_p - 1))


# ---------------------------------------------------------------------------
# exact density by enumeration

def _enumeration_tables(fmt: FloatFormat):
    """Arrays (z, t_min, t_max) over all finite non-zero representables."""
    p = fmt.precision
    two_p = 1 << p
    n_e = fmt.e_max - fmt.e_min + 1
    e = np.repeat(np.arange(fmt.e_min, fmt.e_max + 1), two_p)
    k = np.tile(np.arange(two_p), n_e)
    z_pos = np.ldexp(1.0 + k / two_p, e.astype(np.int32))
    two_p1 = float(1 << (p + 1))
    t_max = np.where(k == 0, two_p1 / (two_p1 + 1), two_p1 / (two_p1 + 2 * k + 1))
    t_min = np.where(
        (k == 0) & (e == fmt.e_min),
        -1.0,
        np.where(
            k == 0,
            -two_p1 / (2 * two_p1 - 1),
            -two_p1 / (two_p1 + 2 * k - 1),
        ),
    )
    top_mask = (e == fmt.e_max) & (k == two_p - 1)
    t_min = np.where(top_mask, -two_p1 / (2 * two_p1 - 3), t_min)
    t_max = np.where(top_mask, 0.0, t_max)
    # both signs share the t-ranges
    z = np.concatenate([z_pos, -z_pos])
    return z, np.tile(t_min, 2), np.tile(t_max, 2)


def exact_error_density(f: Density, fmt: FloatFormat) -> ErrorDistribution:
    """Exact relative-error density for input density f under the format.

    Enumerates every finite non-zero representable z and sums
    f(z/(1-tu)) u |z| / (1-tu)^2 over the z whose TRange contains t.  The
    breakpoints of the result are all distinct TRange endpoints plus +-1/2;
    the admissible set of z is constant on each piece.  The mass that rounds
    to zero or infinity carries no density on (-1, 1) and is reported as
    ``excluded_mass``; the continuous part is renormalized.
    """
    if fmt.n_finite > MAX_ENUMERATION:
        raise FeasibilityError(
            f"format enumerates {fmt.n_finite} values (> {MAX_ENUMERATION})"
        )
    u = fmt.u
    z, t_min, t_max = _enumeration_tables(fmt)
    breaks = np.unique(np.concatenate([t_min, t_max, [-1.0, -0.5, 0.0, 0.5, 1.0]]))
    breaks = breaks[(breaks >= -1.0) & (breaks <= 1.0)]
    # drop near-duplicate endpoints
    keep = [breaks[0]]
    for b in breaks[1:]:
        if b - keep[-1] > 1e-15:
            keep.append(b)
    breaks = np.array(keep)

    fb = f.breaks
    fc = f._coef_matrix()
    all_breaks: list[float] = []
    all_coefs: list[np.ndarray] = []
    for i in range(len(breaks) - 1):
        a, b = float(breaks[i]), float(breaks[i + 1])
        mid = 0.5 * (a + b)
        sel = (t_min <= mid) & (mid <= t_max)
        if not np.any(sel):
            all_breaks.append(a)
            all_coefs.append(np.zeros(1))
            continue
        z_sel = np.ascontiguousarray(z[sel])

        def fn(ts, z_sel=z_sel):
            return _kernels.error_density_sum(np.atleast_1d(ts), z_sel, u, fb, fc)

        degree = 16 if (b - a) > 0.05 else 6
        sub = adaptive_from_callable(fn, [a, b], degree=degree, piece_cap=64, rel_tol=1e-9)
        for j in range(sub.n_pieces):
            all_breaks.append(float(sub.breaks[j]))
            all_coefs.append(sub.coefs[j])
    all_breaks.append(float(breaks[-1]))
    dens = Density(np.array(all_breaks), all_coefs)

    zero_lo, zero_hi = -fmt.smallest_positive / 2.0, fmt.smallest_positive / 2.0
    zero_mass = max(0.0, f.cdf(zero_hi) - f.cdf(zero_lo))
    inf_mass = max(0.0, f.cdf(-fmt.top)) + max(0.0, f.total_mass - f.cdf(fmt.top))
    # reals rounding up across the subnormal-free gap onto 2^e_min have
    # relative error below -u (t < -1) and carry no density on [-1, 1]
    gap_hi = fmt.smallest_positive / (1.0 + u)
    gap_mass = max(0.0, f.cdf(gap_hi) - f.cdf(zero_hi))
    gap_mass += max(0.0, f.cdf(-zero_hi) - f.cdf(-gap_hi))
    excluded = (zero_mass + inf_mass + gap_mass) / f.total_mass

    covered = dens.total_mass
    expected = 1.0 - excluded
    if expected > 0 and abs(covered - expected) > 1e-4:
        warnings.warn(
            f"enumeration mass {covered:.6g} deviates from 1 - excluded = {expected:.6g}"
        )

    edge = _edge_band_mass(f, fmt)
    if edge > EDGE_BAND_WARN:
        warnings.warn(
            f"input mass {edge:.3g} rounds into the extreme-exponent bands; "
            "the typical-density approximation may be poor"
        )
    return ErrorDistribution(
        density=dens.normalize(),
        mode=MODE_EXACT,
        source_format=fmt,
        excluded_mass=excluded,
        edge_band_mass=edge,
    )


def _edge_band_mass(f: Density, fmt: FloatFormat) -> float:
    """Input mass whose rounding lands in the e_min or e_max binade."""
    p = fmt.precision
    lo_band = (math.ldexp(1.0, fmt.e_min - 1), math.ldexp(1.0 + (2 * ((1 << p) - 1) + 1) / (1 << (p + 1)), fmt.e_min))
    hi_band = (math.ldexp(1.0 + ((1 << (p + 1)) - 1) / (1 << (p + 1)), fmt.e_max - 1), fmt.top)
    total = 0.0
    for a, b in (lo_band, hi_band):
        total += max(0.0, f.cdf(b) - f.cdf(a))
        total += max(0.0, f.cdf(-a) - f.cdf(-b))
    return total / f.total_mass


# ---------------------------------------------------------------------------
# typical densities

def typical_pdf(t) -> np.ndarray:
    """Closed-form limit density: 3/4 on |t| <= 1/2, rational wings beyond."""
    t = np.asarray(t, dtype=np.float64)
    at = np.abs(t)
    wing_arg = np.where(at > 0.5, at, 1.0)  # guard the 1/t in the dead branch
    r = 1.0 / wing_arg - 1.0
    wing = 0.5 * r + 0.25 * r * r
    out = np.where(at <= 0.5, 0.75, wing)
    return np.where(at > 1.0, 0.0, out)


def typical_density() -> ErrorDistribution:
    """The p -> infinity typical distribution as a piecewise interpolant."""
    dens = adaptive_from_callable(typical_pdf, [-1.0, -0.5, 0.5, 1.0], degree=24)
    return ErrorDistribution(density=dens, mode=MODE_TYPICAL, source_format=None)


def typical_density_finite_p(fmt: FloatFormat) -> ErrorDistribution:
    """Finite-precision typical density, including the 1/(1-tu)^2 factor and
    the floor-function mantissa cutoff."""
    p = fmt.precision
    u = fmt.u
    two_p = 1 << p
    mid_coeff = (2.0 / 3.0 + 3.0 * (two_p - 1) / 4.0) / two_p

    def pdf(t):
        t = np.asarray(t, dtype=np.float64)
        at = np.abs(t)
        denom = (1.0 - t * u) ** 2
        wing_arg = np.where(at > 0.5, at, 1.0)
        alpha = np.floor(two_p * (1.0 / wing_arg - 1.0) - 0.5)
        alpha = np.clip(alpha, 0.0, two_p - 1)
        wing = (2.0 / 3.0 + 0.5 * alpha + alpha * alpha / (4.0 * two_p)) / two_p
        out = np.where(at <= 0.5, mid_coeff, wing)
        return np.where(at > 1.0, 0.0, out / denom)

    # alpha jumps exactly at the wing TRange endpoints
    m = np.arange(two_p, dtype=np.float64)
    jumps = 2.0 * two_p / (2.0 * two_p + 2.0 * m + 1.0)
    breaks = np.unique(np.concatenate([[-1.0, -0.5, 0.5, 1.0], jumps, -jumps]))
    dens = adaptive_from_callable(pdf, breaks, degree=8)
    return ErrorDistribution(
        density=dens.normalize(), mode=MODE_TYPICAL_FINITE_P, source_format=fmt
    )
