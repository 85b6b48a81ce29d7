"""Reduced-precision binary floating-point formats and round-to-nearest emulation.

A format has p explicit mantissa bits and exponents in [e_min, e_max]; the
finite values are exactly (-1)^s * 2^e * (1 + k/2^p) plus {0, +inf, -inf}.
There are no subnormals: reals below the smallest positive value's rounding
interval round to zero, reals above the largest finite value round to infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Iterator

import numpy as np

from .errors import FeasibilityError

__all__ = [
    "FloatFormat",
    "MiniFloat",
    "RoundingInterval",
    "Special",
    "value",
    "rounding_interval",
    "round_nearest",
    "emulate_op",
    "enumerate_finite",
    "enumerate_value_array",
]

MAX_PRECISION = 16  # enumeration feasibility guard; also keeps host doubles exact


class Special(Enum):
    ZERO = "zero"
    POS_INF = "+inf"
    NEG_INF = "-inf"


@dataclass(frozen=True)
class FloatFormat:
    """A reduced-precision binary floating-point format."""

    precision: int
    e_min: int
    e_max: int

    def __post_init__(self) -> None:
        if self.precision > MAX_PRECISION:
            raise FeasibilityError(
                f"precision {self.precision} exceeds the enumeration guard ({MAX_PRECISION})"
            )
        if self.precision < 1:
            raise ValueError(f"precision must be >= 1, got {self.precision}")
        if self.e_min >= self.e_max:
            raise ValueError(f"e_min must be < e_max, got [{self.e_min}, {self.e_max}]")

    @property
    def u(self) -> float:
        """Unit roundoff, 2^-(p+1)."""
        return math.ldexp(1.0, -(self.precision + 1))

    @property
    def top(self) -> float:
        """Largest finite value, 2^e_max * (2 - 2^-p)."""
        return math.ldexp(2.0 - math.ldexp(1.0, -self.precision), self.e_max)

    @property
    def smallest_positive(self) -> float:
        return math.ldexp(1.0, self.e_min)

    @property
    def overflow_boundary(self) -> float:
        """Smallest magnitude whose exponent exceeds e_max, 2^(e_max+1).

        Range analysis counts an operation as overflowing when its exact
        result reaches this binade boundary; the rounding error model cannot
        push a result below it into overflow.
        """
        return math.ldexp(1.0, self.e_max + 1)

    @property
    def n_finite(self) -> int:
        return 2 * (self.e_max - self.e_min + 1) * (1 << self.precision)

    @classmethod
    def from_bits(cls, exponent_bits: int, mantissa_bits: int) -> "FloatFormat":
        """Map bit counts to an exponent range, IEEE-style.

        With b exponent bits the biased exponents run over [1, 2^b - 2]
        (all-zeros and all-ones patterns reserved), giving
        e in [2 - 2^(b-1), 2^(b-1) - 1]; (5, 10) reproduces binary16.
        The (3, 3) format then has top float 15 and overflow boundary 16,
        which reproduces the reference overflow benchmark probability.
        """
        if exponent_bits < 2:
            raise ValueError("exponent_bits must be >= 2")
        half = 1 << (exponent_bits - 1)
        return cls(precision=mantissa_bits, e_min=2 - half, e_max=half - 1)

    @classmethod
    def half_precision(cls) -> "FloatFormat":
        return cls.from_bits(5, 10)


@total_ordering
@dataclass(frozen=True)
class MiniFloat:
    """One representable value: either (sign_s, exponent_e, mantissa_k) or a special."""

    sign_s: int
    exponent_e: int
    mantissa_k: int
    value: float
    special: Special | None = None

    @classmethod
    def finite(cls, s: int, e: int, k: int, fmt: FloatFormat) -> "MiniFloat":
        return cls(s, e, k, value(s, e, k, fmt))

    @classmethod
    def zero(cls) -> "MiniFloat":
        return cls(0, 0, 0, 0.0, Special.ZERO)

    @classmethod
    def pos_inf(cls) -> "MiniFloat":
        return cls(0, 0, 0, math.inf, Special.POS_INF)

    @classmethod
    def neg_inf(cls) -> "MiniFloat":
        return cls(1, 0, 0, -math.inf, Special.NEG_INF)

    @property
    def is_finite(self) -> bool:
        return self.special not in (Special.POS_INF, Special.NEG_INF)

    @property
    def is_special(self) -> bool:
        return self.special is not None

    def __lt__(self, other: "MiniFloat") -> bool:
        return self.value < other.value


@dataclass(frozen=True)
class RoundingInterval:
    """The closure of the set of reals rounding to ``owner``."""

    lo: float
    hi: float
    owner: MiniFloat

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def value(s: int, e: int, k: int, fmt: FloatFormat) -> float:
    """Real value (-1)^s * 2^e * (1 + k/2^p); exact in a host double for p <= 16."""
    if s not in (0, 1):
        raise ValueError(f"sign must be 0 or 1, got {s}")
    if not fmt.e_min <= e <= fmt.e_max:
        raise ValueError(f"exponent {e} outside [{fmt.e_min}, {fmt.e_max}]")
    if not 0 <= k < (1 << fmt.precision):
        raise ValueError(f"mantissa {k} outside [0, {(1 << fmt.precision) - 1}]")
    mag = math.ldexp(1.0 + k / (1 << fmt.precision), e)
    return -mag if s else mag


def rounding_interval(z: MiniFloat, fmt: FloatFormat) -> RoundingInterval:
    """Closed-form [lo, hi] bounding the reals that round to finite non-zero z."""
    if z.is_special:
        raise ValueError("rounding_interval is defined only for finite non-zero values")
    lo, hi = _interval_sek(z.sign_s, z.exponent_e, z.mantissa_k, fmt)
    return RoundingInterval(lo, hi, z)


def _interval_sek(s: int, e: int, k: int, fmt: FloatFormat) -> tuple[float, float]:
    p = fmt.precision
    two_p1 = 1 << (p + 1)
    if k == 0 and e == fmt.e_min:
        lo = math.ldexp(1.0, e - 1)
    elif k == 0:
        lo = math.ldexp(1.0 + (two_p1 - 1) / two_p1, e - 1)
    else:
        lo = math.ldexp(1.0 + (2 * k - 1) / two_p1, e)
    if e == fmt.e_max and k == (1 << p) - 1:
        hi = value(0, e, k, fmt)  # top float: nothing above it rounds down to it
    else:
        hi = math.ldexp(1.0 + (2 * k + 1) / two_p1, e)
    if s:
        return -hi, -lo
    return lo, hi


def round_nearest(x: float, fmt: FloatFormat) -> MiniFloat:
    """Round a real to the nearest representable; ties go to the even mantissa.

    Reals strictly above the top float overflow to infinity (the top float's
    rounding interval is closed at the top float itself); reals below half the
    smallest positive value round to zero.  The tie between zero and the
    smallest positive value goes to zero.
    """
    if math.isnan(x):
        raise ValueError("cannot round NaN")
    if x == 0.0:
        return MiniFloat.zero()
    if math.isinf(x):
        return MiniFloat.pos_inf() if x > 0 else MiniFloat.neg_inf()
    s = 1 if x < 0 else 0
    a = abs(x)
    if a > fmt.top:
        return MiniFloat.neg_inf() if s else MiniFloat.pos_inf()
    half_min = math.ldexp(1.0, fmt.e_min - 1)
    if a <= half_min:  # tie at 2^(e_min-1) goes to zero (zero counts as even)
        return MiniFloat.zero()
    m, e2 = math.frexp(a)  # a = m * 2^e2, m in [0.5, 1)
    e = e2 - 1
    p = fmt.precision
    if e < fmt.e_min:
        # a in (2^(e_min-1), 2^e_min): rounds up to the smallest positive
        return MiniFloat.finite(s, fmt.e_min, 0, fmt)
    scaled = math.ldexp(a, -e)  # in [1, 2)
    kf = (scaled - 1.0) * (1 << p)
    k = round(kf)  # Python round(): ties to even, exact on representable kf
    if k == (1 << p):
        k = 0
        e += 1
    if e > fmt.e_max:
        return MiniFloat.neg_inf() if s else MiniFloat.pos_inf()
    return MiniFloat.finite(s, e, k, fmt)


def emulate_op(x: MiniFloat, y: MiniFloat, op: str, fmt: FloatFormat) -> MiniFloat:
    """One reduced-precision arithmetic operation: exact host-double result, rounded."""
    a, b = x.value, y.value
    if op == "+":
        exact = a + b
    elif op == "-":
        exact = a - b
    elif op == "*":
        exact = a * b
    elif op == "/":
        if b == 0.0:
            if a == 0.0:
                raise ZeroDivisionError("0 / 0 in reduced-precision emulation")
            sign = -1.0 if (a < 0) != (math.copysign(1.0, b) < 0) else 1.0
            return MiniFloat.pos_inf() if sign > 0 else MiniFloat.neg_inf()
        exact = a / b
    else:
        raise ValueError(f"unknown op {op!r}")
    if math.isnan(exact):
        raise ValueError(f"invalid operation {a} {op} {b}")
    return round_nearest(exact, fmt)


def enumerate_finite(fmt: FloatFormat) -> Iterator[MiniFloat]:
    """All finite non-zero representables, ascending by value."""
    p_count = 1 << fmt.precision
    for e in range(fmt.e_max, fmt.e_min - 1, -1):
        for k in range(p_count - 1, -1, -1):
            yield MiniFloat.finite(1, e, k, fmt)
    for e in range(fmt.e_min, fmt.e_max + 1):
        for k in range(p_count):
            yield MiniFloat.finite(0, e, k, fmt)


def enumerate_value_array(fmt: FloatFormat) -> np.ndarray:
    """Values of all finite non-zero representables, ascending, as a float array."""
    p_count = 1 << fmt.precision
    k = np.arange(p_count, dtype=np.float64)
    mags = np.concatenate(
        [np.ldexp(1.0 + k / p_count, e) for e in range(fmt.e_min, fmt.e_max + 1)]
    )
    return np.concatenate([-mags[::-1], mags])
