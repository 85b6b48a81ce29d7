import numpy as np
import pytest

from rounddist.density import DistributionSpec, build, sup_distance
from rounddist.errordist import (
    coefficient_C,
    exact_error_density,
    mantissa_cutoff,
    t_range,
    typical_density,
    typical_density_finite_p,
    typical_pdf,
)
from rounddist.errors import FeasibilityError
from rounddist.minifloat import (
    FloatFormat,
    MiniFloat,
    enumerate_finite,
    rounding_interval,
)


class TestTRange:
    def test_generic_mantissa(self, p3):
        # p = 3: 2^{p+1} = 16, so k = 2 gives [-16/19, 16/21]
        z = MiniFloat.finite(0, 0, 2, p3)
        tr = t_range(z, p3)
        assert tr.t_min == -16.0 / 19.0
        assert tr.t_max == 16.0 / 21.0

    def test_power_of_two(self, p3):
        z = MiniFloat.finite(0, 1, 0, p3)
        tr = t_range(z, p3)
        assert tr.t_min == -16.0 / 31.0
        assert tr.t_max == 16.0 / 17.0

    def test_smallest_positive(self, p3):
        z = MiniFloat.finite(0, p3.e_min, 0, p3)
        tr = t_range(z, p3)
        assert tr.t_min == -1.0
        assert tr.t_max == 16.0 / 17.0

    def test_top(self, p3):
        z = MiniFloat.finite(0, p3.e_max, (1 << p3.precision) - 1, p3)
        tr = t_range(z, p3)
        assert tr.t_max == 0.0
        assert tr.t_min == -16.0 / 29.0

    def test_sign_invariance(self, p3):
        pos = t_range(MiniFloat.finite(0, 1, 5, p3), p3)
        neg = t_range(MiniFloat.finite(1, 1, 5, p3), p3)
        assert (pos.t_min, pos.t_max) == (neg.t_min, neg.t_max)

    def test_specials_rejected(self, p3):
        with pytest.raises(ValueError):
            t_range(MiniFloat.zero(), p3)

    def test_matches_rounding_interval(self):
        """t = (x - z)/(x u) maps the rounding interval of z onto its TRange.

        The smallest positive value is special: its interval extends into the
        gap above zero, where t < -1; there the TRange is clipped at -1.
        """
        for p, e_min, e_max in ((1, -1, 1), (3, -3, 4), (5, -4, 4)):
            fmt = FloatFormat(precision=p, e_min=e_min, e_max=e_max)
            u = fmt.u
            for z in enumerate_finite(fmt):
                if z.value < 0:
                    continue
                tr = t_range(z, fmt)
                iv = rounding_interval(z, fmt)
                t_hi = (iv.hi - z.value) / (iv.hi * u)
                t_lo = (iv.lo - z.value) / (iv.lo * u)
                assert abs(t_hi - tr.t_max) < 1e-12
                if z.exponent_e == fmt.e_min and z.mantissa_k == 0:
                    assert t_lo < -1.0 - 1e-12 and tr.t_min == -1.0
                else:
                    assert abs(t_lo - tr.t_min) < 1e-12


class TestCoefficientC:
    def test_power_of_two_is_two_thirds(self, p3):
        assert coefficient_C(1, 0, p3) == 2.0 / 3.0

    def test_generic(self, p3):
        # (2^p + k) / 2^{p+1}
        assert coefficient_C(0, 3, p3) == 11.0 / 16.0

    def test_top(self, p3):
        assert coefficient_C(p3.e_max, 7, p3) == 45.0 / 16.0

    def test_smallest(self, p3):
        assert coefficient_C(p3.e_min, 0, p3) == 17.0 / 120.0

    def test_mid_mantissa(self, half):
        p = half.precision
        assert coefficient_C(0, 1 << (p - 1), half) == 0.75

    def test_invalid_args(self, p3):
        with pytest.raises(ValueError):
            coefficient_C(p3.e_max + 1, 0, p3)
        with pytest.raises(ValueError):
            coefficient_C(0, 1 << p3.precision, p3)

    def test_matches_t_range_width_interior(self):
        """For interior exponents, C equals
        ((1 - t_max u)(1 - t_min u))/(t_max - t_min)."""
        for p, e_min, e_max in ((1, -1, 1), (3, -3, 4), (5, -4, 4)):
            fmt = FloatFormat(precision=p, e_min=e_min, e_max=e_max)
            u = fmt.u
            for z in enumerate_finite(fmt):
                if z.value < 0 or z.exponent_e in (fmt.e_min, fmt.e_max):
                    continue
                tr = t_range(z, fmt)
                ref = ((1 - tr.t_max * u) * (1 - tr.t_min * u)) / (tr.t_max - tr.t_min)
                got = coefficient_C(z.exponent_e, z.mantissa_k, fmt)
                assert abs(got - ref) < 1e-12 * ref

    def test_interval_width_identity(self):
        """|z| u equals the rounding-interval width times
        ((1 - t_max u)(1 - t_min u))/(t_max - t_min), for every representable.

        The smallest positive value's interval reaches into the gap above
        zero; its effective lower edge is z/(1+u), where t hits -1.
        """
        for p, e_min, e_max in ((1, -1, 1), (3, -3, 4), (5, -4, 4)):
            fmt = FloatFormat(precision=p, e_min=e_min, e_max=e_max)
            u = fmt.u
            for z in enumerate_finite(fmt):
                if z.value < 0:
                    continue
                tr = t_range(z, fmt)
                iv = rounding_interval(z, fmt)
                lo = iv.lo
                if z.exponent_e == fmt.e_min and z.mantissa_k == 0:
                    lo = z.value / (1.0 + u)
                factor = ((1 - tr.t_max * u) * (1 - tr.t_min * u)) / (tr.t_max - tr.t_min)
                assert abs((iv.hi - lo) * factor - z.value * u) < 1e-12 * z.value * u


class TestMantissaCutoff:
    def test_core_region(self, p3):
        assert mantissa_cutoff(0.4, p3) == (1 << p3.precision) - 1
        assert mantissa_cutoff(-0.5, p3) == (1 << p3.precision) - 1

    def test_wing(self, p3):
        assert mantissa_cutoff(2.0 / 3.0, p3) == 3

    def test_endpoint(self, p3):
        assert mantissa_cutoff(1.0, p3) == -1
        assert mantissa_cutoff(-1.0, p3) == -1

    def test_invalid(self, p3):
        with pytest.raises(ValueError):
            mantissa_cutoff(0.0, p3)
        with pytest.raises(ValueError):
            mantissa_cutoff(1.5, p3)

    def test_sign_symmetric(self, p3):
        for t in (0.55, 0.7, 0.85, 0.99):
            assert mantissa_cutoff(t, p3) == mantissa_cutoff(-t, p3)


class TestTypicalDensity:
    def test_plateau(self):
        assert np.allclose(typical_pdf([-0.5, -0.1, 0.0, 0.3, 0.5]), 0.75)

    def test_vanishes_at_one(self):
        assert typical_pdf(1.0) == 0.0
        assert typical_pdf(-1.0) == 0.0
        assert typical_pdf(1.2) == 0.0

    def test_wing_value(self):
        # at t = 2/3 the wing is r/2 + r^2/4 with r = 1/2
        assert abs(typical_pdf(2.0 / 3.0) - (0.25 + 1.0 / 16.0)) < 1e-15

    def test_integrates_to_one(self):
        e = typical_density()
        assert abs(e.density.total_mass - 1.0) < 1e-9

    def test_interpolant_matches_closed_form(self):
        e = typical_density()
        ts = np.linspace(-0.999, 0.999, 1001)
        assert np.max(np.abs(e.density.pdf(ts) - typical_pdf(ts))) < 1e-9

    def test_even_symmetry(self):
        e = typical_density()
        ts = np.linspace(0.01, 0.99, 99)
        assert np.max(np.abs(e.density.pdf(ts) - e.density.pdf(-ts))) < 1e-9


class TestTypicalFiniteP:
    def test_integrates_to_one(self, half):
        e = typical_density_finite_p(half)
        assert abs(e.density.total_mass - 1.0) < 1e-9

    def test_center_value(self, half):
        # (2/3 + 3(2^p - 1)/4) / (2^p (1 - 0)^2), then normalized
        p = half.precision
        two_p = 1 << p
        raw = (2.0 / 3.0 + 3.0 * (two_p - 1) / 4.0) / two_p
        got = e = typical_density_finite_p(half).density.pdf(0.0)
        assert abs(got - raw) < 1e-4

    def test_converges_to_typical(self):
        """The sup distance to the limiting density shrinks as p grows."""
        limit = typical_density().density
        dists = []
        for p in (4, 6, 8, 10):
            fmt = FloatFormat(precision=p, e_min=-8, e_max=8)
            d = typical_density_finite_p(fmt).density
            dists.append(sup_distance(d, limit, -0.98, 0.98, n=801))
        assert all(a > b for a, b in zip(dists, dists[1:]))
        assert dists[-1] < 2e-3


class TestExactDensity:
    def test_feasibility_guard(self):
        big = FloatFormat(precision=16, e_min=-50, e_max=49)
        with pytest.raises(FeasibilityError):
            exact_error_density(build(DistributionSpec.uniform(1, 2)), big)

    def test_normalized(self, p3):
        e = exact_error_density(build(DistributionSpec.uniform(1, 2)), p3)
        assert abs(e.density.total_mass - 1.0) < 1e-9
        assert e.density.support == (-1.0, 1.0)
        assert e.excluded_mass == 0.0

    def test_sign_symmetry(self, p3):
        pos = exact_error_density(build(DistributionSpec.uniform(1, 2)), p3)
        neg = exact_error_density(build(DistributionSpec.uniform(-2, -1)), p3)
        assert sup_distance(pos.density, neg.density, -0.99, 0.99, n=501) < 1e-9

    def test_excluded_mass_underflow(self, p3):
        # U(0,1): everything below 2^{e_min}/(1+u) = (2/17) either rounds to
        # zero or jumps the gap onto the smallest representable with t < -1
        e = exact_error_density(build(DistributionSpec.uniform(0, 1)), p3)
        assert abs(e.excluded_mass - 2.0 / 17.0) < 1e-9

    def test_excluded_mass_overflow(self, p3):
        # U(0,40) against top = 30: a quarter of the mass rounds to infinity
        e = exact_error_density(build(DistributionSpec.uniform(0, 40)), p3)
        assert e.excluded_mass > 0.25
        assert abs(e.excluded_mass - (0.25 + (2.0 / 17.0) / 40.0)) < 1e-6

    def test_approaches_typical_at_p10(self, half):
        e = exact_error_density(build(DistributionSpec.uniform(0, 1)), half)
        typ = typical_density().density
        assert sup_distance(e.density, typ, -0.99, 0.99, n=801) < 0.05

    def test_metadata(self, p3):
        e = exact_error_density(build(DistributionSpec.uniform(1, 2)), p3)
        assert e.mode == "exact"
        assert e.source_format is p3
