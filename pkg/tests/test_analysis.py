import numpy as np
import pytest
from scipy import stats

from rounddist.analysis import (
    analyze_term,
    error_mc,
    histogram_comparison,
    model_monte_carlo,
    monte_carlo,
    range_report,
    sample_density,
    sample_spec,
)
from rounddist.density import DistributionSpec, build
from rounddist.errordist import typical_pdf
from rounddist.lang import ProbContext, parse_term

FAST_OPTS = {"rel_tol": 1e-7, "piece_cap": 256}


class TestRangeReport:
    def test_uniform_quartiles(self, half):
        rep = range_report(build(DistributionSpec.uniform(0, 1)), half)
        lo, hi = rep.confidence_ranges[0.5]
        assert abs(lo - 0.25) < 1e-9
        assert abs(hi - 0.75) < 1e-9

    def test_nested_ranges(self, half):
        rep = range_report(build(DistributionSpec.normal(0, 1)), half)
        levels = sorted(rep.confidence_ranges)
        for a, b in zip(levels[:-1], levels[1:]):
            lo_a, hi_a = rep.confidence_ranges[a]
            lo_b, hi_b = rep.confidence_ranges[b]
            assert lo_b <= lo_a and hi_a <= hi_b
        s_lo, s_hi = rep.support
        for lo, hi in rep.confidence_ranges.values():
            assert s_lo <= lo and hi <= s_hi

    def test_normal_9999(self, half):
        rep = range_report(build(DistributionSpec.normal(0, 1)), half)
        lo, hi = rep.confidence_ranges[0.9999]
        want = stats.norm.ppf(1 - 0.5e-4)
        assert abs(hi - want) < 1e-3
        assert abs(lo + want) < 1e-3

    def test_no_overflow_for_small_support(self, half):
        rep = range_report(build(DistributionSpec.uniform(0.5, 1)), half)
        assert rep.overflow_probability == 0.0
        assert rep.underflow_probability == 0.0

    def test_underflow_sliver(self, half):
        # U(0,1) puts exactly 2^-15 of its mass below 2^(e_min - 1)
        rep = range_report(build(DistributionSpec.uniform(0, 1)), half)
        assert abs(rep.underflow_probability - 2.0**-15) < 1e-9

    def test_overflow_mass(self, half):
        # support reaching past the overflow boundary 2^16
        d = build(DistributionSpec.uniform(0, 131072.0))
        rep = range_report(d, half)
        assert abs(rep.overflow_probability - 0.5) < 1e-9

    def test_underflow_mass(self, half):
        # half the mass below 2^(e_min - 1) = 2^-15
        d = build(DistributionSpec.uniform(-(2.0**-15), 2.0**-15))
        rep = range_report(d, half)
        assert abs(rep.underflow_probability - 1.0) < 1e-9

    def test_to_dict_serializable(self, half):
        import json

        rep = range_report(build(DistributionSpec.uniform(0, 1)), half)
        json.dumps(rep.to_dict())


class TestSampling:
    def test_sample_density_uniform_ks(self):
        rng = np.random.Generator(np.random.Philox(key=5))
        xs = sample_density(build(DistributionSpec.uniform(2, 3)), 20000, rng)
        assert xs.min() >= 2.0 and xs.max() <= 3.0
        assert stats.kstest(xs, stats.uniform(2, 1).cdf).pvalue > 1e-3

    def test_sample_density_normal_ks(self):
        rng = np.random.Generator(np.random.Philox(key=6))
        xs = sample_density(build(DistributionSpec.normal(1, 2)), 20000, rng)
        assert stats.kstest(xs, stats.norm(1, 2).cdf).pvalue > 1e-3

    def test_sample_spec_constant(self):
        rng = np.random.Generator(np.random.Philox(key=7))
        xs = sample_spec(DistributionSpec.constant(4.0), 100, rng)
        assert np.all(xs == 4.0)


class TestMonteCarlo:
    def test_seed_determinism(self, half):
        term = parse_term("x + y")
        specs = {"x": DistributionSpec.uniform(1, 2), "y": DistributionSpec.uniform(1, 2)}
        a = monte_carlo(term, specs, half, 5000, seed=42)
        b = monte_carlo(term, specs, half, 5000, seed=42)
        assert np.array_equal(a.bin_counts, b.bin_counts)
        assert a.mean == b.mean and a.finite_min == b.finite_min
        c = monte_carlo(term, specs, half, 5000, seed=43)
        assert not np.array_equal(a.bin_counts, c.bin_counts)

    def test_counts_partition_samples(self, half):
        term = parse_term("x + y")
        specs = {"x": DistributionSpec.uniform(1, 2), "y": DistributionSpec.uniform(1, 2)}
        rep = monte_carlo(term, specs, half, 3000, seed=1)
        assert int(rep.bin_counts.sum()) + rep.overflow_count == 3000

    def test_sum_lands_in_analytic_support(self, half):
        term = parse_term("x + y")
        specs = {"x": DistributionSpec.uniform(1, 2), "y": DistributionSpec.uniform(1, 2)}
        rep = monte_carlo(term, specs, half, 20000, seed=3, quantize_inputs=True)
        u = half.u
        assert rep.finite_min >= 2.0 * (1 - u) ** 2
        assert rep.finite_max <= 4.0 * (1 + u) ** 2
        assert abs(rep.mean - 3.0) < 0.02

    def test_histogram_comparison_sum(self, half):
        term = parse_term("x + y")
        specs = {"x": DistributionSpec.uniform(0, 1), "y": DistributionSpec.uniform(0, 1)}
        d = build(specs["x"]).add(build(specs["y"]))
        rep = monte_carlo(term, specs, half, 200_000, seed=11, bin_range=d.support)
        cmp = histogram_comparison(d, rep)
        assert cmp["max_abs_z"] < 6.0

    def test_model_mc_matches_true_emulation(self, half):
        """Sampling the model reproduces true-emulation statistics for a
        benign sum."""
        term = parse_term("x + y")
        specs = {"x": DistributionSpec.uniform(1, 2), "y": DistributionSpec.uniform(1, 2)}
        true = monte_carlo(term, specs, half, 50_000, seed=9, quantize_inputs=True)
        model = model_monte_carlo(
            term, specs, half, 50_000, seed=9, error_mode="typical", op_options=FAST_OPTS
        )
        assert abs(true.mean - model.mean) < 0.01
        assert model.overflow_count == 0


class TestAnalyzeTerm:
    def test_div_support(self, half):
        # U(10,16)/U(1,2) spans [5, 16]; rounding widens it only by u factors
        term = parse_term("x / y")
        specs = {"x": DistributionSpec.uniform(10, 16), "y": DistributionSpec.uniform(1, 2)}
        ctx = ProbContext.from_specs(specs, error_mode="typical", op_options=FAST_OPTS)
        rep = analyze_term(term, ctx, half)
        u = half.u
        lo, hi = rep.support
        assert lo >= 5.0 * (1 - u) - 1e-9
        assert hi <= 16.0 * (1 + u) + 1e-9
        assert abs(rep.confidence_ranges[0.5][0] - 7.0) < 1.0

    def test_overflow_accumulates(self):
        from rounddist.minifloat import FloatFormat

        fmt = FloatFormat.from_bits(3, 3)  # top = 15, boundary 16
        term = parse_term("x / y")
        specs = {
            "x": DistributionSpec.uniform(10, 15.5),
            "y": DistributionSpec.uniform(0.97, 2),
        }
        ctx = ProbContext.from_specs(
            specs, error_mode="exact", quantize_inputs=True, op_options=FAST_OPTS
        )
        rep = analyze_term(term, ctx, fmt)
        assert 1e-4 < rep.overflow_probability < 5e-3


class TestErrorMc:
    def test_uniform_error_histogram(self, half):
        rep = error_mc(DistributionSpec.uniform(0, 1), half, 200_000, seed=17)
        assert rep.bin_edges[0] == -1.0 and rep.bin_edges[-1] == 1.0
        mids = 0.5 * (rep.bin_edges[:-1] + rep.bin_edges[1:])
        emp = rep.bin_counts / rep.bin_counts.sum() * (len(mids) / 2.0)
        # histogram should hug the typical density; per-bin binomial noise
        # at this sample count has sd ~0.022 in density units
        core = np.abs(mids) < 0.45
        assert np.max(np.abs(emp[core] - typical_pdf(mids[core]))) < 0.12

    def test_seed_determinism(self, half):
        a = error_mc(DistributionSpec.uniform(0, 1), half, 10_000, seed=2)
        b = error_mc(DistributionSpec.uniform(0, 1), half, 10_000, seed=2)
        assert np.array_equal(a.bin_counts, b.bin_counts)
