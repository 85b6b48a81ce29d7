"""Probabilistic range analysis and Monte-Carlo validation.

``range_report`` turns an output density into confidence ranges plus overflow
and underflow probabilities for a given float format.  ``monte_carlo`` runs the
same term through direct reduced-precision emulation with a counter-based RNG
and compares the sample histogram against the analytic density.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._kernels import round_nearest_array
from .density import Density, DistributionSpec, build
from .errordist import ErrorDistribution
from .errors import UnboundVariableError
from .lang import (
    BinOp,
    Literal,
    ProbContext,
    Term,
    Var,
    _apply_scalar,
    check_tree,
    error_distribution_for,
    interpret_term,
)
from .minifloat import FloatFormat

__all__ = [
    "AnalysisReport",
    "McReport",
    "range_report",
    "monte_carlo",
    "error_mc",
    "sample_density",
    "histogram_comparison",
]

DEFAULT_CONFIDENCES = (0.5, 0.9, 0.99, 0.9999)
DEFAULT_BINS = 256


@dataclass(frozen=True)
class AnalysisReport:
    """Analytic summary of an output density under a float format."""

    support: tuple[float, float]
    mean: float
    confidence_ranges: dict[float, tuple[float, float]]
    overflow_probability: float
    underflow_probability: float
    format: FloatFormat

    def to_dict(self) -> dict:
        return {
            "support": list(self.support),
            "mean": self.mean,
            "confidence_ranges": {
                str(c): list(r) for c, r in sorted(self.confidence_ranges.items())
            },
            "overflow_probability": self.overflow_probability,
            "underflow_probability": self.underflow_probability,
            "format": {
                "precision": self.format.precision,
                "e_min": self.format.e_min,
                "e_max": self.format.e_max,
            },
        }


@dataclass(frozen=True)
class McReport:
    """Summary of a reduced-precision Monte-Carlo run."""

    n: int
    seed: int
    overflow_count: int
    finite_min: float
    finite_max: float
    mean: float
    std: float
    bin_edges: np.ndarray
    bin_counts: np.ndarray
    quantile_ranges: dict[float, tuple[float, float]] = field(default_factory=dict)

    @property
    def overflow_rate(self) -> float:
        return self.overflow_count / self.n

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "overflow_count": int(self.overflow_count),
            "overflow_rate": self.overflow_rate,
            "finite_min": self.finite_min,
            "finite_max": self.finite_max,
            "mean": self.mean,
            "std": self.std,
            "bin_edges": [float(v) for v in self.bin_edges],
            "bin_counts": [int(v) for v in self.bin_counts],
            "quantile_ranges": {
                str(c): list(r) for c, r in sorted(self.quantile_ranges.items())
            },
        }


def range_report(
    density: Density,
    fmt: FloatFormat,
    confidences: tuple[float, ...] = DEFAULT_CONFIDENCES,
) -> AnalysisReport:
    """Equal-tail confidence ranges plus overflow/underflow mass for ``fmt``.

    Overflow probability is the mass at or beyond the overflow boundary
    2^(e_max+1) (callers analyzing a term should prefer the per-operation
    accumulation from ``analyze_term``); underflow is the mass inside the
    interval around zero whose points round to zero.
    """
    ranges = {}
    for c in confidences:
        tail = (1.0 - c) / 2.0
        ranges[c] = (float(density.quantile(tail)), float(density.quantile(1.0 - tail)))
    bound = fmt.overflow_boundary
    overflow = density.mass_outside(-bound, bound)
    half_min = math.ldexp(1.0, fmt.e_min - 1)
    lo, hi = density.support
    underflow = 0.0
    if lo < half_min and hi > -half_min:
        underflow = max(
            0.0,
            float(density.cdf(min(half_min, hi)) - density.cdf(max(-half_min, lo)))
            / density.total_mass,
        )
    return AnalysisReport(
        support=density.support,
        mean=float(density.mean()),
        confidence_ranges=ranges,
        overflow_probability=float(overflow),
        underflow_probability=underflow,
        format=fmt,
    )


def analyze_term(
    term: Term,
    ctx: ProbContext,
    fmt: FloatFormat,
    confidences: tuple[float, ...] = DEFAULT_CONFIDENCES,
) -> AnalysisReport:
    """Interpret a term and report ranges plus per-operation overflow mass.

    Overflow is decided on the exact pre-rounding result of each operation
    (rounding a value below the boundary cannot produce an overflow), so the
    probability accumulates over rounding steps rather than being read off
    the final density.
    """
    density, overflow = interpret_term(term, ctx, fmt, track_overflow=True)
    base = range_report(density, fmt, confidences)
    return AnalysisReport(
        support=base.support,
        mean=base.mean,
        confidence_ranges=base.confidence_ranges,
        overflow_probability=float(overflow),
        underflow_probability=base.underflow_probability,
        format=fmt,
    )


# ---------------------------------------------------------------------------
# sampling

_GRID_PER_PIECE = 128


def sample_density(d: Density, n: int, rng: np.random.Generator) -> np.ndarray:
    """Inverse-CDF sampling on a dense per-piece grid (adequate for MC use)."""
    xs = []
    breaks = np.asarray(d.breaks)
    for a, b in zip(breaks[:-1], breaks[1:]):
        xs.append(np.linspace(a, b, _GRID_PER_PIECE, endpoint=False))
    xs.append(np.array([breaks[-1]]))
    grid = np.concatenate(xs)
    cdf = np.asarray(d.cdf(grid), dtype=float) / d.total_mass
    cdf = np.maximum.accumulate(cdf)
    cdf[0], cdf[-1] = 0.0, 1.0
    u = rng.random(n)
    return np.interp(u, cdf, grid)


def sample_spec(
    spec: DistributionSpec, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw from a distribution spec via inverse CDF of its analytic density.

    Sampling the same density object the analytic pipeline uses keeps the two
    pipelines comparable without a second, independent distribution model.
    """
    if spec.kind == "constant":
        return np.full(n, float(spec.params["c"]))
    return sample_density(build(spec), n, rng)


# ---------------------------------------------------------------------------
# Monte Carlo

def _eval_samples(
    term: Term,
    samples: dict[str, np.ndarray],
    fmt: FloatFormat,
) -> np.ndarray:
    if isinstance(term, Literal):
        return term.value
    if isinstance(term, Var):
        if term.name not in samples:
            raise UnboundVariableError(f"variable {term.name!r} has no sample stream")
        return samples[term.name]
    left = _eval_samples(term.left, samples, fmt)
    right = _eval_samples(term.right, samples, fmt)
    if isinstance(left, float) and isinstance(right, float):
        # mirrors the analytic interpreter: constants fold without rounding
        return {"+": left + right, "-": left - right,
                "*": left * right, "/": left / right}[term.op]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        exact = {"+": np.add, "-": np.subtract,
                 "*": np.multiply, "/": np.divide}[term.op](left, right)
    return round_nearest_array(exact, fmt.precision, fmt.e_min, fmt.e_max)


def monte_carlo(
    term: Term,
    specs: dict[str, DistributionSpec],
    fmt: FloatFormat,
    n: int,
    seed: int,
    quantize_inputs: bool = False,
    bins: int = DEFAULT_BINS,
    bin_range: tuple[float, float] | None = None,
    confidences: tuple[float, ...] = DEFAULT_CONFIDENCES,
) -> McReport:
    """Emulate the term in reduced precision on ``n`` i.i.d. input draws.

    Sampling uses the counter-based Philox generator keyed by ``seed``, so a
    report is a pure function of (term, specs, fmt, n, seed, options).
    """
    check_tree(term)
    rng = np.random.Generator(np.random.Philox(key=seed))
    samples = {}
    for name in sorted(specs):
        x = sample_spec(specs[name], n, rng)
        if quantize_inputs:
            x = round_nearest_array(x, fmt.precision, fmt.e_min, fmt.e_max)
        samples[name] = x
    out = np.asarray(_eval_samples(term, samples, fmt), dtype=float)
    if out.ndim == 0:
        out = np.full(n, float(out))
    finite = out[np.isfinite(out)]
    overflow_count = int(n - finite.size)
    if bin_range is None:
        bin_range = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    counts, edges = np.histogram(finite, bins=bins, range=bin_range)
    qranges = {}
    if finite.size:
        for c in confidences:
            tail = (1.0 - c) / 2.0
            lo, hi = np.quantile(finite, [tail, 1.0 - tail])
            qranges[c] = (float(lo), float(hi))
    return McReport(
        n=n,
        seed=seed,
        overflow_count=overflow_count,
        finite_min=float(finite.min()) if finite.size else math.nan,
        finite_max=float(finite.max()) if finite.size else math.nan,
        mean=float(finite.mean()) if finite.size else math.nan,
        std=float(finite.std()) if finite.size else math.nan,
        bin_edges=edges,
        bin_counts=counts,
        quantile_ranges=qranges,
    )


def model_monte_carlo(
    term: Term,
    specs: dict[str, DistributionSpec],
    fmt: FloatFormat,
    n: int,
    seed: int,
    error_mode: str = "exact",
    quantize_inputs: bool = True,
    bins: int = DEFAULT_BINS,
    bin_range: tuple[float, float] | None = None,
    op_options: dict | None = None,
) -> McReport:
    """Sample the rounding-error model itself rather than emulating hardware.

    Each rounding step multiplies the exact sample values by (1 + u*e) with e
    drawn from the same error distribution the analytic interpreter uses, so
    the expected overflow rate equals ``analyze_term``'s overflow probability.
    Overflow is counted when an exact pre-rounding value reaches the format's
    overflow boundary.
    """
    check_tree(term)
    rng = np.random.Generator(np.random.Philox(key=seed))
    bound = fmt.overflow_boundary
    overflowed = np.zeros(n, dtype=bool)
    opts = op_options or {}

    def apply_rounding(vals: np.ndarray, dens: Density):
        """One model rounding step on both the samples and the density."""
        overflowed[:] = overflowed | (np.abs(vals) >= bound)
        e = error_distribution_for(dens, fmt, error_mode)
        vals = vals * (1.0 + fmt.u * sample_density(e.density, n, rng))
        dens = dens.mul(e.density.scalar_mul(fmt.u).scalar_add(1.0), **opts).normalize()
        return vals, dens

    samples: dict[str, np.ndarray] = {}
    densities: dict[str, Density] = {}
    for name in sorted(specs):
        x = sample_spec(specs[name], n, rng)
        d = build(specs[name])
        if quantize_inputs and error_mode != "none":
            x, d = apply_rounding(x, d)
        samples[name] = x
        densities[name] = d

    def walk(node):
        if isinstance(node, Literal):
            return float(node.value), float(node.value)
        if isinstance(node, Var):
            return samples[node.name], densities[node.name]
        ls, ld = walk(node.left)
        rs, rd = walk(node.right)
        if isinstance(ld, float) and isinstance(rd, float):
            v = {"+": ld + rd, "-": ld - rd, "*": ld * rd, "/": ld / rd}[node.op]
            return v, v
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            vals = {"+": np.add, "-": np.subtract,
                    "*": np.multiply, "/": np.divide}[node.op](ls, rs)
        if isinstance(ld, float):
            dens = _apply_scalar(node.op, ld, rd, const_left=True)
        elif isinstance(rd, float):
            dens = _apply_scalar(node.op, rd, ld, const_left=False)
        else:
            dens = {"+": ld.add, "-": ld.sub, "*": ld.mul, "/": ld.div}[node.op](rd, **opts)
        if error_mode != "none":
            vals, dens = apply_rounding(vals, dens)
        return vals, dens

    out, _ = walk(term)
    out = np.asarray(out, dtype=float)
    keep = ~overflowed & np.isfinite(out)
    finite = out[keep]
    if bin_range is None:
        bin_range = (float(finite.min()), float(finite.max()))
    counts, edges = np.histogram(finite, bins=bins, range=bin_range)
    return McReport(
        n=n,
        seed=seed,
        overflow_count=int(overflowed.sum()),
        finite_min=float(finite.min()),
        finite_max=float(finite.max()),
        mean=float(finite.mean()),
        std=float(finite.std()),
        bin_edges=edges,
        bin_counts=counts,
    )


def error_mc(
    spec: DistributionSpec,
    fmt: FloatFormat,
    n: int,
    seed: int,
    bins: int = DEFAULT_BINS,
) -> McReport:
    """Sample relative rounding errors t = (x - fl(x)) / (x * u) directly."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    x = sample_spec(spec, n, rng)
    r = round_nearest_array(x, fmt.precision, fmt.e_min, fmt.e_max)
    keep = np.isfinite(r) & (r != 0.0) & (x != 0.0)
    t = (x[keep] - r[keep]) / (x[keep] * fmt.u)
    t = t[np.abs(t) <= 1.0]  # drop underflow-gap slivers with |t| > 1
    counts, edges = np.histogram(t, bins=bins, range=(-1.0, 1.0))
    return McReport(
        n=n,
        seed=seed,
        overflow_count=int(n - t.size),
        finite_min=float(t.min()),
        finite_max=float(t.max()),
        mean=float(t.mean()),
        std=float(t.std()),
        bin_edges=edges,
        bin_counts=counts,
    )


def histogram_comparison(density: Density, report: McReport) -> dict:
    """Per-bin z-scores of MC counts against bin-averaged analytic masses.

    The analytic probability of each bin is the CDF increment (not a midpoint
    pdf value), so discontinuities inside a bin are handled exactly.  The
    binomial standard deviation sqrt(n p (1-p)) uses the kept-sample count.
    """
    edges = np.asarray(report.bin_edges, dtype=float)
    cdf = np.asarray(density.cdf(edges), dtype=float) / density.total_mass
    probs = np.diff(cdf)
    in_range = probs.sum()
    if in_range > 0:
        probs = probs / in_range
    n_kept = int(report.bin_counts.sum())
    expected = n_kept * probs
    sigma = np.sqrt(np.maximum(n_kept * probs * (1.0 - probs), 1.0))
    z = (report.bin_counts - expected) / sigma
    widths = np.diff(edges)
    emp_density = report.bin_counts / (n_kept * widths)
    ana_density = probs / widths
    return {
        "max_abs_z": float(np.max(np.abs(z))),
        "z_scores": z,
        "sup_density_discrepancy": float(np.max(np.abs(emp_density - ana_density))),
        "expected": expected,
        "n_kept": n_kept,
    }
