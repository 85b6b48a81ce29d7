"""Command-line front end: run analyses from JSON specs and emit reports.

Exit codes: 0 success, 2 spec/usage error (bad schema, parse failure, unbound
variable), 3 analysis error (singular division, infeasible precision).
"""

from __future__ import annotations

import json
import sys
from importlib import resources
from pathlib import Path

import click

from .analysis import (
    DEFAULT_CONFIDENCES,
    histogram_comparison,
    model_monte_carlo,
    monte_carlo,
)
from .density import DistributionSpec, build, sup_distance
from .errordist import (
    exact_error_density,
    typical_density,
    typical_density_finite_p,
)
from .errors import (
    FeasibilityError,
    RoundDistError,
    SingularDivisionError,
    UnboundVariableError,
)
from .lang import ParseError, ProbContext, parse_term, variables
from .minifloat import FloatFormat

EXIT_SPEC_ERROR = 2
EXIT_ANALYSIS_ERROR = 3


class SpecFileError(Exception):
    """Raised for malformed analysis specs (schema problems, bad references)."""


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _dump_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _format_from_dict(d: dict) -> FloatFormat:
    if "exponent_bits" in d:
        return FloatFormat.from_bits(int(d["exponent_bits"]), int(d["mantissa_bits"]))
    return FloatFormat(
        precision=int(d["precision"]), e_min=int(d["e_min"]), e_max=int(d["e_max"])
    )


def _format_from_flags(fmt_bits, precision, e_min, e_max) -> FloatFormat | None:
    if fmt_bits:
        try:
            eb, mb = (int(v) for v in fmt_bits.split(","))
        except ValueError:
            raise SpecFileError(f"--format expects 'exp_bits,mant_bits', got {fmt_bits!r}")
        return FloatFormat.from_bits(eb, mb)
    if precision is not None:
        if e_min is None or e_max is None:
            raise SpecFileError("--p requires --emin and --emax")
        return FloatFormat(precision=precision, e_min=e_min, e_max=e_max)
    return None


def load_spec(path: Path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFileError(f"cannot read spec {path}: {exc}")
    for key in ("term", "inputs", "format"):
        if key not in raw:
            raise SpecFileError(f"spec is missing required key {key!r}")
    return raw


def run_analysis(spec: dict, out_dir: Path) -> dict:
    """Execute one analysis spec and write report.json / output_density.csv."""
    term = parse_term(spec["term"])
    try:
        input_specs = {
            name: DistributionSpec.from_dict(d) for name, d in spec["inputs"].items()
        }
    except (KeyError, ValueError) as exc:
        raise SpecFileError(f"bad input distribution: {exc}")
    missing = sorted(variables(term) - set(input_specs))
    if missing:
        raise UnboundVariableError(
            f"term variables {', '.join(missing)} are not bound by the spec inputs"
        )
    fmt = _format_from_dict(spec["format"])
    error_mode = spec.get("error_mode", "typical")
    quantize_inputs = bool(spec.get("quantize_inputs", False))
    confidences = tuple(spec.get("confidences", DEFAULT_CONFIDENCES))
    op_options = dict(spec.get("op_options", {}))
    ctx = ProbContext.from_specs(
        input_specs,
        error_mode=error_mode,
        quantize_inputs=quantize_inputs,
        op_options=op_options,
    )

    from .analysis import AnalysisReport, range_report
    from .lang import interpret_term

    density, overflow = interpret_term(term, ctx, fmt, track_overflow=True)
    base = range_report(density, fmt, confidences)
    report = AnalysisReport(
        support=base.support,
        mean=base.mean,
        confidence_ranges=base.confidence_ranges,
        overflow_probability=float(overflow),
        underflow_probability=base.underflow_probability,
        format=fmt,
    )

    payload = {
        "spec": {
            "term": spec["term"],
            "inputs": {k: v.to_dict() for k, v in input_specs.items()},
            "error_mode": error_mode,
            "quantize_inputs": quantize_inputs,
        },
        "analysis": report.to_dict(),
    }

    mc_cfg = spec.get("mc", {})
    if mc_cfg.get("enabled", False):
        n = int(mc_cfg.get("n", 1_000_000))
        seed = int(mc_cfg.get("seed", 0))
        if mc_cfg.get("model_based", False):
            mc = model_monte_carlo(
                term, input_specs, fmt, n, seed,
                error_mode=error_mode, quantize_inputs=quantize_inputs,
                op_options=op_options,
            )
        else:
            mc = monte_carlo(
                term, input_specs, fmt, n, seed,
                quantize_inputs=quantize_inputs, bin_range=density.support,
            )
        comparison = histogram_comparison(density, mc)
        payload["mc"] = mc.to_dict()
        payload["mc"]["model_based"] = bool(mc_cfg.get("model_based", False))
        payload["mc_vs_analytic"] = {
            "max_abs_z": comparison["max_abs_z"],
            "sup_density_discrepancy": comparison["sup_density_discrepancy"],
        }

    if "reference" in spec:
        payload["reference"] = spec["reference"]

    out_dir.mkdir(parents=True, exist_ok=True)
    _dump_json(out_dir / "report.json", payload)
    density.dump_csv(out_dir / "output_density.csv")
    return payload


@click.group()
def main():
    """Distributions of floating-point rounding errors and rounded outputs."""


@main.command()
@click.argument("spec_file", type=click.Path(exists=True, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), default=Path("."), help="Output directory.")
def analyze(spec_file: Path, out: Path):
    """Run the analysis described by a JSON spec file."""
    try:
        spec = load_spec(spec_file)
        payload = run_analysis(spec, out)
    except (SpecFileError, ParseError, UnboundVariableError) as exc:
        _fail(EXIT_SPEC_ERROR, str(exc))
    except (SingularDivisionError, FeasibilityError) as exc:
        _fail(EXIT_ANALYSIS_ERROR, str(exc))
    ov = payload["analysis"]["overflow_probability"]
    click.echo(f"wrote {out / 'report.json'} (overflow probability {ov:.6g})")


@main.command("error-dist")
@click.option("--dist", required=True, help='Input distribution, e.g. "uniform,0,1" or "normal,0,2".')
@click.option("--format", "fmt_bits", default=None, help="exp_bits,mant_bits (e.g. 5,10).")
@click.option("--p", "precision", type=int, default=None, help="Mantissa bits.")
@click.option("--emin", type=int, default=None)
@click.option("--emax", type=int, default=None)
@click.option("--mode", type=click.Choice(["exact", "typical", "typical_finite_p"]), default="exact")
@click.option("--compare-typical", is_flag=True, help="Report sup-norm distance to the typical density.")
@click.option("--out", type=click.Path(path_type=Path), default=Path("."))
def error_dist(dist, fmt_bits, precision, emin, emax, mode, compare_typical, out):
    """Compute a relative rounding-error density and write it as CSV."""
    try:
        parts = dist.split(",")
        kind, params = parts[0], [float(v) for v in parts[1:]]
        if kind == "uniform":
            spec = DistributionSpec.uniform(*params)
        elif kind == "normal":
            spec = DistributionSpec.normal(*params)
        else:
            raise SpecFileError(f"unknown distribution kind {kind!r}")
        fmt = _format_from_flags(fmt_bits, precision, emin, emax)
        if fmt is None and mode != "typical":
            raise SpecFileError("a float format is required for this mode")
    except (SpecFileError, ValueError, TypeError) as exc:
        _fail(EXIT_SPEC_ERROR, str(exc))

    try:
        if mode == "exact":
            err = exact_error_density(build(spec), fmt)
        elif mode == "typical_finite_p":
            err = typical_density_finite_p(fmt)
        else:
            err = typical_density()
    except FeasibilityError as exc:
        _fail(EXIT_ANALYSIS_ERROR, str(exc))

    out.mkdir(parents=True, exist_ok=True)
    err.density.dump_csv(out / "error_density.csv")
    header = {
        "mode": err.mode,
        "distribution": spec.to_dict(),
        "excluded_mass": err.excluded_mass,
    }
    if fmt is not None:
        header["format"] = {"precision": fmt.precision, "e_min": fmt.e_min, "e_max": fmt.e_max}
    if compare_typical:
        header["sup_distance_to_typical"] = sup_distance(
            err.density, typical_density().density, -1.0, 1.0
        )
    _dump_json(out / "error_density.json", header)
    click.echo(f"wrote {out / 'error_density.csv'}")


@main.command()
@click.argument("spec_file", type=click.Path(exists=True, path_type=Path))
@click.option("--mc-n", type=int, default=1_000_000)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(path_type=Path), default=Path("."))
def mc(spec_file: Path, mc_n: int, seed: int, out: Path):
    """Monte-Carlo emulation of a spec's term in reduced precision."""
    try:
        spec = load_spec(spec_file)
        term = parse_term(spec["term"])
        input_specs = {
            name: DistributionSpec.from_dict(d) for name, d in spec["inputs"].items()
        }
        fmt = _format_from_dict(spec["format"])
    except (SpecFileError, ParseError, KeyError, ValueError) as exc:
        _fail(EXIT_SPEC_ERROR, str(exc))
    report = monte_carlo(
        term, input_specs, fmt, mc_n, seed,
        quantize_inputs=bool(spec.get("quantize_inputs", False)),
    )
    out.mkdir(parents=True, exist_ok=True)
    _dump_json(out / "mc.json", report.to_dict())
    with open(out / "histogram.csv", "w") as fh:
        fh.write("bin_lo,bin_hi,count\n")
        for lo, hi, c in zip(report.bin_edges[:-1], report.bin_edges[1:], report.bin_counts):
            fh.write(f"{float(lo)!r},{float(hi)!r},{int(c)}\n")
    click.echo(f"wrote {out / 'mc.json'}")


def fixture_path(name: str) -> Path:
    base = resources.files("rounddist.fixtures")
    candidate = base / f"{name}.json"
    if not candidate.is_file():
        available = sorted(
            p.name[:-5] for p in base.iterdir() if p.name.endswith(".json")
        )
        raise SpecFileError(f"unknown benchmark {name!r}; available: {', '.join(available)}")
    return Path(str(candidate))


@main.command()
@click.argument("name")
@click.option("--out", type=click.Path(path_type=Path), default=Path("."))
def bench(name: str, out: Path):
    """Run a bundled benchmark fixture and write a comparison report."""
    try:
        spec = load_spec(fixture_path(name))
        payload = run_analysis(spec, out)
    except (SpecFileError, ParseError, UnboundVariableError) as exc:
        _fail(EXIT_SPEC_ERROR, str(exc))
    except (SingularDivisionError, FeasibilityError) as exc:
        _fail(EXIT_ANALYSIS_ERROR, str(exc))
    lines = [f"benchmark: {name}"]
    ana = payload["analysis"]
    lines.append(f"support: [{ana['support'][0]:.9g}, {ana['support'][1]:.9g}]")
    for level, rng in ana["confidence_ranges"].items():
        lines.append(f"range@{level}: [{rng[0]:.9g}, {rng[1]:.9g}]")
    lines.append(f"overflow probability (analytic): {ana['overflow_probability']:.6g}")
    if "mc" in payload:
        lines.append(f"overflow rate (MC, n={payload['mc']['n']}): {payload['mc']['overflow_rate']:.6g}")
    for key, val in payload.get("reference", {}).items():
        lines.append(f"reference {key}: {val}")
    table = "\n".join(lines) + "\n"
    (out / "comparison.txt").write_text(table)
    click.echo(table, nl=False)


if __name__ == "__main__":
    main()
