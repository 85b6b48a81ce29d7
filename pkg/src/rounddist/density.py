"""Probability densities as piecewise Chebyshev interpolants, with arithmetic
on independent random variables.

A :class:`Density` is a list of intervals with a Chebyshev series on each; it
is the common currency for input distributions, rounding-error distributions
and term outputs.  Binary operations follow the density-convolution formulas
for sums, differences, products and quotients of independent variables,
evaluated by Clenshaw-Curtis quadrature at adaptively chosen interpolation
nodes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.optimize import brentq

from . import _kernels
from .errors import PieceCapWarning, SingularDivisionError

__all__ = [
    "Density",
    "DistributionSpec",
    "build",
    "adaptive_from_callable",
    "sup_distance",
]

EPS_NORM = 1e-8
EPS_NEG = 1e-9
DEFAULT_PIECE_CAP = 4096
INIT_BREAK_CAP = 64
DEGREE = 16
REL_TOL = 1e-10
MASS_SKIP = 1e-15
MAX_DEPTH = 30
_CC_POINTS = 32  # intervals per Clenshaw-Curtis panel (33 nodes)
_CC_POINTS_SINGULAR = 64  # for product/quotient integrands

NORMAL_TRUNCATION_SIGMAS = 8.0


# ---------------------------------------------------------------------------
# distribution specifications

@dataclass(frozen=True)
class DistributionSpec:
    """Named input distribution family with parameters."""

    kind: str
    params: dict = field(default_factory=dict)

    @classmethod
    def uniform(cls, a: float, b: float) -> "DistributionSpec":
        return cls("uniform", {"a": float(a), "b": float(b)})

    @classmethod
    def normal(cls, mu: float, sigma: float) -> "DistributionSpec":
        return cls("normal", {"mu": float(mu), "sigma": float(sigma)})

    @classmethod
    def constant(cls, c: float) -> "DistributionSpec":
        return cls("constant", {"c": float(c)})

    @classmethod
    def custom(cls, points: Sequence[tuple[float, float]]) -> "DistributionSpec":
        return cls("custom", {"points": [[float(x), float(y)] for x, y in points]})

    @classmethod
    def from_dict(cls, d: dict) -> "DistributionSpec":
        d = dict(d)
        kind = d.pop("kind", None)
        if kind is None:
            raise ValueError("distribution spec needs a 'kind'")
        return cls(kind, d.get("params", d))

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}


# ---------------------------------------------------------------------------
# Clenshaw-Curtis panels

@lru_cache(maxsize=16)
def _cc_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Closed Clenshaw-Curtis nodes and weights on [-1, 1] with n+1 points."""
    j = np.arange(n + 1)
    x = np.cos(np.pi * j / n)
    k_even = np.arange(0, n + 1, 2)
    t_int = 2.0 / (1.0 - k_even.astype(float) ** 2)  # integrals of even T_k
    gamma_k = np.where((k_even == 0) | (k_even == n), 0.5, 1.0)
    gamma_j = np.where((j == 0) | (j == n), 0.5, 1.0)
    cosmat = np.cos(np.outer(k_even, j) * np.pi / n)
    w = (2.0 / n) * gamma_j * ((gamma_k * t_int) @ cosmat)
    return x, w


# ---------------------------------------------------------------------------
# core representation

def _cheb_piece_mass(coefs: np.ndarray, a: float, b: float) -> float:
    n = np.arange(len(coefs))
    with np.errstate(divide="ignore"):
        w = np.where(n % 2 == 0, 2.0 / (1.0 - n.astype(float) ** 2), 0.0)
    return 0.5 * (b - a) * float(np.dot(coefs, w))


class Density:
    """A normalized (or normalizable) piecewise-polynomial probability density."""

    def __init__(self, breaks: np.ndarray, coefs: Sequence[np.ndarray]):
        breaks = np.asarray(breaks, dtype=np.float64)
        if len(breaks) != len(coefs) + 1:
            raise ValueError("need len(breaks) == len(coefs) + 1")
        if not np.all(np.diff(breaks) > 0):
            raise ValueError("breakpoints must be strictly ascending")
        self.breaks = breaks
        self.coefs = [np.atleast_1d(np.asarray(c, dtype=np.float64)) for c in coefs]
        self._masses = np.array(
            [_cheb_piece_mass(c, breaks[i], breaks[i + 1]) for i, c in enumerate(self.coefs)]
        )
        self._cum = np.concatenate([[0.0], np.cumsum(self._masses)])
        self.total_mass = float(self._cum[-1])
        self._padded: np.ndarray | None = None

    # -- basic queries ------------------------------------------------------

    @property
    def support(self) -> tuple[float, float]:
        return float(self.breaks[0]), float(self.breaks[-1])

    @property
    def n_pieces(self) -> int:
        return len(self.coefs)

    def _coef_matrix(self) -> np.ndarray:
        if self._padded is None:
            width = max(len(c) for c in self.coefs)
            m = np.zeros((len(self.coefs), width))
            for i, c in enumerate(self.coefs):
                m[i, : len(c)] = c
            self._padded = m
        return self._padded

    def pdf(self, x) -> np.ndarray:
        """Density value, clipped at zero; zero outside the support."""
        vals = _kernels.piecewise_cheb_eval(x, self.breaks, self._coef_matrix())
        return np.maximum(vals, 0.0)

    def __call__(self, x):
        return self.pdf(x)

    def cdf(self, x):
        x_arr = np.asarray(x, dtype=np.float64)
        flat = np.atleast_1d(x_arr).ravel()
        out = np.empty_like(flat)
        lo, hi = self.support
        below = flat < lo
        above = flat >= hi
        out[below] = 0.0
        out[above] = self.total_mass
        mid = ~(below | above)
        if np.any(mid):
            xm = flat[mid]
            idx = np.clip(np.searchsorted(self.breaks, xm, side="right") - 1, 0, self.n_pieces - 1)
            part = np.empty_like(xm)
            for i in np.unique(idx):
                m = idx == i
                a, b = self.breaks[i], self.breaks[i + 1]
                s = (2.0 * xm[m] - (a + b)) / (b - a)
                ci = cheb.chebint(self.coefs[i])
                part[m] = 0.5 * (b - a) * (cheb.chebval(s, ci) - cheb.chebval(-1.0, ci))
            out[mid] = self._cum[idx] + part
        out = np.clip(out, 0.0, None)
        if x_arr.ndim == 0:
            return float(out[0])
        return out.reshape(x_arr.shape)

    def quantile(self, q):
        q_arr = np.asarray(q, dtype=np.float64)
        flat = np.atleast_1d(q_arr).ravel()
        out = np.array([self._quantile_scalar(v) for v in flat])
        if q_arr.ndim == 0:
            return float(out[0])
        return out.reshape(q_arr.shape)

    def _quantile_scalar(self, q: float) -> float:
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"quantile level must be in [0, 1], got {q}")
        target = q * self.total_mass
        lo, hi = self.support
        if target <= 0.0:
            return lo
        if target >= self.total_mass:
            return hi
        i = int(np.clip(np.searchsorted(self._cum, target, side="right") - 1, 0, self.n_pieces - 1))
        a, b = float(self.breaks[i]), float(self.breaks[i + 1])
        fa = self.cdf(a) - target
        fb = self.cdf(b) - target
        if fa >= 0.0:
            return a
        if fb <= 0.0:
            return b
        return float(brentq(lambda x: self.cdf(x) - target, a, b, xtol=1e-14 * max(1.0, abs(b))))

    def mass_outside(self, lo: float, hi: float) -> float:
        return max(0.0, 1.0 - (self.cdf(hi) - self.cdf(lo)) / self.total_mass)

    def mean(self) -> float:
        total = 0.0
        for i, c in enumerate(self.coefs):
            a, b = self.breaks[i], self.breaks[i + 1]
            xc = cheb.chebmul(c, [0.5 * (a + b), 0.5 * (b - a)])
            total += _cheb_piece_mass(xc, a, b)
        return total / self.total_mass

    # -- transforms ---------------------------------------------------------

    def normalize(self) -> "Density":
        if self.total_mass <= 0.0:
            raise ValueError("cannot normalize a density with non-positive mass")
        if abs(self.total_mass - 1.0) <= 1e-15:
            return self
        return Density(self.breaks, [c / self.total_mass for c in self.coefs])

    def scalar_add(self, alpha: float) -> "Density":
        """Density of alpha + X: exact shift of breakpoints."""
        return Density(self.breaks + alpha, [c.copy() for c in self.coefs])

    def scalar_mul(self, alpha: float) -> "Density":
        """Density of alpha * X (alpha != 0): exact change of variables."""
        if alpha == 0.0:
            raise ValueError("scalar_mul requires a non-zero scalar")
        inv = 1.0 / abs(alpha)
        if alpha > 0:
            return Density(self.breaks * alpha, [c * inv for c in self.coefs])
        new_breaks = (self.breaks * alpha)[::-1]
        flip = []
        for c in reversed(self.coefs):
            cc = c * inv
            cc = cc.copy()
            cc[1::2] *= -1.0  # T_n(-s) = (-1)^n T_n(s)
            flip.append(cc)
        return Density(new_breaks, flip)

    # -- random-variable arithmetic ----------------------------------------

    def add(self, other: "Density", **opts) -> "Density":
        return _binop(self, other, "add", **opts)

    def sub(self, other: "Density", **opts) -> "Density":
        return _binop(self, other, "sub", **opts)

    def mul(self, other: "Density", **opts) -> "Density":
        return _binop(self, other, "mul", **opts)

    def div(self, other: "Density", **opts) -> "Density":
        return _binop(self, other, "div", **opts)

    # -- export -------------------------------------------------------------

    def dump_csv(self, path, n: int = 2048) -> None:
        lo, hi = self.support
        xs = np.linspace(lo, hi, n)
        pdf = self.pdf(xs)
        cdfv = self.cdf(xs)
        with open(path, "w") as f:
            f.write("x,pdf,cdf\n")
            for x, p, c in zip(xs, pdf, cdfv):
                f.write(f"{float(x)!r},{float(p)!r},{float(c)!r}\n")

    def __repr__(self) -> str:
        lo, hi = self.support
        return f"Density(support=[{lo:g}, {hi:g}], pieces={self.n_pieces}, mass={self.total_mass:.6g})"


# ---------------------------------------------------------------------------
# adaptive construction

def adaptive_from_callable(
    fn: Callable[[np.ndarray], np.ndarray],
    breakpoints,
    *,
    degree: int = DEGREE,
    rel_tol: float = REL_TOL,
    piece_cap: int = DEFAULT_PIECE_CAP,
    scale_hint: float | None = None,
) -> Density:
    """Interpolate ``fn`` piecewise, splitting pieces until the interpolant at
    doubled node count agrees to ``rel_tol`` (relative to the global scale)."""
    breaks0 = np.unique(np.asarray(breakpoints, dtype=np.float64))
    if len(breaks0) < 2:
        raise ValueError("need at least two breakpoints")
    scale = scale_hint if scale_hint is not None else 0.0
    pieces: list[tuple[float, float, np.ndarray]] = []
    stack = [(float(breaks0[i]), float(breaks0[i + 1]), 0) for i in range(len(breaks0) - 1)]
    stack.reverse()
    capped = False
    test_s = np.cos(np.pi * (2 * np.arange(2 * degree + 1) + 1) / (2 * (2 * degree + 1)))
    while stack:
        a, b, depth = stack.pop()
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        coefs = cheb.chebinterpolate(lambda s: fn(mid + half * np.asarray(s)), degree)
        truth = fn(mid + half * test_s)
        approx = cheb.chebval(test_s, coefs)
        scale = max(scale, float(np.max(np.abs(truth))), 1e-300)
        err = float(np.max(np.abs(truth - approx)))
        room = len(pieces) + len(stack) + 1 < piece_cap
        if err <= rel_tol * scale or depth >= MAX_DEPTH or not room:
            if err > rel_tol * scale and not room:
                capped = True
            pieces.append((a, b, coefs))
        else:
            stack.append((mid, b, depth + 1))
            stack.append((a, mid, depth + 1))
    if capped:
        warnings.warn(
            f"density piece cap ({piece_cap}) reached before interpolation tolerance",
            PieceCapWarning,
        )
    pieces.sort(key=lambda p: p[0])
    breaks = np.array([p[0] for p in pieces] + [pieces[-1][1]])
    return Density(breaks, [_trim(p[2]) for p in pieces])


def _trim(coefs: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    scale = np.max(np.abs(coefs)) if len(coefs) else 0.0
    if scale == 0.0:
        return np.zeros(1)
    keep = np.nonzero(np.abs(coefs) > tol * scale)[0]
    if len(keep) == 0:
        return np.zeros(1)
    return coefs[: keep[-1] + 1]


# ---------------------------------------------------------------------------
# builders

def build(spec: DistributionSpec) -> Density:
    """Build a normalized density from a distribution specification."""
    if spec.kind == "uniform":
        a, b = spec.params["a"], spec.params["b"]
        if not a < b:
            raise ValueError(f"uniform requires a < b, got [{a}, {b}]")
        return Density(np.array([a, b]), [np.array([1.0 / (b - a)])])
    if spec.kind == "normal":
        mu, sigma = spec.params["mu"], spec.params["sigma"]
        if not sigma > 0:
            raise ValueError(f"normal requires sigma > 0, got {sigma}")
        s = NORMAL_TRUNCATION_SIGMAS
        rel = np.array([-s, -5.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 5.0, s])
        breaks = mu + sigma * rel
        norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))

        def pdf(x):
            return norm * np.exp(-0.5 * ((np.asarray(x) - mu) / sigma) ** 2)

        return adaptive_from_callable(pdf, breaks).normalize()
    if spec.kind == "constant":
        # degenerate stand-in; the interpreter handles constants symbolically
        c = spec.params["c"]
        h = max(abs(c), 1.0) * 2.0 ** -40
        return Density(np.array([c - h, c + h]), [np.array([0.5 / h])])
    if spec.kind == "custom":
        pts = sorted((float(x), float(y)) for x, y in spec.params["points"])
        if len(pts) < 2:
            raise ValueError("custom distribution needs at least two points")
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        if np.any(ys < 0):
            raise ValueError("custom density table must be non-negative")
        coefs = []
        for i in range(len(xs) - 1):
            y0, y1 = ys[i], ys[i + 1]
            coefs.append(np.array([0.5 * (y0 + y1), 0.5 * (y1 - y0)]))
        return Density(xs, coefs).normalize()
    raise ValueError(f"unknown distribution kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# binary operations on independent random variables

def _op_support(op: str, sx, sy) -> tuple[float, float]:
    ax, bx = sx
    ay, by = sy
    if op == "add":
        return ax + ay, bx + by
    if op == "sub":
        return ax - by, bx - ay
    if op == "mul":
        prods = [ax * ay, ax * by, bx * ay, bx * by]
        return min(prods), max(prods)
    if op == "div":
        quots = [ax / ay, ax / by, bx / ay, bx / by]
        return min(quots), max(quots)
    raise ValueError(op)


def _image_breaks(op: str, bx: np.ndarray, by: np.ndarray) -> np.ndarray:
    if op == "add":
        img = np.add.outer(bx, by)
    elif op == "sub":
        img = np.subtract.outer(bx, by)
    elif op == "mul":
        img = np.multiply.outer(bx, by)
    else:
        img = np.divide.outer(bx, by[by != 0.0])
    return img.ravel()


def _thin(cands: np.ndarray, lo: float, hi: float, cap: int, mandatory=()) -> np.ndarray:
    cands = np.unique(cands[(cands >= lo) & (cands <= hi)])
    width = hi - lo
    # drop near-duplicates
    keep = [lo]
    for c in cands:
        if c - keep[-1] > 1e-12 * max(width, 1.0):
            keep.append(float(c))
    if keep[-1] < hi - 1e-12 * max(width, 1.0):
        keep.append(hi)
    else:
        keep[-1] = hi
    pts = np.array(keep)
    if len(pts) > cap:
        idx = np.unique(np.round(np.linspace(0, len(pts) - 1, cap)).astype(int))
        pts = pts[idx]
    extra = [m for m in mandatory if lo < m < hi]
    if extra:
        pts = np.unique(np.concatenate([pts, extra]))
    return pts


def _graded_near_zero(lo: float, hi: float) -> list[float]:
    """Geometrically graded breakpoints around an interior zero, to resolve
    the logarithmic singularity of products/quotients crossing zero."""
    w = max(abs(lo), abs(hi))
    levels = [1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.1]
    pts = [0.0]
    for lv in levels:
        if -w * lv > lo:
            pts.append(-w * lv)
        if w * lv < hi:
            pts.append(w * lv)
    return pts


def _split_log(a: float, b: float, out: list) -> None:
    """Split [a, b] (not containing 0 in its interior) so each part has
    bounded ratio of endpoint distances to zero."""
    if a < 0.0 and b <= 0.0:
        tmp: list = []
        _split_log(-b, -a, tmp)
        out.extend((-d, -c) for c, d in reversed(tmp))
        return
    if b - a <= 4.0 * max(a, 0.0) or b - a < 1e-300:
        out.append((a, b))
        return
    if a <= 0.0:
        out.append((a, b))
        return
    m = math.sqrt(a * b)
    _split_log(a, m, out)
    _split_log(m, b, out)


def _piece_mass_at(d: Density, x: float) -> float:
    i = int(np.clip(np.searchsorted(d.breaks, x, side="right") - 1, 0, d.n_pieces - 1))
    return abs(float(d._masses[i]))


def _panel_nodes(cuts: list[float], n_cc: int, log_grade: bool):
    """Flatten quadrature panels between consecutive cuts into node/weight arrays."""
    xs, ws, spans = [], [], []
    base_x, base_w = _cc_rule(n_cc)
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 0.0:
            continue
        segs: list[tuple[float, float]] = []
        if log_grade:
            _split_log(a, b, segs)
        else:
            segs = [(a, b)]
        for c, d in segs:
            half = 0.5 * (d - c)
            if half <= 0.0:
                continue
            nodes = 0.5 * (c + d) + half * base_x
            # panel edges sit on operand breakpoints, where piecewise pdfs may
            # jump; pull the endpoint nodes inside so each panel samples its
            # own side of the discontinuity
            eps = 1e-9 * half
            nodes[0] = d - eps  # node order follows descending Chebyshev angles
            nodes[-1] = c + eps
            xs.append(nodes)
            ws.append(half * base_w)
            spans.append((c, d))
    return xs, ws, spans


def _binop(
    fX: Density,
    fY: Density,
    op: str,
    *,
    break_cap: int = INIT_BREAK_CAP,
    piece_cap: int = DEFAULT_PIECE_CAP,
    rel_tol: float = REL_TOL,
    degree: int = DEGREE,
) -> Density:
    ax, bx = fX.support
    ay, by = fY.support
    if op == "div" and ay <= 0.0 <= by:
        raise SingularDivisionError(
            f"divisor support [{ay:g}, {by:g}] touches zero; quotient density is singular"
        )
    lo, hi = _op_support(op, fX.support, fY.support)
    if hi - lo <= 0.0:
        raise ValueError(f"degenerate result support [{lo}, {hi}] for {op}")
    mandatory: list[float] = []
    singular = op in ("mul", "div") and lo < 0.0 < hi
    if singular:
        mandatory = _graded_near_zero(lo, hi)
    cands = _image_breaks(op, fX.breaks, fY.breaks)
    breaks = _thin(cands, lo, hi, break_cap, mandatory)

    n_cc = _CC_POINTS if op in ("add", "sub") else _CC_POINTS_SINGULAR
    log_grade = op in ("mul", "div")

    def integrand(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
        out = np.zeros_like(ts)
        for i, t in enumerate(ts):
            out[i] = _binop_point(fX, fY, op, float(t), n_cc, log_grade)
        return out

    dens = adaptive_from_callable(
        integrand, breaks, degree=degree, rel_tol=rel_tol, piece_cap=piece_cap
    )
    return dens.normalize()


def _snap_into(vals: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Snap values a few ulps outside [lo, hi] onto the boundary.

    Quadrature panels are built so mapped arguments lie inside the operand
    support, but the affine node maps can overshoot by roundoff, which would
    clip the pdf to zero at panel edges and bias the integral.
    """
    tol = 1e-12 * max(abs(lo), abs(hi), 1.0)
    vals = np.where((vals > hi) & (vals <= hi + tol), hi, vals)
    vals = np.where((vals < lo) & (vals >= lo - tol), lo, vals)
    return vals


def _binop_point(fX: Density, fY: Density, op: str, t: float, n_cc: int, log_grade: bool) -> float:
    ax, bx = fX.support
    ay, by = fY.support
    if op in ("add", "sub"):
        if op == "add":
            lo, hi = max(ax, t - by), min(bx, t - ay)
            y_kinks = t - fY.breaks
        else:
            lo, hi = max(ax, t + ay), min(bx, t + by)
            y_kinks = t + fY.breaks
        if hi - lo <= 0.0:
            return 0.0
        cuts = _assemble_cuts(lo, hi, [fX.breaks, y_kinks])
        xs, ws, spans = _panel_nodes(cuts, n_cc, False)
        total = 0.0
        for x, w, (c, d) in zip(xs, ws, spans):
            mid = 0.5 * (c + d)
            if _piece_mass_at(fX, mid) < MASS_SKIP:
                continue
            y = (t - x) if op == "add" else (x - t)
            xa = _snap_into(x, ax, bx)
            ya = _snap_into(y, ay, by)
            total += float(np.dot(w, fX.pdf(xa) * fY.pdf(ya)))
        return total
    if op == "mul":
        # integrate over x: fX(x) fY(t/x) / |x|
        kinks = [fX.breaks]
        nz = fY.breaks[fY.breaks != 0.0]
        if t != 0.0 and len(nz):
            kinks.append(t / nz)
        kinks.append(np.array([0.0]))
        cuts = _assemble_cuts(ax, bx, kinks)
        xs, ws, spans = _panel_nodes(cuts, n_cc, log_grade)
        total = 0.0
        for x, w, (c, d) in zip(xs, ws, spans):
            mid = 0.5 * (c + d)
            if mid == 0.0:
                continue
            ym = t / mid
            if not ay <= ym <= by:
                continue
            if _piece_mass_at(fX, mid) < MASS_SKIP:
                continue
            xa = _snap_into(x, ax, bx)
            ya = _snap_into(t / x, ay, by)
            total += float(np.dot(w, fX.pdf(xa) * fY.pdf(ya) / np.abs(x)))
        return total
    # div: t = x / y; integrate over y: fX(t y) fY(y) |y|
    kinks = [fY.breaks]
    if t != 0.0:
        kinks.append(fX.breaks / t)
    cuts = _assemble_cuts(ay, by, kinks)
    xs, ws, spans = _panel_nodes(cuts, n_cc, False)
    total = 0.0
    for y, w, (c, d) in zip(xs, ws, spans):
        mid = 0.5 * (c + d)
        xm = t * mid
        if not ax <= xm <= bx:
            continue
        if _piece_mass_at(fY, mid) < MASS_SKIP:
            continue
        xa = _snap_into(t * y, ax, bx)
        ya = _snap_into(y, ay, by)
        total += float(np.dot(w, fX.pdf(xa) * fY.pdf(ya) * np.abs(y)))
    return total


def _assemble_cuts(lo: float, hi: float, kink_groups: list[np.ndarray]) -> list[float]:
    pts = np.concatenate([np.asarray(g, dtype=np.float64) for g in kink_groups])
    pts = pts[(pts > lo) & (pts < hi)]
    pts = np.unique(pts)
    cuts = [lo]
    for p in pts:
        if p - cuts[-1] > 1e-14 * max(abs(lo), abs(hi), 1.0):
            cuts.append(float(p))
    cuts.append(hi)
    return cuts


# ---------------------------------------------------------------------------
# comparison helper

def sup_distance(d1, d2, lo: float, hi: float, n: int = 2001) -> float:
    """Sup-norm distance between two pdf-like callables on a uniform grid."""
    xs = np.linspace(lo, hi, n)
    f1 = d1.pdf(xs) if hasattr(d1, "pdf") else d1(xs)
    f2 = d2.pdf(xs) if hasattr(d2, "pdf") else d2(xs)
    return float(np.max(np.abs(f1 - f2)))
