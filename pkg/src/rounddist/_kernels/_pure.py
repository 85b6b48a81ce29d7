"""Pure-numpy implementations of the hot kernels.

Used when the compiled extension is unavailable (or when ROUNDDIST_PURE=1).
Same contracts as ``rounddist._kernels._core``.
"""

from __future__ import annotations

import numpy as np

IMPL = "pure"


def round_nearest_array(x, p, e_min, e_max):
    """Vectorized round-to-nearest into the (p, e_min, e_max) format.

    Returns doubles holding the rounded values; overflow maps to +/-inf,
    underflow to 0.0.  Ties go to the even mantissa (zero counts as even at
    the zero/smallest-positive boundary).
    """
    x = np.asarray(x, dtype=np.float64)
    a = np.abs(x)
    sgn = np.where(np.signbit(x), -1.0, 1.0)
    top = np.ldexp(2.0 - np.ldexp(1.0, -p), e_max)
    half_min = np.ldexp(1.0, e_min - 1)

    zero_mask = a <= half_min
    inf_mask = a > top

    _, e2 = np.frexp(a)
    e = e2.astype(np.int64) - 1
    tiny_mask = (e < e_min) & ~zero_mask
    e_c = np.maximum(e, e_min)
    scaled = np.ldexp(a, (-e_c).astype(np.int32))
    kf = (scaled - 1.0) * (1 << p)
    k = np.rint(kf)  # ties to even
    carry = k == (1 << p)
    k = np.where(carry, 0.0, k)
    e_c = e_c + carry

    out = sgn * np.ldexp(1.0 + k / (1 << p), e_c.astype(np.int32))
    out = np.where(tiny_mask, sgn * np.ldexp(1.0, e_min), out)
    out = np.where(zero_mask, 0.0, out)
    out = np.where(inf_mask, sgn * np.inf, out)
    return out


def piecewise_cheb_eval(x, breaks, coefs):
    """Evaluate a piecewise Chebyshev series; zero outside [breaks[0], breaks[-1]].

    ``coefs`` is an (n_pieces, max_deg+1) array of Chebyshev coefficients on
    each piece, zero-padded on the right.
    """
    x = np.asarray(x, dtype=np.float64)
    flat = x.ravel()
    out = np.zeros_like(flat)
    n = len(coefs)
    inside = (flat >= breaks[0]) & (flat <= breaks[-1])
    idx = np.searchsorted(breaks, flat, side="right") - 1
    idx = np.clip(idx, 0, n - 1)
    for i in np.unique(idx[inside]):
        mask = inside & (idx == i)
        a, b = breaks[i], breaks[i + 1]
        s = (2.0 * flat[mask] - (a + b)) / (b - a)
        out[mask] = np.polynomial.chebyshev.chebval(s, coefs[i])
    return out.reshape(x.shape)


def error_density_sum(t_nodes, z_vals, u, breaks, coefs):
    """Enumeration sum for the exact relative-error density.

    For each t in ``t_nodes`` computes

        sum_z  f(z / (1 - t*u)) * u * |z| / (1 - t*u)^2

    over the given representable values z, with f the piecewise Chebyshev
    density described by (breaks, coefs).  The caller restricts ``z_vals``
    to the values admissible on the piece containing the nodes.
    """
    t_nodes = np.asarray(t_nodes, dtype=np.float64)
    z_vals = np.asarray(z_vals, dtype=np.float64)
    out = np.empty_like(t_nodes)
    abs_z = np.abs(z_vals)
    for i, t in enumerate(t_nodes):
        denom = 1.0 - t * u
        pts = z_vals / denom
        out[i] = np.dot(piecewise_cheb_eval(pts, breaks, coefs), abs_z) * u / (denom * denom)
    return out
