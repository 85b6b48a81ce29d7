"""Hot-kernel dispatch: compiled Cython core when available, numpy fallback otherwise.

Set ROUNDDIST_PURE=1 to force the fallback (used by the kernel benchmark and
the cross-implementation tests).
"""

import os

from . import _pure

if os.environ.get("ROUNDDIST_PURE") == "1":
    _impl = _pure
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

IMPL = _impl.IMPL
HAVE_COMPILED = IMPL == "compiled"

round_nearest_array = _impl.round_nearest_array
piecewise_cheb_eval = _impl.piecewise_cheb_eval
error_density_sum = _impl.error_density_sum

__all__ = [
    "IMPL",
    "HAVE_COMPILED",
    "round_nearest_array",
    "piecewise_cheb_eval",
    "error_density_sum",
]
