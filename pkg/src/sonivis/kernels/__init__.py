"""Hot numeric kernels with a compiled (Cython) core and a numpy fallback.

The compiled extension is preferred when importable; set the environment
variable ``SONIVIS_PURE_PYTHON=1`` to force the numpy implementation.
Both backends expose the same functions:

    weight_sums(img)                 -- 8-neighbour quantized weight sums
    filter_iterations(img, n, t)     -- fixed-point contrast filter states
    fir_block(xext, taps)            -- streaming FIR with history prefix
    raycast(...)                     -- pinhole camera over a box corridor
"""

import os

from . import fallback as _fallback

if os.environ.get("SONIVIS_PURE_PYTHON"):
    _impl = _fallback
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _fallback

BACKEND = "compiled" if _impl is not _fallback else "numpy"

weight_sums = _impl.weight_sums
filter_iterations = _impl.filter_iterations
fir_block = _impl.fir_block
raycast = _impl.raycast

# Always-available fallback handles, used by the backend benchmark and
# the cross-backend parity tests.
fallback_weight_sums = _fallback.weight_sums
fallback_filter_iterations = _fallback.filter_iterations
fallback_fir_block = _fallback.fir_block
fallback_raycast = _fallback.raycast
