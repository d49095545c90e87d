"""Select the compiled kernel extension or the numpy fallback at import.

Set RIESZ_MODLAB_PURE_PYTHON=1 to force the fallback (used by the parity
tests and the benchmark).
"""

import os

from . import _kernels_py

if os.environ.get("RIESZ_MODLAB_PURE_PYTHON", "0") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

advect_x = _impl.advect_x
deposit_affine = _impl.deposit_affine
blur_v = _impl.blur_v


def get_backends():
    """Both implementations, keyed by name (for parity tests / benchmarks)."""
    table = {"python": _kernels_py}
    try:
        from . import _kernels
        table["compiled"] = _kernels
    except ImportError:
        pass
    return table
