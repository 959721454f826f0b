"""Hot numerical kernels with a compiled core and a NumPy fallback.

The Cython extension `_core` implements the boundary-energy sum and the
fused bracketing/golden-section line search used by the direct
minimization solver; `_fallback` provides the same functions in NumPy.
The compiled version is preferred when it imported successfully; set
HEMICONTACT_PURE_PYTHON=1 to force the fallback (used by the benchmark
and the backend-agreement tests).

Both backends implement the identical algorithm; results agree to
floating-point roundoff, not bit-for-bit.
"""

import os

from hemicontact._kernels import _fallback

if os.environ.get("HEMICONTACT_PURE_PYTHON"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from hemicontact._kernels import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

boundary_energy = _impl.boundary_energy
line_search = _impl.line_search

__all__ = ["boundary_energy", "line_search", "BACKEND"]
