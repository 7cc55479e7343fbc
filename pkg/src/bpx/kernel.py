"""Kernel backend selection.

The compiled Cython extension is used when it importable; otherwise the
pure-Python fallback with the identical API.  Set ``BPX_FORCE_PURE=1`` to
force the fallback (used by the backend-parity tests and benchmarks).
"""

from __future__ import annotations

import os

if os.environ.get("BPX_FORCE_PURE") == "1":
    from . import _eckernel_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _eckernel as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        from . import _eckernel_py as _impl
        BACKEND = "python"

primes_below = _impl.primes_below
ec_trace = _impl.ec_trace
ec_traces = _impl.ec_traces
supersingular_js_fq2 = _impl.supersingular_js_fq2


def backend() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND
