"""Kernel selection: compiled extension if available, numpy fallback otherwise.

Set HKGTOWER_PURE=1 to force the fallback (used by the benchmark and to
cross-check bit-identical results).
"""

import os

from . import _kernel_py

if os.environ.get("HKGTOWER_PURE") == "1":
    _impl = _kernel_py
else:
    try:
        from . import _serieskernel as _impl
    except ImportError:
        _impl = _kernel_py

mul = _impl.mul
compose = _impl.compose
IMPL = _impl.IMPL
