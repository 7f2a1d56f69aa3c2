"""Select the compiled kernels when available, else the Python fallback.

Set ``LSBPLS_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("LSBPLS_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

set_parity = _impl.set_parity
embed_bits = _impl.embed_bits
extract_bits = _impl.extract_bits
partial_shuffle = _impl.partial_shuffle
