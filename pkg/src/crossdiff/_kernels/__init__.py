"""Hot-path kernel backend: compiled extension when available, NumPy fallback.

Selection happens once at import time. Set ``CROSSDIFF_KERNELS=python`` or
``=compiled`` to force a backend; forcing ``compiled`` raises if the extension
was not built. ``benchmarks/bench_kernels.py`` compares the two.
"""

import os

from . import _ref

_choice = os.environ.get("CROSSDIFF_KERNELS", "auto").strip().lower()
if _choice not in ("auto", "compiled", "python"):
    raise ImportError(
        f"CROSSDIFF_KERNELS must be 'auto', 'compiled' or 'python', got {_choice!r}"
    )

if _choice == "python":
    _impl = _ref
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _ref

BACKEND = "python" if _impl is _ref else "compiled"
symbol_fields = _impl.symbol_fields
apply_symbol = _impl.apply_symbol

__all__ = ["BACKEND", "symbol_fields", "apply_symbol"]
