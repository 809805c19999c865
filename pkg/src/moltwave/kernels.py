"""Backend selection for the sweep scan kernel.

The compiled Cython extension is preferred; the pure-Python/SciPy twin is
used when the extension is unavailable or when ``MOLTWAVE_PURE_PY`` is set
(useful for benchmarking the two against each other).
"""

import os

if os.environ.get("MOLTWAVE_PURE_PY"):
    from ._scan_py import scan_lines
    BACKEND = "python"
else:
    try:
        from ._scan import scan_lines
        BACKEND = "compiled"
    except ImportError:  # extension not built
        from ._scan_py import scan_lines
        BACKEND = "python"

__all__ = ["scan_lines", "BACKEND"]
