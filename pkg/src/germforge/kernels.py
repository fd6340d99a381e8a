"""Selects the compiled kernel extension when available.

Set ``GERMFORGE_PURE_PYTHON=1`` to force the pure-Python fallback (useful
for benchmarking the two against each other; see ``benchmarks/``).
"""

from __future__ import annotations

import os

if os.environ.get("GERMFORGE_PURE_PYTHON") == "1":
    from germforge import _kernels_py as _impl
else:
    try:
        from germforge import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from germforge import _kernels_py as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION
mul_terms_q = _impl.mul_terms_q
mul_terms_fp = _impl.mul_terms_fp
row_submul_q = _impl.row_submul_q
row_submul_fp = _impl.row_submul_fp
