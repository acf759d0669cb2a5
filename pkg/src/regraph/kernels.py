"""Kernel selection: compiled sweep if the extension built, else the
pure-Python reference.

Both backends implement the contract documented on
:class:`regraph._sweep_py.SweepResult` and produce identical arrays.
"""

from __future__ import annotations

from ._sweep_py import SweepResult, pack_cvec, unpack_cvec
from ._sweep_py import sweep as sweep_python

try:
    from ._sweep import sweep as _sweep_compiled
except ImportError:
    _sweep_compiled = None

BACKEND = "compiled" if _sweep_compiled is not None else "python"

sweep = _sweep_compiled if _sweep_compiled is not None else sweep_python
sweep_compiled = _sweep_compiled

__all__ = [
    "BACKEND",
    "SweepResult",
    "pack_cvec",
    "unpack_cvec",
    "sweep",
    "sweep_python",
    "sweep_compiled",
]
