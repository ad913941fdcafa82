"""Truth-set evaluation kernels.

Two interchangeable back ends evaluate compiled queries (see
``encode``): a pure-Python bitmask interpreter and a Cython extension.
The extension is used when it was built and the model fits its 64-label
packing; set ``SIMKNO_KERNEL=pure`` or ``SIMKNO_KERNEL=c`` to force a
back end.  ``benchmarks/kernel_bench.py`` compares the two.
"""

from __future__ import annotations

import os

from ..formula import Formula
from ..model import WeightedModel
from . import pure
from .encode import Query, compile_query

try:
    from . import c as _c
except ImportError:  # extension not built
    _c = None

__all__ = ["available_kernels", "active_kernel", "truth_mask", "compile_query", "Query"]


def available_kernels() -> tuple[str, ...]:
    return ("pure", "c") if _c is not None else ("pure",)


def active_kernel() -> str:
    """The back end the next evaluation will try first."""
    forced = os.environ.get("SIMKNO_KERNEL")
    if forced:
        if forced not in ("pure", "c"):
            raise ValueError(f"SIMKNO_KERNEL must be 'pure' or 'c', not {forced!r}")
        if forced == "c" and _c is None:
            raise RuntimeError("SIMKNO_KERNEL=c but the compiled kernel is not built")
        return forced
    return "c" if _c is not None else "pure"


def truth_mask(model: WeightedModel, phi: Formula) -> int:
    """Bitmask (in state order) of the states of ``model`` satisfying
    ``phi``."""
    query = compile_query(model, phi)
    if active_kernel() == "c":
        try:
            return _c.run(query)
        except _c.Unsupported:
            pass
    return pure.run(query)
