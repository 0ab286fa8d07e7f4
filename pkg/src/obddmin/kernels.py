"""Backend selection for the table-folding kernel and the subset sweep.

The compiled core is used when it imports; set ``OBDDMIN_PURE=1`` to force
the numpy fallback (per-fold loop in Python, folds via numpy).
"""
import os
from contextlib import contextmanager

from . import _fold_py

fold_table_py = _fold_py.fold_table

try:
    from ._ext._fold import fold_table as fold_table_c, sweep as sweep_c
except ImportError:  # extension not built
    fold_table_c = sweep_c = None

if fold_table_c is not None and os.environ.get("OBDDMIN_PURE", "") in ("", "0"):
    fold_table = fold_table_c
    sweep = sweep_c
    BACKEND = "compiled"
else:
    fold_table = fold_table_py
    sweep = None
    BACKEND = "python"


@contextmanager
def use_backend(name: str):
    """Temporarily switch backends ("compiled" or "python"), e.g. for benchmarks."""
    global fold_table, sweep, BACKEND
    if name == "compiled" and fold_table_c is None:
        raise RuntimeError("the compiled extension is not available")
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    saved = fold_table, sweep, BACKEND
    if name == "compiled":
        fold_table, sweep = fold_table_c, sweep_c
    else:
        fold_table, sweep = fold_table_py, None
    BACKEND = name
    try:
        yield
    finally:
        fold_table, sweep, BACKEND = saved
