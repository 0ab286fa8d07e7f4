"""Timing of the compiled core against the numpy fallback."""
from __future__ import annotations

import time

import numpy as np

from . import kernels
from .boolfn import TruthTable
from .fs_engine import min_obdd_fs


def _best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_fold(log_size: int = 20, repeat: int = 5, seed: int = 0) -> dict:
    """One fold of a 2**log_size table with a few thousand distinct refs."""
    rng = np.random.default_rng(seed)
    table = rng.integers(0, 4096, size=1 << log_size, dtype=np.int64)
    low = 1 << (log_size // 2)
    out = {"log_size": log_size}
    backends = {"python": kernels.fold_table_py, "compiled": kernels.fold_table_c}
    for name, fn in backends.items():
        out[name] = None if fn is None else _best_of(lambda: fn(table, low, False, 0), repeat)
    return out


def bench_fs(n: int = 12, repeat: int = 1, seed: int = 0) -> dict:
    """Full subset DP on a random n-variable function under each backend."""
    tt = TruthTable.random(n, seed)
    out = {"n": n}
    for name in ("python", "compiled"):
        if name == "compiled" and kernels.fold_table_c is None:
            out[name] = None
            continue
        with kernels.use_backend(name):
            out[name] = _best_of(lambda: min_obdd_fs(tt), repeat)
    return out


def run(fold_log_size: int = 20, fs_n: int = 12, repeat: int = 3) -> dict:
    fold = bench_fold(fold_log_size, repeat)
    fs = bench_fs(fs_n, 1)
    for row in (fold, fs):
        if row["compiled"] and row["python"]:
            row["speedup"] = row["python"] / row["compiled"]
    return {"fold": fold, "fs": fs}
