"""Minimum finding over ``range(N)`` with query accounting.

Both modes scan the whole domain and return the exact argmin (smallest index
on ties).  ``simulated_quantum`` additionally reports the nominal query
count ``ceil(sqrt(N * log2(1/eps)))`` of quantum minimum finding, without any
hidden constant.  No amplitude dynamics or sampling error is modelled.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Callable, Optional


class Mode(str, Enum):
    CLASSICAL = "classical"
    SIMULATED_QUANTUM = "simulated_quantum"

    @classmethod
    def coerce(cls, value) -> "Mode":
        if isinstance(value, cls):
            return value
        value = str(value).lower()
        if value in ("qsim", "quantum"):
            return cls.SIMULATED_QUANTUM
        return cls(value)


@dataclass(frozen=True)
class QueryStats:
    N: int
    classical_evals: int
    quantum_query_bound: Optional[int]
    epsilon: float
    log_base: str = "2"
    bound_note: str = "nominal, constant-free"

    def to_dict(self) -> dict:
        return asdict(self)


def query_bound(N: int, epsilon: float) -> int:
    """``ceil(sqrt(N * log2(1/epsilon)))``, at least 1 for N >= 1."""
    if N < 1:
        raise ValueError("domain must be non-empty")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    log_term = -math.log2(epsilon)
    if log_term.is_integer():
        prod = N * int(log_term)
        root = math.isqrt(prod)
        bound = root if root * root == prod else root + 1
    else:
        bound = math.ceil(math.sqrt(N * log_term))
    return max(1, bound)


def find_min(
    N: int,
    key: Callable[[int], int],
    mode=Mode.CLASSICAL,
    epsilon: Optional[float] = None,
):
    """Return ``(argmin, min_key, QueryStats)`` over indices ``0..N-1``.

    ``epsilon`` defaults to ``2**-20``; callers with an ambient problem size n
    should pass ``2**-n``.
    """
    if N < 1:
        raise ValueError("find_min needs N >= 1")
    mode = Mode.coerce(mode)
    eps = 2.0 ** -20 if epsilon is None else epsilon
    best_i = 0
    best = key(0)
    for i in range(1, N):
        value = key(i)
        if value < best:
            best_i, best = i, value
    bound = query_bound(N, eps) if mode is Mode.SIMULATED_QUANTUM else None
    return best_i, best, QueryStats(N=N, classical_evals=N, quantum_query_bound=bound, epsilon=eps)


# -- k-subset ranking (lexicographic over a sorted ground set) ---------------

def rank_subset(subset, ground) -> int:
    """Lexicographic rank of ``subset`` among the |subset|-subsets of ``ground``."""
    ground = sorted(ground)
    pos = {v: i for i, v in enumerate(ground)}
    idx = sorted(pos[v] for v in subset)
    n, k = len(ground), len(idx)
    r = 0
    prev = -1
    for j, c in enumerate(idx):
        for skipped in range(prev + 1, c):
            r += math.comb(n - skipped - 1, k - j - 1)
        prev = c
    return r


def unrank_subset(r: int, ground, k: int) -> tuple:
    """Inverse of :func:`rank_subset`."""
    ground = sorted(ground)
    n = len(ground)
    if not 0 <= r < math.comb(n, k):
        raise ValueError(f"rank {r} outside [0, C({n},{k}))")
    out = []
    c = 0
    for j in range(k):
        while True:
            block = math.comb(n - c - 1, k - j - 1)
            if r < block:
                break
            r -= block
            c += 1
        out.append(ground[c])
        c += 1
    return tuple(out)
