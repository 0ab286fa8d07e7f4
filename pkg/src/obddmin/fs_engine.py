"""Subset dynamic program over folded variable sets.

An :class:`FsState` describes the bottom ``|folded|`` levels of an optimal
diagram whose bottom variables are drawn block by block from ``prefix``.  Its
``table`` maps every assignment of the still-unfolded variables (smallest
unfolded index at bit 0) to the ref of the node representing that
subfunction.  Folding one more variable halves the table and materializes one
diagram level.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Union

import numpy as np

from . import kernels
from .boolfn import TruthTable
from .diagram import Kind, VariableOrder

VarSet = Union[int, Iterable[int]]


def to_mask(vars_: VarSet) -> int:
    if isinstance(vars_, (int, np.integer)):
        return int(vars_)
    mask = 0
    for v in vars_:
        if v < 0:
            raise ValueError(f"negative variable index {v}")
        mask |= 1 << v
    return mask


def mask_vars(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True, eq=False)
class FsState:
    n: int
    kind: Kind
    prefix: tuple[int, ...]  # block masks, bottom block first
    pi_folded: tuple[int, ...]  # pi_folded[0] sits at level 1
    min_cost: int
    table: np.ndarray
    node_lo: np.ndarray  # children of the topmost folded level's nodes
    node_hi: np.ndarray
    fold_increments: tuple[int, ...]

    @cached_property
    def folded(self) -> int:
        return to_mask(self.pi_folded)

    @cached_property
    def unfolded(self) -> int:
        return ((1 << self.n) - 1) & ~self.folded

    @property
    def node_map(self) -> dict[tuple[int, int], int]:
        """``(lo, hi) -> ref`` for the nodes created by the last fold."""
        first = self.min_cost - self.node_lo.size + 2
        return {
            (int(lo), int(hi)): first + j
            for j, (lo, hi) in enumerate(zip(self.node_lo, self.node_hi))
        }

    def cost_of(self, vars_: VarSet) -> int:
        """Nodes on the levels of the given folded variables."""
        wanted = to_mask(vars_)
        if wanted & ~self.folded:
            raise ValueError("cost requested for an unfolded variable")
        return sum(
            inc for v, inc in zip(self.pi_folded, self.fold_increments) if wanted >> v & 1
        )

    def relabel(self, prefix: tuple[int, ...]) -> "FsState":
        if prefix == self.prefix:
            return self
        return replace(self, prefix=prefix)

    def dump(self) -> str:
        return json.dumps({
            "n": self.n,
            "kind": self.kind.value,
            "prefix_masks": list(self.prefix),
            "pi_folded": list(self.pi_folded),
            "min_cost": self.min_cost,
            "fold_increments": list(self.fold_increments),
            "table_length": int(self.table.size),
        })


def initial_state(tt: TruthTable, kind=Kind.OBDD) -> FsState:
    empty = np.zeros(0, dtype=np.int64)
    return FsState(
        n=tt.n,
        kind=Kind.coerce(kind),
        prefix=(),
        pi_folded=(),
        min_cost=0,
        table=tt.bits.astype(np.int64),
        node_lo=empty,
        node_hi=empty,
        fold_increments=(),
    )


def _fold_raw(s: FsState, k: int):
    below = s.unfolded & ((1 << k) - 1)
    low = 1 << bin(below).count("1")
    return kernels.fold_table(s.table, low, s.kind is Kind.ZDD, s.min_cost)


def _make(s: FsState, k: int, raw, prefix) -> FsState:
    table, lo, hi = raw
    inc = int(lo.size)
    return FsState(
        n=s.n,
        kind=s.kind,
        prefix=prefix,
        pi_folded=s.pi_folded + (k,),
        min_cost=s.min_cost + inc,
        table=table,
        node_lo=lo,
        node_hi=hi,
        fold_increments=s.fold_increments + (inc,),
    )


def fold(s: FsState, k: int) -> FsState:
    """Place variable ``k`` on the next level up; the result's last block is ``{k}``."""
    if not 0 <= k < s.n:
        raise ValueError(f"variable {k} outside [0, {s.n})")
    if s.folded >> k & 1:
        raise ValueError(f"variable {k} is already folded")
    return _make(s, k, _fold_raw(s, k), s.prefix + (1 << k,))


def fold_sequence(s: FsState, vars_: Iterable[int]) -> FsState:
    for v in vars_:
        s = fold(s, v)
    return s


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("OBDD_THREADS", "1")))
    except ValueError:
        return 1


def _check_block(s: FsState, J: VarSet) -> int:
    jmask = to_mask(J)
    if jmask == 0:
        raise ValueError("variable set J is empty")
    if jmask >> s.n:
        raise ValueError(f"J mentions variables outside [0, {s.n})")
    if jmask & s.folded:
        raise ValueError("J intersects the already-folded variables")
    return jmask


def _sweep_compiled(s: FsState, jmask: int, rank: int):
    js = mask_vars(jmask)
    unf = s.unfolded
    jpos = np.array([bin(unf & ((1 << v) - 1)).count("1") for v in js], dtype=np.int64)
    masks, tables, costs, orders, incs, los, his, counts = kernels.sweep(
        s.table, s.min_cost, jpos, rank, s.kind is Kind.ZDD
    )
    out = {}
    for i, (local, cost, c, order, inc) in enumerate(
        zip(masks.tolist(), costs.tolist(), counts.tolist(), orders.tolist(), incs.tolist())
    ):
        kmask = 0
        for b, v in enumerate(js):
            if local >> b & 1:
                kmask |= 1 << v
        out[kmask] = FsState(
            n=s.n,
            kind=s.kind,
            prefix=s.prefix + (kmask,),
            pi_folded=s.pi_folded + tuple(js[o] for o in order),
            min_cost=cost,
            table=tables[i],
            node_lo=los[i, :c],
            node_hi=his[i, :c],
            fold_increments=s.fold_increments + tuple(inc),
        )
    return out


def _sweep(s: FsState, jmask: int, rank: int, workers: int):
    """Rank-by-rank DP; returns ``{K: state}`` for all ``rank``-subsets K of J.

    Only ranks ``l - 1`` and ``l`` are held at once.  Among equal costs the
    smallest top variable wins.
    """
    if kernels.sweep is not None:
        return _sweep_compiled(s, jmask, rank)
    js = mask_vars(jmask)
    prev: dict[int, FsState] = {0: s}

    def best_for(K: tuple[int, ...]):
        kmask = to_mask(K)
        best = best_raw = best_k = None
        best_cost = None
        for k in K:
            base = prev[kmask & ~(1 << k)]
            raw = _fold_raw(base, k)
            cost = base.min_cost + raw[1].size
            if best_cost is None or cost < best_cost:
                best, best_raw, best_k, best_cost = base, raw, k, cost
        return kmask, _make(best, best_k, best_raw, s.prefix + (kmask,))

    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for ell in range(1, rank + 1):
            subsets = combinations(js, ell)
            if pool is not None and comb(len(js), ell) >= 4 * workers:
                results = pool.map(best_for, subsets, chunksize=16)
            else:
                results = map(best_for, subsets)
            prev = dict(results)
    finally:
        if pool is not None:
            pool.shutdown()
    return prev


def fs_star(s: FsState, J: VarSet, workers: int | None = None) -> FsState:
    """Optimal state for ``<s.prefix, J>``: the best order of J above the prefix."""
    jmask = _check_block(s, J)
    rank = bin(jmask).count("1")
    return _sweep(s, jmask, rank, workers or _workers())[jmask]


def fs_star_truncated(s: FsState, J: VarSet, k: int, workers: int | None = None) -> dict[int, FsState]:
    """Optimal states for ``<s.prefix, K>`` for every k-subset K of J, keyed by mask."""
    jmask = _check_block(s, J)
    size = bin(jmask).count("1")
    if not 1 <= k <= size:
        raise ValueError(f"rank {k} outside [1, {size}]")
    return _sweep(s, jmask, k, workers or _workers())


def min_obdd_fs(tt: TruthTable, kind=Kind.OBDD, workers: int | None = None):
    """Exact minimum over all n! orders.

    Returns ``(order, min_cost, per_level_costs)``; ``per_level_costs[l-1]`` is
    the width of level ``l``.
    """
    s = initial_state(tt, kind)
    if tt.n == 0:
        return VariableOrder(()), 0, ()
    best = fs_star(s, (1 << tt.n) - 1, workers)
    return VariableOrder(best.pi_folded), best.min_cost, best.fold_increments


def work_cells(n: int) -> int:
    """Table cells touched by the full sweep, counted per subset: sum 2^(n-k) C(n,k)."""
    return sum((1 << (n - k)) * comb(n, k) for k in range(n + 1))
