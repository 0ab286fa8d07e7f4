"""Brute-force minimization over every variable order.

Each order is reduced on its own, bottom-up, with no sharing between orders,
so the result does not rely on the subset DP or its invariance property.
Orders are processed in batches: the truth table is permuted so that the
order's bottom variable sits at bit 0, then levels are merged pairwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .boolfn import TruthTable
from .diagram import Kind, VariableOrder

MAX_N = 9
ENUM_MAX_N = 7
_BATCH_CELLS = 1 << 22
_ID_BITS = 11  # local node ids stay below 2**(n+1) + 2 <= 2**11 for n <= 9


@dataclass(frozen=True)
class OrderingReport:
    order: VariableOrder
    nonterminals: int
    widths: tuple[int, ...]  # bottom level first

    def to_dict(self) -> dict:
        return {
            "order_read_first_to_last": [v + 1 for v in self.order.read_order],
            "nonterminals": self.nonterminals,
            "widths_root_to_bottom": list(reversed(self.widths)),
        }


def _batch_widths(bits: np.ndarray, perms: np.ndarray, zdd: bool) -> np.ndarray:
    """Level widths (bottom first) for each row of ``perms`` (pi, bottom first)."""
    P, n = perms.shape
    idx = np.arange(1 << n, dtype=np.int64)
    orig = np.zeros((P, 1 << n), dtype=np.int64)
    for j in range(n):
        orig |= ((idx >> j) & 1)[None, :] << perms[:, j : j + 1]
    ids = bits.astype(np.int64)[orig]
    next_id = np.full(P, 2, dtype=np.int64)
    widths = np.zeros((P, n), dtype=np.int64)
    rows = np.arange(P, dtype=np.int64)[:, None]
    for level in range(n):
        u0 = ids[:, 0::2]
        u1 = ids[:, 1::2]
        keep = (u1 != 0) if zdd else (u0 != u1)
        out = u0.copy()
        if keep.any():
            keys = ((np.broadcast_to(rows, u0.shape)[keep] << _ID_BITS | u0[keep]) << _ID_BITS) | u1[keep]
            uniq, inverse = np.unique(keys, return_inverse=True)
            owner = uniq >> (2 * _ID_BITS)
            starts = np.searchsorted(owner, owner, side="left")
            local = next_id[owner] + (np.arange(uniq.size) - starts)
            out[keep] = local[inverse.reshape(-1)]
            counts = np.bincount(owner, minlength=P)
            widths[:, level] = counts
            next_id += counts
        ids = out
    return widths


def _all_widths(tt: TruthTable, kind: Kind):
    n = tt.n
    perms = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)
    zdd = kind is Kind.ZDD
    step = max(1, _BATCH_CELLS >> n)
    chunks = [_batch_widths(tt.bits, perms[i : i + step], zdd) for i in range(0, len(perms), step)]
    return perms, np.concatenate(chunks) if chunks else np.zeros((1, 0), dtype=np.int64)


def brute_force_min(tt: TruthTable, kind=Kind.OBDD) -> tuple[OrderingReport, int]:
    """Lexicographically first optimal pi, and how many orders reach the optimum."""
    kind = Kind.coerce(kind)
    if tt.n > MAX_N:
        raise ValueError(f"brute force is limited to n <= {MAX_N}")
    if tt.n == 0:
        return OrderingReport(VariableOrder(()), 0, ()), 1
    perms, widths = _all_widths(tt, kind)
    totals = widths.sum(axis=1)
    best = int(totals.min())
    i = int(np.argmax(totals == best))
    report = OrderingReport(
        VariableOrder(tuple(int(v) for v in perms[i])),
        best,
        tuple(int(w) for w in widths[i]),
    )
    return report, int((totals == best).sum())


def enumerate_costs(tt: TruthTable, kind=Kind.OBDD) -> dict[VariableOrder, int]:
    """Nonterminal count for every order."""
    kind = Kind.coerce(kind)
    if tt.n > ENUM_MAX_N:
        raise ValueError(f"enumeration is limited to n <= {ENUM_MAX_N}")
    if tt.n == 0:
        return {VariableOrder(()): 0}
    perms, widths = _all_widths(tt, kind)
    totals = widths.sum(axis=1)
    return {VariableOrder(tuple(int(v) for v in p)): int(c) for p, c in zip(perms, totals)}
