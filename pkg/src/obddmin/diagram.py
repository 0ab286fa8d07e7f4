"""Reduced OBDD / ZDD construction for a fixed variable order.

Levels are numbered 1..n from the terminals upward.  ``VariableOrder.pi[l-1]``
is the variable tested at level ``l``, so ``pi[0]`` is read last and
``pi[-1]`` sits at the root.  Refs 0 and 1 are the F and T terminals;
nonterminals start at 2.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .boolfn import TruthTable, encode


class Kind(str, Enum):
    OBDD = "obdd"
    ZDD = "zdd"

    @classmethod
    def coerce(cls, value) -> "Kind":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True)
class VariableOrder:
    pi: tuple[int, ...]

    def __post_init__(self):
        pi = tuple(int(v) for v in self.pi)
        if sorted(pi) != list(range(len(pi))):
            raise ValueError(f"{pi} is not a permutation of 0..{len(pi) - 1}")
        object.__setattr__(self, "pi", pi)

    @classmethod
    def from_read_order(cls, read_first_to_last: Sequence[int]) -> "VariableOrder":
        return cls(tuple(reversed(tuple(read_first_to_last))))

    @classmethod
    def identity(cls, n: int) -> "VariableOrder":
        """x1 at the root, xn next to the terminals."""
        return cls.from_read_order(range(n))

    @property
    def n(self) -> int:
        return len(self.pi)

    @property
    def read_order(self) -> tuple[int, ...]:
        return tuple(reversed(self.pi))

    def level_of(self, var: int) -> int:
        return self.pi.index(var) + 1


@dataclass(frozen=True, eq=False)
class Diagram:
    kind: Kind
    order: VariableOrder
    level: np.ndarray  # per nonterminal, indexed by ref - 2
    lo: np.ndarray
    hi: np.ndarray
    root: int
    widths: tuple[int, ...]  # widths[l-1] = nodes at level l

    @property
    def n(self) -> int:
        return self.order.n

    @property
    def nonterminals(self) -> int:
        return int(self.level.size)

    def reachable_terminals(self) -> set[int]:
        if self.root < 2:
            return {self.root}
        found = set()
        for child in np.concatenate([self.lo, self.hi]):
            if child < 2:
                found.add(int(child))
        return found

    @property
    def total(self) -> int:
        return self.nonterminals + len(self.reachable_terminals())

    def node(self, ref: int) -> tuple[int, int, int]:
        i = ref - 2
        return int(self.level[i]), int(self.lo[i]), int(self.hi[i])

    def var_of(self, ref: int) -> int:
        return self.order.pi[int(self.level[ref - 2]) - 1]

    def summary(self) -> dict:
        return {
            "kind": self.kind.value,
            "order_read_first_to_last": [v + 1 for v in self.order.read_order],
            "widths_root_to_bottom": list(reversed(self.widths)),
            "nonterminals": self.nonterminals,
            "total": self.total,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary())


def _level_major(tt: TruthTable, order: VariableOrder) -> np.ndarray:
    """Reindex the table so bit ``l-1`` of the index holds the level-``l`` variable."""
    n = tt.n
    if n == 0:
        return tt.bits
    cube = tt.bits.reshape((2,) * n)
    # old axis a <-> variable n-1-a; new axis a <-> level n-a
    axes = [n - 1 - order.pi[n - 1 - a] for a in range(n)]
    return np.ascontiguousarray(cube.transpose(axes)).reshape(-1)


def _row_classes(rows: np.ndarray):
    """Class id per row (numbered by first appearance) and first-row index per class."""
    packed = np.packbits(rows, axis=1, bitorder="little")
    keys = np.ascontiguousarray(packed).view(np.dtype((np.void, packed.shape[1]))).ravel()
    _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    by_appearance = np.argsort(first, kind="stable")
    rank = np.empty_like(by_appearance)
    rank[by_appearance] = np.arange(by_appearance.size)
    return rank[inverse.ravel()], first[by_appearance]


def build_diagram(tt: TruthTable, order: VariableOrder, kind=Kind.OBDD) -> Diagram:
    """Reduced diagram of ``tt`` under ``order``.

    Level ``l`` is built by grouping the subfunctions over levels 1..l (one per
    assignment of the levels above) by their truth-table signature.  A class
    becomes a node unless it is redundant: equal halves for OBDD, an all-zero
    1-half for ZDD.  Nodes are numbered level by level from the bottom, in
    order of first appearance.
    """
    kind = Kind.coerce(kind)
    if order.n != tt.n:
        raise ValueError(f"order covers {order.n} variables, table has {tt.n}")
    n = tt.n
    flat = _level_major(tt, order)
    row_ref = flat.astype(np.int64)  # level 0: each row is a single terminal
    levels, los, his, widths = [], [], [], []
    next_ref = 2
    for lvl in range(1, n + 1):
        rows = flat.reshape(1 << (n - lvl), 1 << lvl)
        cls, first_rows = _row_classes(rows)
        lo = row_ref[2 * first_rows]
        hi = row_ref[2 * first_rows + 1]
        redundant = (hi == 0) if kind is Kind.ZDD else (lo == hi)
        class_ref = np.where(redundant, lo, 0)
        fresh = np.flatnonzero(~redundant)
        class_ref[fresh] = next_ref + np.arange(fresh.size)
        next_ref += fresh.size
        levels.append(np.full(fresh.size, lvl, dtype=np.int64))
        los.append(lo[fresh])
        his.append(hi[fresh])
        widths.append(int(fresh.size))
        row_ref = class_ref[cls]
    cat = (lambda parts: np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64))
    return Diagram(
        kind=kind,
        order=order,
        level=cat(levels),
        lo=cat(los),
        hi=cat(his),
        root=int(row_ref[0]),
        widths=tuple(widths),
    )


def level_width(d: Diagram, var: int) -> int:
    if not 0 <= var < d.n:
        raise ValueError(f"variable {var} outside [0, {d.n})")
    return d.widths[d.order.level_of(var) - 1]


def evaluate(d: Diagram, point) -> int:
    """Follow the diagram from the root.

    In a ZDD an edge that jumps over levels means the skipped variables must
    be 0; any skipped variable set to 1 sends the evaluation to F.
    """
    if len(point) != d.n:
        raise ValueError(f"point assigns {len(point)} variables, expected {d.n}")
    encode(point)  # validates the bits
    pi = d.order.pi
    zdd = d.kind is Kind.ZDD
    above = d.n + 1
    ref = d.root
    while True:
        here = int(d.level[ref - 2]) if ref >= 2 else 0
        if zdd and any(point[pi[l - 1]] for l in range(here + 1, above)):
            return 0
        if ref < 2:
            return ref
        above = here
        ref = int(d.hi[ref - 2] if point[pi[here - 1]] else d.lo[ref - 2])


def canonical_form(d: Diagram) -> tuple:
    """Structure with refs renumbered by a top-down, level-major traversal."""
    if d.root < 2:
        return (d.kind.value, d.order.pi, d.root, ())
    seen = {0: 0, 1: 1}
    by_level: dict[int, list[int]] = {}
    queue = deque([d.root])
    discovered = {d.root}
    while queue:
        ref = queue.popleft()
        by_level.setdefault(int(d.level[ref - 2]), []).append(ref)
        for child in (int(d.lo[ref - 2]), int(d.hi[ref - 2])):
            if child >= 2 and child not in discovered:
                discovered.add(child)
                queue.append(child)
    for lvl in sorted(by_level, reverse=True):
        for ref in by_level[lvl]:
            seen[ref] = len(seen)
    nodes = tuple(sorted(
        (seen[r], int(d.level[r - 2]), seen[int(d.lo[r - 2])], seen[int(d.hi[r - 2])])
        for r in discovered
    ))
    return (d.kind.value, d.order.pi, seen[d.root], nodes)


def reduction_violations(d: Diagram) -> list[str]:
    """Every leveling / reduction rule the diagram breaks (empty if reduced)."""
    problems = []
    pairs: dict[tuple[int, int, int], int] = {}
    for i in range(d.nonterminals):
        ref = i + 2
        lvl, lo, hi = d.node(ref)
        for child in (lo, hi):
            if child >= 2 and d.node(child)[0] >= lvl:
                problems.append(f"edge {ref}->{child} does not descend")
        if d.kind is Kind.OBDD and lo == hi:
            problems.append(f"node {ref} is redundant (lo == hi)")
        if d.kind is Kind.ZDD and hi == 0:
            problems.append(f"node {ref} has hi == F")
        if (lvl, lo, hi) in pairs:
            problems.append(f"nodes {pairs[lvl, lo, hi]} and {ref} are equivalent")
        pairs[lvl, lo, hi] = ref
    counted = np.bincount(d.level, minlength=d.n + 1)[1:] if d.nonterminals else np.zeros(d.n)
    if tuple(int(c) for c in counted) != d.widths:
        problems.append("widths disagree with node levels")
    return problems


def export_dot(d: Diagram, name: str = "bdd") -> str:
    """Graphviz text: solid arcs are 1-edges, dotted arcs 0-edges."""
    out = [f"digraph {name} {{"]
    out.append('  F [shape=box, label="F"];')
    out.append('  T [shape=box, label="T"];')

    def ident(ref: int) -> str:
        return "FT"[ref] if ref < 2 else f"n{ref}"

    for ref in range(d.nonterminals + 1, 1, -1):
        out.append(f'  n{ref} [shape=circle, label="x{d.var_of(ref) + 1}"];')
    for ref in range(d.nonterminals + 1, 1, -1):
        _, lo, hi = d.node(ref)
        out.append(f"  n{ref} -> {ident(lo)} [style=dotted];")
        out.append(f"  n{ref} -> {ident(hi)} [style=solid];")
    out.append("}")
    return "\n".join(out) + "\n"
