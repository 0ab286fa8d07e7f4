"""Randomized and exhaustive cross-checks shared by ``obddmin verify`` and the tests.

Every check returns a list of human-readable mismatch descriptions; an empty
list means it passed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boolfn import TruthTable
from .diagram import Kind, build_diagram, reduction_violations
from .dnc import ConfigError, DncConfig, Level, opt_obdd_composed, preset, split_identity_sides
from .fs_engine import fold, fs_star, initial_state, mask_vars, min_obdd_fs
from .oracle import MAX_N as ORACLE_MAX_N, brute_force_min

INVARIANCE_MAX_N = 7

# configs exercised by the equivalence checks
DNC_CONFIGS = {
    "k1": (Level(1, (0.274863,)),),
    "k2": preset("table1-k2"),
    "k6": preset("table1-k6"),
    "chain2": preset("table2-chain2"),
}


@dataclass
class Report:
    checks: dict = field(default_factory=dict)  # name -> [passed, failed, skipped]
    failures: list = field(default_factory=list)

    def record(self, name: str, problems: list[str] | None) -> None:
        row = self.checks.setdefault(name, [0, 0, 0])
        if problems is None:
            row[2] += 1
        elif problems:
            row[1] += 1
            self.failures.extend(f"{name}: {p}" for p in problems)
        else:
            row[0] += 1

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": {k: dict(zip(("passed", "failed", "skipped"), v)) for k, v in self.checks.items()},
            "failures": self.failures,
        }


def fs_matches_oracle(tt: TruthTable, kind: Kind) -> list[str]:
    report, _ = brute_force_min(tt, kind)
    order, cost, incs = min_obdd_fs(tt, kind)
    out = []
    if cost != report.nonterminals:
        out.append(f"FS {cost} != brute force {report.nonterminals}")
    d = build_diagram(tt, order, kind)
    if d.nonterminals != cost or tuple(d.widths) != tuple(incs):
        out.append(f"diagram for the FS order has {d.nonterminals} nodes, FS claims {cost}")
    out.extend(reduction_violations(d))
    return out


def dnc_matches_fs(tt: TruthTable, kind: Kind, levels, fs_cost: int | None = None) -> list[str] | None:
    """None when the config cannot be split at this n."""
    if fs_cost is None:
        fs_cost = min_obdd_fs(tt, kind)[1]
    out = []
    try:
        classical, _ = opt_obdd_composed(tt, DncConfig(levels, kind=kind))
        quantum, qstats = opt_obdd_composed(tt, DncConfig(levels, kind=kind, mode="qsim"))
    except ConfigError:
        return None
    if classical.min_cost != fs_cost:
        out.append(f"dnc {classical.min_cost} != FS {fs_cost}")
    if quantum.pi_folded != classical.pi_folded:
        out.append("qsim and classical runs picked different orders")
    if any(r["quantum_query_bound"] is None for r in qstats.records):
        out.append("qsim run is missing query bounds")
    return out


def fold_invariance(tt: TruthTable, kind: Kind) -> list[str]:
    """The increment of folding i depends only on the folded set, not on its order.

    Walks every fold sequence (all partial permutations) depth-first.
    """
    if tt.n > INVARIANCE_MAX_N:
        raise ValueError(f"exhaustive invariance check is limited to n <= {INVARIANCE_MAX_N}")
    seen: dict[tuple[int, int], int] = {}
    out = []

    def walk(s):
        for v in range(tt.n):
            if s.folded >> v & 1:
                continue
            child = fold(s, v)
            key = (s.folded, v)
            inc = child.fold_increments[-1]
            if seen.setdefault(key, inc) != inc:
                out.append(f"variable {v} over {mask_vars(s.folded)}: {inc} vs {seen[key]}")
            walk(child)

    walk(initial_state(tt, kind))
    return out


def dp_recurrence(tt: TruthTable, kind: Kind, rng: np.random.Generator, samples: int = 4) -> list[str]:
    """MinCost_I = min over k in I of MinCost_{I-k} plus the increment of folding k there."""
    s0 = initial_state(tt, kind)
    out = []
    for _ in range(samples):
        size = int(rng.integers(1, tt.n + 1))
        I = sum(1 << int(v) for v in rng.choice(tt.n, size, replace=False))
        direct = fs_star(s0, I).min_cost
        via = None
        for k in mask_vars(I):
            rest = I & ~(1 << k)
            below = fs_star(s0, rest) if rest else s0
            cost = below.min_cost + fold(below, k).fold_increments[-1]
            via = cost if via is None else min(via, cost)
        if direct != via:
            out.append(f"I={mask_vars(I)}: {direct} != {via}")
    return out


def split_identity(tt: TruthTable, kind: Kind, rng: np.random.Generator, with_prefix: bool) -> list[str]:
    """Both sides of the split identity agree for every split size."""
    s = initial_state(tt, kind)
    if with_prefix and tt.n >= 3:
        size = int(rng.integers(1, tt.n - 1))
        prefix = sum(1 << int(v) for v in rng.choice(tt.n, size, replace=False))
        s = fs_star(s, prefix)
    J = ((1 << tt.n) - 1) & ~s.folded
    out = []
    for k in range(1, bin(J).count("1")):
        lhs, rhs = split_identity_sides(s, J, k)
        if lhs != rhs:
            out.append(f"k={k}: {lhs} != {rhs}")
    return out


def run_verify(n: int, trials: int, seed: int, kind=Kind.OBDD) -> Report:
    kind = Kind.coerce(kind)
    rng = np.random.default_rng(seed)
    report = Report()
    for _ in range(trials):
        tt = TruthTable.random(n, rng)
        fs_cost = min_obdd_fs(tt, kind)[1]
        report.record("fs_vs_oracle", fs_matches_oracle(tt, kind) if n <= ORACLE_MAX_N else None)
        for name, levels in DNC_CONFIGS.items():
            report.record(f"dnc_{name}_vs_fs", dnc_matches_fs(tt, kind, levels, fs_cost))
        report.record("fold_invariance", fold_invariance(tt, kind) if n <= INVARIANCE_MAX_N else None)
        report.record("dp_recurrence", dp_recurrence(tt, kind, rng))
        report.record("split_identity", split_identity(tt, kind, rng, with_prefix=False))
        report.record("split_identity_prefix", split_identity(tt, kind, rng, with_prefix=True))
    return report


__all__ = [
    "DNC_CONFIGS",
    "Report",
    "dnc_matches_fs",
    "dp_recurrence",
    "fold_invariance",
    "fs_matches_oracle",
    "run_verify",
    "split_identity",
]
