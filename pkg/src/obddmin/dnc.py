"""Divide-and-conquer minimization drivers.

``compose_step`` solves one block J above a folded prefix: it precomputes the
optimal states for every smallest-split subset of J, then picks nested splits
``K_1 < K_2 < ... < J`` stage by stage with :func:`qsearch.find_min`, handing
each top part to a sub-solver.  The sub-solver is :func:`fs_star` or another
``compose_step``, which gives the composition chain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Optional, Sequence

from .boolfn import TruthTable
from .diagram import Kind
from .fs_engine import (
    FsState,
    fs_star,
    fs_star_truncated,
    initial_state,
    mask_vars,
    to_mask,
)
from .params import TABLE1, TABLE2
from .qsearch import Mode, find_min, unrank_subset

SubSolver = Callable[[FsState, int], FsState]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Level:
    k: int
    alphas: tuple[float, ...]

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if self.k < 1 or len(alphas) != self.k:
            raise ConfigError(f"expected {self.k} split fractions, got {len(alphas)}")
        if not all(0 < a < 1 for a in alphas):
            raise ConfigError(f"split fractions {alphas} must lie in (0, 1)")
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise ConfigError(f"split fractions {alphas} must be strictly increasing")


@dataclass(frozen=True)
class DncConfig:
    levels: tuple[Level, ...]  # innermost first; levels[-1] drives the outer search
    epsilon: Optional[float] = None  # None means 2**-n
    mode: Mode = Mode.CLASSICAL
    kind: Kind = Kind.OBDD
    memo: bool = True

    def __post_init__(self):
        levels = tuple(
            lv if isinstance(lv, Level) else Level(len(lv), tuple(lv)) for lv in self.levels
        )
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "mode", Mode.coerce(self.mode))
        object.__setattr__(self, "kind", Kind.coerce(self.kind))
        if not levels:
            raise ConfigError("at least one level is required")
        if levels[-1].alphas[0] >= 1 / 3:
            raise ConfigError("the outermost first split fraction must be below 1/3")

    @classmethod
    def single(cls, alphas: Sequence[float], **kw) -> "DncConfig":
        return cls(levels=(Level(len(alphas), tuple(alphas)),), **kw)


def preset(name: str) -> tuple[Level, ...]:
    """``table1-k<K>`` (K = 1..6) or ``table2-chain<L>`` (L = 1..10)."""
    if name.startswith("table1-k"):
        k = int(name[len("table1-k"):])
        if k not in TABLE1:
            raise ConfigError(f"no Table 1 row for k={k}")
        return (Level(k, TABLE1[k][1]),)
    if name.startswith("table2-chain"):
        depth = int(name[len("table2-chain"):])
        if not 1 <= depth <= len(TABLE2):
            raise ConfigError(f"chain depth must be 1..{len(TABLE2)}")
        return tuple(Level(6, row[2]) for row in TABLE2[:depth])
    raise ConfigError(f"unknown preset {name!r}")


def split_sizes(alphas: Sequence[float], n_sub: int, strict: bool = True) -> list[int]:
    """Integer split sizes ``round(alpha * n_sub)``, repaired to be strictly increasing.

    Collisions are pushed upward.  If that overruns ``n_sub - 1``, a strict
    call raises; a lenient (nested) call deduplicates instead, possibly down to
    no split at all.
    """
    raw = [math.floor(a * n_sub + 0.5) for a in alphas]
    sizes, prev = [], 0
    for r in raw:
        prev = max(r, prev + 1)
        sizes.append(prev)
    if sizes[-1] <= n_sub - 1:
        return sizes
    if strict:
        raise ConfigError(
            f"{len(alphas)} strictly increasing splits do not fit in a block of {n_sub}"
        )
    return sorted({min(max(r, 1), n_sub - 1) for r in raw} - {0})


@dataclass
class RunStats:
    """Accounting for one driver run.

    ``records`` holds one entry per executed find_min.  Memoization changes
    how many are executed (and so ``classical_evals``), never the result.
    The ``unmemoized_*`` counters give what a cache-free run would execute:
    each memo hit is charged the full cost of the subtree it skipped.
    """

    records: list = field(default_factory=list)
    subsolver_calls: int = 0
    memo_hits: int = 0
    unmemoized_find_min_calls: int = 0
    unmemoized_evals: int = 0
    unmemoized_query_bound: int = 0

    def totals(self) -> dict:
        bounds = [r["quantum_query_bound"] for r in self.records]
        quantum = None not in bounds
        return {
            "find_min_calls": len(self.records),
            "classical_evals": sum(r["classical_evals"] for r in self.records),
            "subsolver_calls": self.subsolver_calls,
            "memo_hits": self.memo_hits,
            "quantum_query_bound": sum(bounds) if quantum else None,
            "unmemoized_find_min_calls": self.unmemoized_find_min_calls,
            "unmemoized_classical_evals": self.unmemoized_evals,
            "unmemoized_quantum_query_bound": self.unmemoized_query_bound if quantum else None,
        }

    def _counters(self) -> tuple[int, int, int]:
        return (self.unmemoized_find_min_calls, self.unmemoized_evals, self.unmemoized_query_bound)

    def _charge(self, cost: tuple[int, int, int]) -> None:
        self.unmemoized_find_min_calls += cost[0]
        self.unmemoized_evals += cost[1]
        self.unmemoized_query_bound += cost[2]

    def to_dict(self) -> dict:
        return {"find_min": self.records, "totals": self.totals()}


@dataclass
class _Run:
    mode: Mode
    epsilon: float
    memo: bool
    stats: RunStats


def compose_step(
    state: FsState,
    J,
    level: Level,
    sub: SubSolver,
    run: _Run,
    depth: int = 1,
    strict: bool = False,
) -> FsState:
    """Optimal state for ``<state.prefix, J>`` via nested subset splits of J."""
    jmask = to_mask(J)
    if jmask == 0:
        raise ValueError("variable set J is empty")
    if jmask & state.folded:
        raise ValueError("J intersects the already-folded variables")
    n_sub = bin(jmask).count("1")
    sizes = split_sizes(level.alphas, n_sub, strict)
    if not sizes:
        run.stats.subsolver_calls += 1
        return sub(state, jmask).relabel(state.prefix + (jmask,))
    sizes.append(n_sub)
    base = fs_star_truncated(state, jmask, sizes[0])
    cache: dict[int, FsState] = {}
    skipped: dict[int, tuple[int, int, int]] = {}

    def solve(L: int, t: int) -> FsState:
        # L has sizes[t-1] variables; stage 1 is the precomputed base
        if t == 1:
            return base[L]
        if run.memo and L in cache:
            run.stats.memo_hits += 1
            run.stats._charge(skipped[L])
            return cache[L]
        before = run.stats._counters()
        ground = mask_vars(L)
        k = sizes[t - 2]
        best: list = [None]

        def key(i: int) -> int:
            K = to_mask(unrank_subset(i, ground, k))
            lower = solve(K, t - 1)
            run.stats.subsolver_calls += 1
            candidate = sub(lower, L & ~K)
            if best[0] is None or candidate.min_cost < best[0].min_cost:
                best[0] = candidate
            return candidate.min_cost

        N = math.comb(len(ground), k)
        argmin, value, qs = find_min(N, key, run.mode, run.epsilon)
        run.stats.records.append({
            "depth": depth,
            "stage": t,
            "block_size": n_sub,
            "N": qs.N,
            "argmin": argmin,
            "classical_evals": qs.classical_evals,
            "quantum_query_bound": qs.quantum_query_bound,
            "epsilon": qs.epsilon,
        })
        run.stats._charge((1, qs.classical_evals, qs.quantum_query_bound or 0))
        assert best[0].min_cost == value
        out = best[0].relabel(state.prefix + (L,))
        if run.memo:
            cache[L] = out
            skipped[L] = tuple(a - b for a, b in zip(run.stats._counters(), before))
        return out

    return solve(jmask, len(sizes)).relabel(state.prefix + (jmask,))


def _fs_star_sub(s: FsState, M: int) -> FsState:
    return fs_star(s, M, workers=1)


def _run_for(tt: TruthTable, cfg: DncConfig) -> _Run:
    eps = cfg.epsilon if cfg.epsilon is not None else 2.0 ** -max(tt.n, 1)
    return _Run(mode=cfg.mode, epsilon=eps, memo=cfg.memo, stats=RunStats())


def build_chain(cfg: DncConfig, run: _Run) -> SubSolver:
    """Gamma_1 wraps FS*, Gamma_{i+1} wraps Gamma_i; returns the outermost."""
    sub: SubSolver = _fs_star_sub
    for depth, level in enumerate(cfg.levels, start=1):
        sub = partial(compose_step, level=level, sub=sub, run=run, depth=depth)
    return sub


def opt_obdd_composed(tt: TruthTable, cfg: DncConfig):
    """Returns ``(state for [n], RunStats)``; the state's min_cost is the exact optimum."""
    run = _run_for(tt, cfg)
    s = initial_state(tt, cfg.kind)
    if tt.n == 0:
        return s, run.stats
    outer = build_chain(cfg, run)
    result = outer(s, (1 << tt.n) - 1, strict=True)
    return result, run.stats


def opt_obdd(tt: TruthTable, cfg: DncConfig):
    if len(cfg.levels) != 1:
        raise ConfigError("opt_obdd takes exactly one level; use opt_obdd_composed")
    return opt_obdd_composed(tt, cfg)


def split_identity_sides(state: FsState, J, k: int) -> tuple[int, int]:
    """Both sides of the split identity for block J at split size k.

    Left: optimal cost of J's levels above ``state``.  Right: minimum over
    k-subsets K of (cost of K's levels in the optimum for K) plus (cost of
    J minus K's levels in the optimum for K then the rest).
    """
    jmask = to_mask(J)
    lhs = fs_star(state, jmask).cost_of(jmask)
    rhs = None
    for K, sK in fs_star_truncated(state, jmask, k).items():
        rest = jmask & ~K
        bottom = sK.cost_of(K)
        top = fs_star(sK, rest).cost_of(rest) if rest else 0
        total = bottom + top
        rhs = total if rhs is None else min(rhs, total)
    return lhs, rhs
