"""``obddmin`` command line.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 solver divergence.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from . import kernels
from .boolfn import MAX_VARS, ParseError, TruthTable, parse_expression
from .diagram import Kind, VariableOrder, build_diagram, export_dot
from .dnc import ConfigError, DncConfig, Level, opt_obdd_composed, preset
from .fs_engine import min_obdd_fs, work_cells
from .oracle import MAX_N as BRUTE_MAX_N, brute_force_min
from .params import SolverError, composition_chain, format_table, solve_system

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_SOLVER = 0, 1, 2, 3
FS_MAX_N = 20
DNC_MAX_N = 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunReport:
    method: str
    kind: str
    order_read_first_to_last: list[int]  # 1-based variable names, root first
    order_pi_bottom_up: list[int]  # pi[1] is the bottom level, read last
    min_cost: int
    total_size: int
    widths_root_to_bottom: list[int]
    stats: dict
    wall_time_ms: float
    backend: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def _load_input(args) -> TruthTable:
    if args.input and args.expr:
        raise UsageError("give either --input or --expr, not both")
    if args.input:
        try:
            return TruthTable.load(args.input)
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from exc
    if args.expr is None:
        raise UsageError("one of --input or --expr is required")
    if args.n is None:
        raise UsageError("--expr needs --n")
    return parse_expression(args.expr, args.n)


def _dnc_levels(args) -> tuple[Level, ...]:
    if args.preset:
        if args.alpha or args.k:
            raise UsageError("--preset excludes --k/--alpha")
        return preset(args.preset)
    if not args.alpha:
        raise UsageError("dnc needs --preset or --alpha (with optional --k)")
    try:
        alphas = tuple(float(a) for a in args.alpha.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --alpha vector {args.alpha!r}") from exc
    if args.k is not None and args.k != len(alphas):
        raise UsageError(f"--k {args.k} but {len(alphas)} split fractions given")
    return (Level(len(alphas), alphas),)


def cmd_minimize(args) -> RunReport:
    tt = _load_input(args)
    kind = Kind.coerce(args.kind)
    caps = {"fs": FS_MAX_N, "dnc": DNC_MAX_N, "brute": BRUTE_MAX_N}
    if tt.n > caps[args.method]:
        raise UsageError(f"method {args.method} is limited to n <= {caps[args.method]}")
    t0 = time.perf_counter()
    if args.method == "fs":
        order, cost, _ = min_obdd_fs(tt, kind)
        stats = {"subset_cells": work_cells(tt.n)}
    elif args.method == "brute":
        rep, count = brute_force_min(tt, kind)
        order, cost = rep.order, rep.nonterminals
        stats = {"orders_examined": math.factorial(tt.n), "optimal_orders": count}
    else:
        cfg = DncConfig(_dnc_levels(args), kind=kind, mode=args.mode)
        state, run = opt_obdd_composed(tt, cfg)
        order = VariableOrder(state.pi_folded) if tt.n else VariableOrder(())
        cost = state.min_cost
        stats = {"mode": cfg.mode.value, **run.to_dict()}
    elapsed = (time.perf_counter() - t0) * 1000
    d = build_diagram(tt, order, kind)
    if d.nonterminals != cost:  # the rebuilt diagram must realize the claimed optimum
        raise RuntimeError(f"rebuilt diagram has {d.nonterminals} nodes, expected {cost}")
    if args.dot:
        Path(args.dot).write_text(export_dot(d))
    return RunReport(
        method=args.method,
        kind=kind.value,
        order_read_first_to_last=[v + 1 for v in order.read_order],
        order_pi_bottom_up=[v + 1 for v in order.pi],
        min_cost=cost,
        total_size=d.total,
        widths_root_to_bottom=list(reversed(d.widths)),
        stats=stats,
        wall_time_ms=round(elapsed, 3),
        backend=kernels.BACKEND,
    )


def cmd_parse(args) -> str:
    tt = parse_expression(args.expr, args.n)
    text = tt.dumps()
    if args.out:
        Path(args.out).write_text(text)
    return text


def cmd_solve_params(args) -> int:
    if args.chain is not None:
        rows = composition_chain(args.k or 6, args.gamma, args.chain)
        text = format_table(rows, first_col="gamma")
    elif args.table:
        rows = [solve_system(k, args.gamma) for k in range(1, (args.k or 6) + 1)]
        text = format_table(rows)
    else:
        rows = [solve_system(args.k or 1, args.gamma)]
        text = format_table(rows)
    if args.format in ("text", "both"):
        print(text, end="")
    if args.format in ("json", "both"):
        print(json.dumps([r.to_dict() for r in rows], indent=2))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .checks import run_verify

    if not 1 <= args.n <= MAX_VARS:
        raise UsageError(f"--n must lie in [1, {MAX_VARS}]")
    report = run_verify(args.n, args.trials, args.seed, args.kind)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_bench(args) -> int:
    from .bench import run

    print(json.dumps(run(args.fold_log_size, args.fs_n, args.repeat), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="obddmin", description="Exact OBDD/ZDD variable-order minimization.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("minimize", help="find an optimal variable order")
    m.add_argument("--input", help="truth-table file (n=<int> then the bit string)")
    m.add_argument("--expr", help="expression over x1..xn with ~ & ^ | and parentheses")
    m.add_argument("--n", type=int)
    m.add_argument("--method", choices=("fs", "dnc", "brute"), default="fs")
    m.add_argument("--kind", choices=("obdd", "zdd"), default="obdd")
    m.add_argument("--k", type=int, help="number of split fractions (dnc)")
    m.add_argument("--alpha", help="comma-separated split fractions (dnc)")
    m.add_argument("--preset", help="table1-k<K> or table2-chain<L> (dnc)")
    m.add_argument("--mode", choices=("classical", "qsim"), default="classical")
    m.add_argument("--dot", help="write the optimal diagram in DOT format")

    p = sub.add_parser("parse", help="tabulate an expression into a truth-table file")
    p.add_argument("--expr", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", help="output path (stdout when omitted)")

    v = sub.add_parser("verify", help="randomized cross-checks of all engines")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--kind", choices=("obdd", "zdd"), default="obdd")

    s = sub.add_parser("solve-params", help="solve for split fractions and the runtime base")
    s.add_argument("--k", type=int, help="split count (default 1, or 6 with --chain/--table)")
    s.add_argument("--gamma", type=float, default=3.0, help="base of the wrapped sub-solver")
    s.add_argument("--chain", type=int, metavar="ITERS", help="iterate the composition chain")
    s.add_argument("--table", action="store_true", help="all rows k = 1..K")
    s.add_argument("--format", choices=("text", "json", "both"), default="both")

    b = sub.add_parser("bench", help="compiled core against the numpy fallback")
    b.add_argument("--fold-log-size", type=int, default=20)
    b.add_argument("--fs-n", type=int, default=12)
    b.add_argument("--repeat", type=int, default=3)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "minimize":
            print(cmd_minimize(args).to_json())
            return EXIT_OK
        if args.command == "parse":
            text = cmd_parse(args)
            if not args.out:
                print(text, end="")
            return EXIT_OK
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_solve_params(args)
    except SolverError as exc:
        print(f"obddmin: solver diverged: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ParseError as exc:
        print(f"obddmin: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ConfigError, ValueError) as exc:
        print(f"obddmin: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
