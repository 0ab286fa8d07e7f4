"""Running-time exponents of the divide-and-conquer drivers and the parameter solver.

All exponents are base 2: a running time ``beta**n`` has exponent
``log2(beta)``.  ``gamma`` is the base of the sub-solver a level wraps (3 for
the plain subset DP).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from scipy.optimize import brentq

# Reported values, 6 significant digits: k -> (gamma_k, alphas)
TABLE1 = {
    1: (2.97625, (0.274862,)),
    2: (2.85690, (0.192754, 0.334571)),
    3: (2.83925, (0.184664, 0.205128, 0.342677)),
    4: (2.83744, (0.183859, 0.186017, 0.206375, 0.343503)),
    5: (2.83729, (0.183795, 0.183967, 0.186125, 0.206474, 0.343569)),
    6: (2.83728, (0.183791, 0.183802, 0.183974, 0.186131, 0.206480, 0.343573)),
}

# Composition chain with k = 6: rows of (gamma in, beta_6 out, alphas)
TABLE2 = (
    (3.0, 2.83728, (0.183792, 0.183802, 0.183974, 0.186132, 0.206480, 0.343573)),
    (2.83728, 2.79364, (0.165753, 0.165759, 0.165857, 0.167339, 0.183883, 0.312741)),
    (2.79364, 2.77981, (0.160487, 0.160491, 0.160574, 0.16189, 0.177376, 0.303603)),
    (2.77981, 2.77521, (0.158777, 0.15878, 0.158859, 0.160124, 0.175273, 0.300622)),
    (2.77521, 2.77366, (0.158203, 0.158207, 0.158284, 0.159532, 0.174568, 0.299621)),
    (2.77366, 2.77313, (0.158009, 0.158013, 0.158089, 0.159332, 0.174330, 0.299282)),
    (2.77313, 2.77295, (0.157943, 0.157947, 0.158023, 0.159264, 0.174249, 0.299166)),
    (2.77295, 2.77289, (0.15792, 0.157924, 0.158000, 0.159241, 0.174221, 0.299127)),
    (2.77289, 2.77287, (0.157913, 0.157916, 0.157992, 0.159233, 0.174212, 0.299114)),
    (2.77287, 2.77286, (0.157910, 0.157914, 0.157990, 0.159230, 0.174208, 0.299109)),
)

BRACKET = (1e-6, 1 / 3 - 1e-6)
MAX_ITER = 200


class SolverError(RuntimeError):
    pass


def binary_entropy(delta: float) -> float:
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"entropy argument {delta} outside [0, 1]")
    if delta in (0.0, 1.0):
        return 0.0
    return -delta * math.log2(delta) - (1 - delta) * math.log2(1 - delta)


def g_gamma(x: float, y: float, gamma: float = 3.0) -> float:
    """Exponent of running the sub-solver on the top ``y - x`` share below ``1 - y`` free variables."""
    return (1 - y) + (y - x) * math.log2(gamma)


def f_gamma(x: float, y: float, gamma: float = 3.0) -> float:
    """``g_gamma`` plus the square-root search cost over x-subsets of a y-set."""
    return 0.5 * y * binary_entropy(x / y) + g_gamma(x, y, gamma)


def preprocess_exponent(alpha1: float) -> float:
    """Exponent of precomputing all states of size ``alpha1 * n`` (valid for alpha1 < 1/3)."""
    return (1 - alpha1) + binary_entropy(alpha1)


def _check_alphas(alphas: Sequence[float]) -> list[float]:
    al = [float(a) for a in alphas]
    if not al:
        raise ValueError("need at least one split fraction")
    if not all(0 < a < 1 for a in al):
        raise ValueError(f"split fractions {al} must lie in (0, 1)")
    if any(b <= a for a, b in zip(al, al[1:])):
        raise ValueError(f"split fractions {al} must be strictly increasing")
    return al


def recurrence_exponent(k: int, alphas: Sequence[float], gamma: float = 3.0, preprocess: bool = True) -> float:
    """log2 of the base of the driver's running time.

    With ``preprocess`` the exponent is ``max(preprocess_exponent, l_{k+1})``
    where ``l_1 = 0`` and
    ``l_{j+1} = y H(x/y) / 2 + max(l_j, g_gamma(x, y))`` for consecutive
    fractions ``x = alpha_j``, ``y = alpha_{j+1}`` (``alpha_{k+1} = 1``).

    Without it (k = 1 only) the bottom states are rebuilt per candidate, costing
    ``(1 - alpha) + alpha log2(3)`` next to the top part.
    """
    al = _check_alphas(alphas)
    if len(al) != k:
        raise ValueError(f"expected {k} split fractions, got {len(al)}")
    if gamma <= 2:
        raise ValueError("gamma must exceed 2")
    if not preprocess:
        if k != 1:
            raise ValueError("the no-preprocess variant is defined for k = 1")
        a = al[0]
        bottom = (1 - a) + a * math.log2(3)
        top = (1 - a) * math.log2(gamma)
        return 0.5 * binary_entropy(a) + max(bottom, top)
    chain = al + [1.0]
    ell = 0.0
    for x, y in zip(chain, chain[1:]):
        ell = 0.5 * y * binary_entropy(x / y) + max(ell, g_gamma(x, y, gamma))
    return max(preprocess_exponent(al[0]), ell)


def closed_form_alpha_no_preprocess() -> float:
    """Split fraction balancing the two terms of the no-preprocess k = 1 driver."""
    l3 = math.log2(3)
    return (l3 - 1) / (2 * l3 - 1)


@dataclass(frozen=True)
class ParamSolution:
    k: int
    gamma_in: float
    alphas: tuple[float, ...]
    beta_out: float
    residuals: tuple[float, ...] = field(default=())

    @property
    def exponent(self) -> float:
        return math.log2(self.beta_out)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "gamma": self.gamma_in,
            "beta": self.beta_out,
            "alphas": list(self.alphas),
            "residuals": list(self.residuals),
        }


def _forward_chain(a1: float, a2: float, k: int, gamma: float) -> list[float]:
    # g_gamma(y, z) is affine in z with slope log2(gamma) - 1 > 0, so each
    # balance equation f(x, y) = g(y, z) gives z in closed form
    lg = math.log2(gamma)
    al = [a1, a2]
    for _ in range(k - 1):
        x, y = al[-2], al[-1]
        al.append((f_gamma(x, y, gamma) - 1 + y * lg) / (lg - 1))
    return al


def _chain_from(a1: float, k: int, gamma: float) -> list[float]:
    """``[alpha_1, ..., alpha_k, 1]`` given alpha_1, solving the middle equations."""
    if k == 1:
        return [a1, 1.0]

    def overshoot(a2):
        return _forward_chain(a1, a2, k, gamma)[k] - 1.0

    lo, hi = a1 * (1 + 1e-12) + 1e-15, 1 - 1e-12
    if overshoot(lo) * overshoot(hi) > 0:
        raise SolverError(f"no second split fraction closes the chain for alpha_1={a1}")
    a2 = brentq(overshoot, lo, hi, xtol=1e-16, rtol=1e-15, maxiter=MAX_ITER)
    al = _forward_chain(a1, a2, k, gamma)
    al[k] = 1.0
    return al


def balance_residuals(alphas: Sequence[float], gamma: float) -> tuple[float, ...]:
    """Absolute residuals of the closing equation and the k-1 chain equations."""
    al = list(alphas) + [1.0]
    k = len(alphas)
    out = [abs(preprocess_exponent(al[0]) - f_gamma(al[k - 1], 1.0, gamma))]
    for j in range(1, k):
        out.append(abs(f_gamma(al[j - 1], al[j], gamma) - g_gamma(al[j], al[j + 1], gamma)))
    return tuple(out)


def solve_system(k: int, gamma: float = 3.0) -> ParamSolution:
    """Split fractions for a k-level driver over a base-``gamma`` sub-solver.

    Root-finding on alpha_1 in (0, 1/3): for each trial alpha_1 the chain
    equations fix alpha_2..alpha_k, and the closing equation
    ``preprocess_exponent(alpha_1) = f_gamma(alpha_k, 1)`` is the residual.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if gamma <= 2:
        raise ValueError("gamma must exceed 2")

    def closing(a1):
        al = _chain_from(a1, k, gamma)
        return preprocess_exponent(a1) - f_gamma(al[k - 1], 1.0, gamma)

    lo, hi = BRACKET
    try:
        flo, fhi = closing(lo), closing(hi)
    except SolverError as exc:
        raise SolverError(f"chain fails at the bracket ends: {exc}") from exc
    if flo * fhi > 0:
        raise SolverError(f"no root of the closing equation in ({lo}, {hi})")
    a1 = brentq(closing, lo, hi, xtol=1e-16, rtol=1e-15, maxiter=MAX_ITER)
    al = _chain_from(a1, k, gamma)[:k]
    if any(b <= a for a, b in zip(al, al[1:])) or not al[-1] < 1:
        raise SolverError(f"solution {al} is not strictly increasing inside (0, 1)")
    beta = 2.0 ** recurrence_exponent(k, al, gamma)
    return ParamSolution(k, gamma, tuple(al), beta, balance_residuals(al, gamma))


def composition_chain(k: int = 6, gamma0: float = 3.0, iterations: int = 10) -> list[ParamSolution]:
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    rows = []
    gamma = gamma0
    for _ in range(iterations):
        sol = solve_system(k, gamma)
        rows.append(sol)
        gamma = sol.beta_out
    return rows


def format_table(rows: Sequence[ParamSolution], first_col: str = "k") -> str:
    """Aligned text table, 6 significant digits like the published tables."""
    kmax = max(r.k for r in rows)
    head = [first_col, "beta"] + [f"alpha_{i}" for i in range(1, kmax + 1)]
    lines = []
    for r in rows:
        lead = str(r.k) if first_col == "k" else f"{r.gamma_in:.6g}"
        cells = [lead, f"{r.beta_out:.6g}"] + [f"{a:.6f}" for a in r.alphas]
        cells += ["---"] * (kmax - r.k)
        lines.append(cells)
    widths = [max(len(row[i]) for row in [head] + lines) for i in range(len(head))]
    fmt = lambda row: "  ".join(c.rjust(w) for c, w in zip(row, widths))
    return "\n".join([fmt(head), fmt(["-" * w for w in widths])] + [fmt(r) for r in lines]) + "\n"
