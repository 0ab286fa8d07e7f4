"""Truth tables, the Boolean expression parser, and restriction.

Variables are 0-based in the Python API: variable ``i`` is written ``x{i+1}``
in expressions and files.  Table index ``b`` encodes the assignment with
variable ``i`` at bit ``i`` (``x1`` is the least significant bit).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Union

import numpy as np

MAX_VARS = 24


class ParseError(ValueError):
    """Raised on malformed expressions; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


@dataclass(frozen=True, eq=False)
class TruthTable:
    n: int
    bits: np.ndarray

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VARS:
            raise ValueError(f"variable count {self.n} outside [0, {MAX_VARS}]")
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if bits.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} entries, got {bits.shape}")
        if bits.size and bits.max() > 1:
            raise ValueError("truth table entries must be 0 or 1")
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.n, self.bits.tobytes()))

    def __len__(self):
        return self.bits.size

    @classmethod
    def constant(cls, value: int, n: int) -> "TruthTable":
        return cls(n, np.full(1 << n, int(bool(value)), dtype=np.uint8))

    @classmethod
    def random(cls, n: int, seed=None) -> "TruthTable":
        rng = np.random.default_rng(seed)
        return cls(n, rng.integers(0, 2, size=1 << n, dtype=np.uint8))

    @classmethod
    def from_function(cls, n: int, func) -> "TruthTable":
        """Tabulate ``func(point)`` where ``point`` is a tuple of n bits."""
        bits = [
            int(bool(func(tuple((b >> i) & 1 for i in range(n)))))
            for b in range(1 << n)
        ]
        return cls(n, np.array(bits, dtype=np.uint8))

    def is_constant(self) -> bool:
        return bool(self.bits.min() == self.bits.max())

    # -- text format -------------------------------------------------------
    def dumps(self) -> str:
        return f"n={self.n}\n" + "".join("01"[b] for b in self.bits) + "\n"

    @classmethod
    def loads(cls, text: str) -> "TruthTable":
        lines = text.splitlines()
        if len(lines) < 2:
            raise ValueError("truth-table file needs an 'n=<int>' line and a bit line")
        m = re.fullmatch(r"\s*n\s*=\s*(\d+)\s*", lines[0])
        if m is None:
            raise ValueError(f"bad header line {lines[0]!r}")
        n = int(m.group(1))
        body = lines[1].strip()
        if any(c not in "01" for c in body):
            raise ValueError("bit line may only contain '0' and '1'")
        if len(body) != 1 << n:
            raise ValueError(f"expected {1 << n} bits for n={n}, got {len(body)}")
        return cls(n, np.frombuffer(body.encode(), dtype=np.uint8) - ord("0"))

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path: Union[str, Path]) -> "TruthTable":
        return cls.loads(Path(path).read_text())


def encode(point) -> int:
    """Table index of a full assignment given as a sequence of bits."""
    b = 0
    for i, v in enumerate(point):
        if v not in (0, 1, True, False):
            raise ValueError(f"variable {i} has non-Boolean value {v!r}")
        b |= int(v) << i
    return b


def evaluate(tt: TruthTable, point) -> int:
    if isinstance(point, (int, np.integer)):
        if not 0 <= point < len(tt):
            raise ValueError(f"index {point} outside table of size {len(tt)}")
        return int(tt.bits[point])
    if len(point) != tt.n:
        raise ValueError(f"point assigns {len(point)} variables, expected {tt.n}")
    return int(tt.bits[encode(point)])


def _check_assignment(n: int, assignment: Mapping[int, int]) -> None:
    for i, v in assignment.items():
        if not 0 <= i < n:
            raise ValueError(f"variable index {i} outside [0, {n})")
        if v not in (0, 1):
            raise ValueError(f"variable {i} assigned non-Boolean {v!r}")


def restrict(tt: TruthTable, assignment: Mapping[int, int]) -> TruthTable:
    """Fix the variables in ``assignment``; survivors keep their relative order.

    A mapping cannot carry duplicate keys; pass pairs through
    :func:`assignment_from_pairs` to have duplicates rejected.
    """
    _check_assignment(tt.n, assignment)
    if not assignment:
        return tt
    # axis order of reshape is most-significant first, so variable i is axis n-1-i
    cube = tt.bits.reshape((2,) * tt.n) if tt.n else tt.bits
    index = [slice(None)] * tt.n
    for i, v in assignment.items():
        index[tt.n - 1 - i] = v
    sub = cube[tuple(index)]
    m = tt.n - len(assignment)
    return TruthTable(m, np.ascontiguousarray(sub).reshape(1 << m))


def assignment_from_pairs(pairs) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, v in pairs:
        if i in out:
            raise ValueError(f"variable {i} assigned twice")
        out[i] = v
    return out


# -- expression parser -----------------------------------------------------
#
# expr   := xor ('|' xor)*
# xor    := conj ('^' conj)*
# conj   := unary ('&' unary)*
# unary  := '~' unary | atom
# atom   := 'x' INT | '0' | '1' | '(' expr ')'

_TOKEN = re.compile(r"\s*(?:(x\d+)|([01])|([~&^|()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n
        idx = np.arange(1 << n, dtype=np.int64)
        self.var_cols = [((idx >> v) & 1).astype(bool) for v in range(n)]
        self.size = 1 << n

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> np.ndarray:
        value = self.expr()
        tok, pos = self.peek()
        if tok != "":
            raise ParseError(f"unexpected token {tok!r}", pos)
        return value

    def _binary(self, op: str, sub, combine):
        value = sub()
        while self.peek()[0] == op:
            self.take()
            value = combine(value, sub())
        return value

    def expr(self):
        return self._binary("|", self.xor, np.logical_or)

    def xor(self):
        return self._binary("^", self.conj, np.logical_xor)

    def conj(self):
        return self._binary("&", self.unary, np.logical_and)

    def unary(self):
        if self.peek()[0] == "~":
            self.take()
            return np.logical_not(self.unary())
        return self.atom()

    def atom(self):
        tok, pos = self.take()
        if tok == "(":
            value = self.expr()
            close, cpos = self.take()
            if close != ")":
                raise ParseError("expected ')'", cpos)
            return value
        if tok in ("0", "1"):
            return np.full(self.size, tok == "1")
        if tok.startswith("x"):
            k = int(tok[1:])
            if not 1 <= k <= self.n:
                raise ParseError(f"variable {tok} outside x1..x{self.n}", pos)
            return self.var_cols[k - 1]
        if tok == "":
            raise ParseError("unexpected end of expression", pos)
        raise ParseError(f"unexpected token {tok!r}", pos)


def parse_expression(text: str, n: int) -> TruthTable:
    """Tabulate an expression over ``x1..xn``.

    Precedence from tightest: ``~``, ``&``, ``^``, ``|``; binary operators are
    left-associative.

    >>> parse_expression("~(x1^x2)", 2).bits.tolist()
    [1, 0, 0, 1]
    """
    if not 0 <= n <= MAX_VARS:
        raise ValueError(f"variable count {n} outside [0, {MAX_VARS}]")
    bits = _Parser(text, n).parse()
    return TruthTable(n, bits.astype(np.uint8))
