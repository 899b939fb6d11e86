"""Compile GL_2(Z_p) and GL_N(Z_p) elements into words over {X, P-, M_zeta, P_1+p}.

The four generators are::

    X = [[0, 1], [1, 0]]        P- = [[1, 0], [1, 1]]
    Mz = [[zeta, 0], [0, 1]]    P1p = [[1 + p, 0], [0, 1]]

with ``zeta`` the smallest primitive root mod ``p``.  Only odd primes are
supported: at p = 2 the unit 3 does not generate 1 + 2Z_2.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .padic import PadicError, make, primitive_root, unit_decompose
from .plinalg import (
    Dilation,
    ElementaryMatrix,
    PadicMatrix,
    Swap,
    Transvection,
    elementary_inverse,
    int_identity,
    is_gl,
    smith_normal_form,
)

GENERATORS = ("X", "Pminus", "Mzeta", "P1p")
_TOKENS = {"X": "X", "Pminus": "P-", "Mzeta": "Mz", "P1p": "P1p"}
_NAMES = {v: k for k, v in _TOKENS.items()}


class SynthesisError(ValueError):
    """Input outside the compiler's domain (non-invertible, p = 2, ...)."""


def _check_odd(p: int) -> None:
    if p == 2:
        raise SynthesisError("p = 2 is not supported: {X, P-, M_zeta, P_1+p} does not generate GL_2(Z_2)")


@dataclass(frozen=True)
class GateSymbol:
    name: str
    exponent: int = 1

    def __post_init__(self):
        if self.name not in GENERATORS:
            raise ValueError(f"unknown generator {self.name!r}")
        if self.exponent == 0:
            raise ValueError("exponent must be nonzero")

    def __str__(self) -> str:
        if self.name == "X":
            return "X"
        return f"{_TOKENS[self.name]}^{self.exponent}"


def _normalise(symbols: Iterable[GateSymbol]) -> tuple[GateSymbol, ...]:
    stack: list[GateSymbol] = []
    for s in symbols:
        e = s.exponent
        if stack and stack[-1].name == s.name:
            e += stack.pop().exponent
        if s.name == "X":
            e %= 2
        if e:
            stack.append(GateSymbol(s.name, e))
    return tuple(stack)


@dataclass(frozen=True)
class GateWord:
    """Ordered product of generator powers, evaluated left to right.

    Adjacent equal generators are merged on construction and ``X**2``
    cancels, so ``GateWord([X, X], p, k)`` is the empty word.
    """

    symbols: tuple[GateSymbol, ...]
    p: int
    k: int

    def __post_init__(self):
        _check_odd(self.p)
        object.__setattr__(self, "symbols", _normalise(self.symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __add__(self, other: GateWord) -> GateWord:
        if (self.p, self.k) != (other.p, other.k):
            raise PadicError("words live at different (p, k)")
        return GateWord(self.symbols + other.symbols, self.p, self.k)

    def __str__(self) -> str:
        return format_word(self)

    def matrix(self) -> PadicMatrix:
        return eval_word(self)


def word(p: int, k: int, *items) -> GateWord:
    """Shorthand: ``word(5, 2, "X", ("Pminus", 3))``."""
    syms = [GateSymbol(i) if isinstance(i, str) else GateSymbol(*i) for i in items]
    return GateWord(tuple(syms), p, k)


def generator_power(name: str, e: int, p: int, k: int) -> list[list[int]]:
    """Closed form of ``gen**e`` as integer rows mod p**k."""
    m = p ** k
    if name == "X":
        return [[0, 1], [1, 0]] if e % 2 else [[1, 0], [0, 1]]
    if name == "Pminus":
        return [[1, 0], [e % m, 1]]
    base = primitive_root(p) if name == "Mzeta" else 1 + p
    return [[pow(base, e, m), 0], [0, 1]]


def eval_word(w: GateWord) -> PadicMatrix:
    m = w.p ** w.k
    a, b, c, d = 1, 0, 0, 1
    for s in w.symbols:
        (e, f), (g, h) = generator_power(s.name, s.exponent, w.p, w.k)
        a, b, c, d = (a * e + b * g) % m, (a * f + b * h) % m, (c * e + d * g) % m, (c * f + d * h) % m
    return PadicMatrix(w.p, w.k, ((a, b), (c, d)))


def format_word(w: GateWord) -> str:
    return " ".join(str(s) for s in w.symbols)


def parse_word(text: str, p: int, k: int) -> GateWord:
    """Parse whitespace-separated tokens ``X``, ``P-^m``, ``Mz^a``, ``P1p^b``."""
    syms = []
    for tok in text.split():
        head, _, exp = tok.partition("^")
        if head not in _NAMES:
            raise ValueError(f"unknown token {tok!r}")
        try:
            e = int(exp) if exp else 1
        except ValueError:
            raise ValueError(f"bad exponent in {tok!r}") from None
        if e:
            syms.append(GateSymbol(_NAMES[head], e))
    return GateWord(tuple(syms), p, k)


def unit_word(u: int, p: int, k: int) -> list[GateSymbol]:
    """Symbols for ``diag(u, 1)`` via ``u = zeta**a (1+p)**b``."""
    dec = unit_decompose(make(p, k, u))
    out = []
    if dec.a:
        out.append(GateSymbol("Mzeta", dec.a))
    if dec.b:
        out.append(GateSymbol("P1p", dec.b))
    return out


def _upper(t: int) -> list[GateSymbol]:
    # [[1, t], [0, 1]] = X P-^t X
    return [GateSymbol("X"), GateSymbol("Pminus", t), GateSymbol("X")] if t else []


def _lower(t: int) -> list[GateSymbol]:
    return [GateSymbol("Pminus", t)] if t else []


def synth_gl2(g: PadicMatrix) -> GateWord:
    """Return a word congruent to ``g`` mod p**k.

    Peel the determinant off as ``diag(det, 1)``, swap rows with X if the
    lower-left entry is not a unit (then fold the resulting -1 back in), and
    factor the remaining determinant-one matrix with unit lower-left entry
    ``c`` as ``U(-(1-a)/c) L(c) U(-(1-d)/c)``.  Anti-diagonal inputs are
    swapped before the determinant is peeled, and an upper-unipotent
    remainder is emitted directly.
    """
    p, k = g.p, g.k
    _check_odd(p)
    if g.n != 2:
        raise SynthesisError(f"synth_gl2 needs a 2x2 matrix, got {g.n}x{g.n}")
    if not is_gl(g):
        raise SynthesisError("matrix is not in GL_2(Z_p)")
    m = p ** k
    (a, b), (c, d) = g.entries
    syms: list[GateSymbol] = []
    if a == 0 and d == 0:
        syms.append(GateSymbol("X"))
        a, b, c, d = c, d, a, b

    det = (a * d - b * c) % m
    syms += unit_word(det, p, k)
    dinv = pow(det, -1, m)
    a, b = a * dinv % m, b * dinv % m

    if c % p == 0:
        if c == 0 and a == 1 and d == 1:
            return GateWord(tuple(syms + _upper(b)), p, k)
        syms.append(GateSymbol("X"))
        a, b, c, d = c, d, a, b
        # det is now -1; rescale the top row by -1
        syms += unit_word(-1, p, k)
        a, b = -a % m, -b % m

    cinv = pow(c, -1, m)
    x = -(1 - a) * cinv % m
    y = -(1 - d) * cinv % m
    syms += _upper(x) + _lower(c) + _upper(y)
    return GateWord(tuple(syms), p, k)


# --- GL_N via two-level gates -------------------------------------------

@dataclass(frozen=True)
class TwoLevelGate:
    """A 2x2 word acting on coordinates ``(i, j)`` (1-based, ``i < j``)."""

    coords: tuple[int, int]
    word: GateWord

    def __post_init__(self):
        i, j = self.coords
        if not 1 <= i < j:
            raise ValueError(f"need 1 <= i < j, got {self.coords}")

    def embed(self, n: int) -> PadicMatrix:
        i, j = self.coords
        if j > n:
            raise ValueError(f"coords {self.coords} exceed N={n}")
        (a, b), (c, d) = eval_word(self.word).entries
        rows = int_identity(n)
        rows[i - 1][i - 1], rows[i - 1][j - 1] = a, b
        rows[j - 1][i - 1], rows[j - 1][j - 1] = c, d
        return PadicMatrix.from_rows(self.word.p, self.word.k, rows)

    def __str__(self) -> str:
        return f"{self.coords[0]},{self.coords[1]}: {self.word}"


def _elementary_gate(e: ElementaryMatrix, p: int, k: int, n: int) -> TwoLevelGate | None:
    m = p ** k
    if isinstance(e, Swap):
        i, j = sorted((e.i, e.j))
        return TwoLevelGate((i, j), word(p, k, "X"))
    if isinstance(e, Transvection):
        b = e.b % m
        if not b:
            return None
        if e.i < e.j:
            syms = _upper(b)
        else:
            syms = _lower(b)
        return TwoLevelGate((min(e.i, e.j), max(e.i, e.j)), GateWord(tuple(syms), p, k))
    u = e.u % m
    if u == 1:
        return None
    j0 = 1 if e.i != 1 else 2
    syms = unit_word(u, p, k)
    if e.i > j0:
        syms = [GateSymbol("X"), *syms, GateSymbol("X")]
    return TwoLevelGate((min(e.i, j0), max(e.i, j0)), GateWord(tuple(syms), p, k))


def synth_gln(g: PadicMatrix) -> list[TwoLevelGate]:
    """Decompose ``g`` into two-level gates whose ordered product is ``g`` mod p**k.

    From the Smith form ``L g R = I`` we get ``g = L^-1 R^-1``; each inverted
    elementary factor becomes one two-level gate (trivial ones dropped).
    """
    p, k = g.p, g.k
    _check_odd(p)
    if not is_gl(g):
        raise SynthesisError("matrix is not in GL_N(Z_p)")
    snf = smith_normal_form(g)
    factors = [elementary_inverse(e, p, k) for e in reversed(snf.L_factors)]
    factors += [elementary_inverse(e, p, k) for e in reversed(snf.R_factors)]
    gates = []
    for e in factors:
        gate = _elementary_gate(e, p, k, g.n)
        if gate is not None:
            gates.append(gate)
    return gates


def eval_two_level(gates: Sequence[TwoLevelGate], p: int, k: int, n: int) -> PadicMatrix:
    out = PadicMatrix.identity(p, k, n)
    for gate in gates:
        out = out @ gate.embed(n)
    return out


def format_two_level(gates: Sequence[TwoLevelGate]) -> str:
    return "\n".join(str(g) for g in gates)


def parse_two_level(text: str, p: int, k: int) -> list[TwoLevelGate]:
    """Parse one ``i,j: tokens`` line per gate."""
    gates = []
    for line in text.splitlines():
        if not line.strip():
            continue
        head, _, body = line.partition(":")
        i, j = (int(x) for x in head.split(","))
        gates.append(TwoLevelGate((i, j), parse_word(body, p, k)))
    return gates


# --- generation oracle ------------------------------------------------------

class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ReachabilityReport:
    p: int
    k: int
    reachable: int
    group_order: int

    @property
    def complete(self) -> bool:
        return self.reachable == self.group_order


def gl2_order(p: int, k: int) -> int:
    """``|GL_2(Z/p^k)| = p**(4(k-1)) (p^2 - 1)(p^2 - p)``."""
    return p ** (4 * (k - 1)) * (p * p - 1) * (p * p - p)


def bfs_oracle(p: int, k: int, max_elements: int = 10 ** 6) -> ReachabilityReport:
    """Breadth-first closure of the generators (and inverses) in GL_2(Z/p^k)."""
    _check_odd(p)
    m = p ** k
    gens = []
    for name in GENERATORS:
        for e in (1, -1):
            (a, b), (c, d) = generator_power(name, e, p, k)
            gens.append((a, b, c, d))
    start = (1, 0, 0, 1)
    seen = {start}
    queue = deque([start])
    while queue:
        a, b, c, d = queue.popleft()
        for e, f, g, h in gens:
            nxt = ((a * e + b * g) % m, (a * f + b * h) % m, (c * e + d * g) % m, (c * f + d * h) % m)
            if nxt not in seen:
                if len(seen) >= max_elements:
                    raise BudgetExceeded(f"more than {max_elements} elements reachable at p={p}, k={k}")
                seen.add(nxt)
                queue.append(nxt)
    return ReachabilityReport(p, k, len(seen), gl2_order(p, k))
