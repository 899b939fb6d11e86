"""Words for GL_N(Z) over the two-generator sets of Hua and Reiner.

``X`` is the cyclic permutation matrix (``X e_j = e_{j+1 mod N}``) and
``P = I + E_12``.  GL_N(Z) is generated by ``{X, P}`` for even N and by
``{-X, P}`` for odd N; for N = 2 the decomposition instead uses the
three-element set ``{Z, X, P}`` with ``Z = diag(1, -1)``.

Indices inside this module are 0-based.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .plinalg import int_det, int_identity, int_matmul

IntMatrix = list[list[int]]

SYMBOLS = ("Xcyc", "Pshift", "NegXcyc", "Zsign")
_TOKENS = {"Xcyc": "X", "Pshift": "P", "NegXcyc": "NX", "Zsign": "Z"}
_NAMES = {v: k for k, v in _TOKENS.items()}


class DecompositionError(ValueError):
    pass


def hr_generators(n: int) -> tuple[IntMatrix, IntMatrix]:
    """The cyclic shift ``X`` and the transvection ``P = I + E_12``."""
    if n < 2:
        raise ValueError(f"need N >= 2, got {n}")
    x = [[int(j == (i - 1) % n) for j in range(n)] for i in range(n)]
    pm = int_identity(n)
    pm[0][1] = 1
    return x, pm


def _reduce_exp(name: str, e: int, n: int) -> int:
    if name == "Xcyc":
        return e % n
    if name == "NegXcyc":
        return e % (2 * n if n % 2 else n)
    if name == "Zsign":
        return e % 2
    return e


@dataclass(frozen=True)
class HRWord:
    """Ordered product of generator powers for GL_N(Z).

    Exponents of the finite-order symbols are reduced (``X**N = I``,
    ``(-X)**(2N) = I`` for odd N, ``Z**2 = I``) and adjacent equal symbols
    merged on construction.
    """

    symbols: tuple[tuple[str, int], ...]
    n: int

    def __post_init__(self):
        stack: list[tuple[str, int]] = []
        for name, e in self.symbols:
            if name not in SYMBOLS:
                raise ValueError(f"unknown symbol {name!r}")
            if name == "NegXcyc" and self.n % 2 == 0:
                raise ValueError("-X is only used for odd N")
            if name == "Zsign" and self.n != 2:
                raise ValueError("Z is only used for N = 2")
            if stack and stack[-1][0] == name:
                e += stack.pop()[1]
            e = _reduce_exp(name, e, self.n)
            if e:
                stack.append((name, e))
        object.__setattr__(self, "symbols", tuple(stack))

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return format_hr(self)

    def alphabet(self) -> set[str]:
        return {name for name, _ in self.symbols}


def symbol_power(name: str, e: int, n: int) -> IntMatrix:
    x, _ = hr_generators(n)
    if name == "Pshift":
        out = int_identity(n)
        out[0][1] = e
        return out
    if name == "Zsign":
        return [[1, 0], [0, -1 if e % 2 else 1]]
    shift = e % n
    out = [[int(i == (j + shift) % n) for j in range(n)] for i in range(n)]
    if name == "NegXcyc" and e % 2:
        out = [[-v for v in row] for row in out]
    return out


def eval_hr(w: HRWord) -> IntMatrix:
    out = int_identity(w.n)
    for name, e in w.symbols:
        out = int_matmul(out, symbol_power(name, e, w.n))
    return out


def format_hr(w: HRWord) -> str:
    return " ".join(_TOKENS[name] if name == "Zsign" else f"{_TOKENS[name]}^{e}" for name, e in w.symbols)


def parse_hr(text: str, n: int) -> HRWord:
    """Parse tokens ``X^m``, ``P^b``, ``NX^m`` and (N = 2 only) ``Z``."""
    syms = []
    for tok in text.split():
        head, _, exp = tok.partition("^")
        if head not in _NAMES:
            raise ValueError(f"unknown token {tok!r}")
        try:
            syms.append((_NAMES[head], int(exp) if exp else 1))
        except ValueError:
            raise ValueError(f"bad exponent in {tok!r}") from None
    return HRWord(tuple(syms), n)


# --- transvections as words -------------------------------------------------

def _shift_symbol(n: int) -> str:
    return "NegXcyc" if n % 2 else "Xcyc"


def transvection_word(i: int, j: int, b: int, n: int) -> list[tuple[str, int]]:
    """Symbols for ``T_ij(b) = I + b E_ij``.

    Cyclically adjacent pairs are conjugates of ``P``:
    ``X^m P^b X^-m = T_{m, m+1}(b)``; the sign of ``-X`` cancels inside the
    conjugation.  Other pairs use ``T_ij(b) = [T_ik(1), T_kj(b)]`` with
    ``k = i + 1``.
    """
    if b == 0:
        return []
    s = _shift_symbol(n)
    if j == (i + 1) % n:
        if i == 0:
            return [("Pshift", b)]
        return [(s, i), ("Pshift", b), (s, -i)]
    k = (i + 1) % n
    a = transvection_word(i, k, 1, n)
    c = transvection_word(k, j, b, n)
    a_inv = transvection_word(i, k, -1, n)
    c_inv = transvection_word(k, j, -b, n)
    return a + c + a_inv + c_inv


def _n2_transvection(i: int, j: int, b: int) -> list[tuple[str, int]]:
    if b == 0:
        return []
    if (i, j) == (0, 1):
        return [("Pshift", b)]
    return [("Xcyc", 1), ("Pshift", b), ("Xcyc", 1)]


# --- row reduction ------------------------------------------------------------

def _reduce_to_identity(g: IntMatrix) -> list[tuple[int, int, int]]:
    """Transvections ``(i, j, b)`` whose left action takes ``g`` (det 1) to I.

    Euclid on each column with the smallest-|entry| pivot (ties to the
    lower row index), then clear above the diagonal, then cancel pairs of
    -1 on the diagonal with ``(T_ij(1) T_ji(-1) T_ij(1))**2 = -I``.
    """
    n = len(g)
    a = [list(r) for r in g]
    ops: list[tuple[int, int, int]] = []

    def add_row(i: int, j: int, b: int) -> None:
        # row_i += b * row_j
        if b:
            a[i] = [x + b * y for x, y in zip(a[i], a[j])]
            ops.append((i, j, b))

    for c in range(n):
        while True:
            nz = [r for r in range(c, n) if a[r][c]]
            if not nz:
                raise DecompositionError("matrix is singular")
            piv = min(nz, key=lambda r: (abs(a[r][c]), r))
            others = [r for r in nz if r != piv]
            if not others:
                break
            for r in others:
                q = round_div(a[r][c], a[piv][c])
                add_row(r, piv, -q)
        if piv != c:
            add_row(c, piv, 1)
            add_row(piv, c, -1)
        if abs(a[c][c]) != 1:
            raise DecompositionError("matrix is not unimodular")

    for c in range(n - 1, -1, -1):
        for r in range(c):
            add_row(r, c, -a[r][c] * a[c][c])

    negs = [i for i in range(n) if a[i][i] == -1]
    if len(negs) % 2:
        raise DecompositionError("determinant is not 1")
    for i, j in zip(negs[::2], negs[1::2]):
        for _ in range(2):
            add_row(i, j, 1)
            add_row(j, i, -1)
            add_row(i, j, 1)
    assert a == int_identity(n)
    return ops


def round_div(x: int, y: int) -> int:
    """Nearest-integer quotient with exact integer arithmetic."""
    q, r = divmod(x, y)
    if 2 * abs(r) > abs(y):
        q += 1 if (r > 0) == (y > 0) else -1
    return q


def _as_generator_power(g: IntMatrix, n: int) -> list[tuple[str, int]] | None:
    if g == int_identity(n):
        return []
    if g[0][1] != 0 and g == symbol_power("Pshift", g[0][1], n):
        return [("Pshift", g[0][1])]
    names = ["Zsign"] if n == 2 else []
    names.append(_shift_symbol(n))
    for name in names:
        for e in range(1, 2 * n):
            if g == symbol_power(name, e, n):
                return [(name, e)]
    return None


def decompose_glnz(g: Sequence[Sequence[int]]) -> HRWord:
    """Exact word over the Hua-Reiner generators (or {Z, X, P} for N = 2)."""
    g = [[int(x) for x in row] for row in g]
    n = len(g)
    if n < 2 or any(len(row) != n for row in g):
        raise DecompositionError("need a square matrix with N >= 2")
    d = int_det(g)
    if abs(d) != 1:
        raise DecompositionError(f"|det| = {abs(d)}, not in GL_N(Z)")

    single = _as_generator_power(g, n)
    if single is not None:
        return HRWord(tuple(single), n)

    # split off a fixed determinant -1 generator so the rest lies in SL_N(Z)
    tail: list[tuple[str, int]] = []
    h = g
    if d == -1:
        fix = "Zsign" if n == 2 else _shift_symbol(n)
        tail = [(fix, 1)]
        inv = symbol_power(fix, -1 if fix != "Zsign" else 1, n)
        h = int_matmul(g, inv)

    trans = _n2_transvection if n == 2 else (lambda i, j, b: transvection_word(i, j, b, n))
    syms: list[tuple[str, int]] = []
    # E_m ... E_1 h = I  =>  h = E_1^-1 ... E_m^-1
    for i, j, b in _reduce_to_identity(h):
        syms += trans(i, j, -b)
    return HRWord(tuple(syms + tail), n)


def matrix_from_json(obj) -> IntMatrix:
    entries = [[int(x) for x in row] for row in obj["entries"]]
    if "n" in obj and obj["n"] != len(entries):
        raise ValueError(f"'n' = {obj['n']} but {len(entries)} rows given")
    return entries


def load_int_matrix(path) -> IntMatrix:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def random_word(n: int, length: int, rng) -> HRWord:
    """Random word over the generator set for dimension ``n`` (and inverses)."""
    names: Iterable[str] = ("Zsign", "Xcyc", "Pshift") if n == 2 else (_shift_symbol(n), "Pshift")
    names = list(names)
    syms = [(names[rng.randrange(len(names))], rng.choice((1, -1))) for _ in range(length)]
    return HRWord(tuple(syms), n)
