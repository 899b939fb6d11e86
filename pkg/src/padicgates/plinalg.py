"""Exact matrix algebra over Z_p at fixed precision.

Matrices hold canonical residues mod ``p**k`` as plain Python ints, so
entries never overflow.  Elementary-matrix indices are 1-based, matching
the usual ``T_ij`` / ``P_ij`` / ``D_i`` notation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence, Union

from .padic import AtLeast, PadicError, PadicInt, Valuation, int_valuation, is_prime, make


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for c in range(n - 1):
        if a[c][c] == 0:
            for r in range(c + 1, n):
                if a[r][c] != 0:
                    a[c], a[r] = a[r], a[c]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) // prev
        prev = a[c][c]
    return sign * a[n - 1][n - 1]


def int_matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def int_identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class PadicMatrix:
    """Square matrix over Z_p, entries reduced mod ``p**k``."""

    p: int
    k: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise PadicError(f"{self.p} is not prime")
        if self.k < 1:
            raise PadicError(f"precision must be >= 1, got {self.k}")
        n = len(self.entries)
        if n < 1 or any(len(row) != n for row in self.entries):
            raise ValueError("matrix must be square with N >= 1")
        m = self.p ** self.k
        if any(not 0 <= x < m for row in self.entries for x in row):
            raise ValueError("entries must be canonical residues; use PadicMatrix.from_rows")

    @classmethod
    def from_rows(cls, p: int, k: int, rows) -> PadicMatrix:
        m = p ** k
        return cls(p, k, tuple(tuple(int(x) % m for x in row) for row in rows))

    @classmethod
    def identity(cls, p: int, k: int, n: int) -> PadicMatrix:
        return cls.from_rows(p, k, int_identity(n))

    @classmethod
    def diag(cls, p: int, k: int, values) -> PadicMatrix:
        n = len(values)
        return cls.from_rows(p, k, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    def __getitem__(self, ij) -> PadicInt:
        i, j = ij
        return PadicInt(self.p, self.k, self.entries[i][j])

    def __matmul__(self, other: PadicMatrix) -> PadicMatrix:
        return mat_mul(self, other)

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def reduce(self, k: int) -> PadicMatrix:
        if k > self.k:
            raise PadicError(f"cannot raise precision from {self.k} to {k}")
        return PadicMatrix.from_rows(self.p, k, self.entries)

    def det(self) -> PadicInt:
        return det(self)

    def is_gl(self) -> bool:
        return is_gl(self)

    def inverse(self) -> PadicMatrix:
        return mat_inverse(self)

    def apply(self, vec: Sequence[int]) -> list[int]:
        """Matrix-vector product on residues."""
        m = self.modulus
        return [sum(a * x for a, x in zip(row, vec)) % m for row in self.entries]

    def __str__(self) -> str:
        return f"PadicMatrix(p={self.p}, k={self.k}, {self.tolist()})"


def mat_mul(a: PadicMatrix, b: PadicMatrix) -> PadicMatrix:
    if a.p != b.p:
        raise PadicError(f"prime mismatch: {a.p} vs {b.p}")
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    return PadicMatrix.from_rows(a.p, min(a.k, b.k), int_matmul(a.entries, b.entries))


def mat_product(mats: Sequence[PadicMatrix], p: int, k: int, n: int) -> PadicMatrix:
    out = PadicMatrix.identity(p, k, n)
    for m in mats:
        out = out @ m
    return out


def det(a: PadicMatrix) -> PadicInt:
    return make(a.p, a.k, int_det(a.entries))


def is_gl(a: PadicMatrix) -> bool:
    """Membership in GL_N(Z_p): the determinant is a unit."""
    return det(a).is_unit()


def mat_inverse(a: PadicMatrix) -> PadicMatrix:
    """Gauss-Jordan inverse mod p**k; requires a unit determinant."""
    if not is_gl(a):
        raise PadicError("matrix is not in GL_N(Z_p)")
    n, m = a.n, a.modulus
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a.entries)]
    for c in range(n):
        r = next(r for r in range(c, n) if aug[r][c] % a.p)
        aug[c], aug[r] = aug[r], aug[c]
        inv = pow(aug[c][c], -1, m)
        aug[c] = [x * inv % m for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % m for x, y in zip(aug[i], aug[c])]
    return PadicMatrix(a.p, a.k, tuple(tuple(row[n:]) for row in aug))


# --- elementary matrices -------------------------------------------------

@dataclass(frozen=True)
class Transvection:
    """``T_ij(b) = I + b E_ij`` (i != j)."""

    i: int
    j: int
    b: int

    def inverse(self) -> Transvection:
        return Transvection(self.i, self.j, -self.b)


@dataclass(frozen=True)
class Swap:
    """``P_ij = I - E_ii - E_jj + E_ij + E_ji``."""

    i: int
    j: int

    def inverse(self) -> Swap:
        return self


@dataclass(frozen=True)
class Dilation:
    """``D_i(u) = I - (1 - u) E_ii`` for a unit ``u``."""

    i: int
    u: int

    def inverse(self, p: int, k: int) -> Dilation:
        return Dilation(self.i, pow(self.u, -1, p ** k))


ElementaryMatrix = Union[Transvection, Swap, Dilation]


def _check_indices(e: ElementaryMatrix, n: int) -> None:
    idx = [e.i] if isinstance(e, Dilation) else [e.i, e.j]
    if any(not 1 <= x <= n for x in idx):
        raise ValueError(f"index out of range 1..{n}: {e}")
    if len(idx) == 2 and idx[0] == idx[1]:
        raise ValueError(f"need i != j: {e}")


def elementary_to_matrix(e: ElementaryMatrix, p: int, k: int, n: int) -> PadicMatrix:
    """The literal N x N matrix of an elementary factor."""
    _check_indices(e, n)
    rows = int_identity(n)
    if isinstance(e, Transvection):
        rows[e.i - 1][e.j - 1] += e.b
    elif isinstance(e, Swap):
        i, j = e.i - 1, e.j - 1
        rows[i][i] = rows[j][j] = 0
        rows[i][j] = rows[j][i] = 1
    else:
        if e.u % p == 0:
            raise PadicError(f"D_i needs a unit, got {e.u}")
        rows[e.i - 1][e.i - 1] = e.u
    return PadicMatrix.from_rows(p, k, rows)


def elementary_inverse(e: ElementaryMatrix, p: int, k: int) -> ElementaryMatrix:
    if isinstance(e, Dilation):
        return e.inverse(p, k)
    return e.inverse()


# --- Smith normal form ----------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """``prod(L) @ A @ prod(R) == diag(p**e_1, ..., p**e_N)`` mod ``p**k``.

    ``L_factors`` and ``R_factors`` multiply left to right in list order.
    Exponents that vanish to precision are ``AtLeast(k)``.
    """

    p: int
    k: int
    n: int
    L_factors: tuple[ElementaryMatrix, ...]
    R_factors: tuple[ElementaryMatrix, ...]
    exponents: tuple[Valuation, ...]

    def left(self) -> PadicMatrix:
        return mat_product([elementary_to_matrix(e, self.p, self.k, self.n) for e in self.L_factors],
                           self.p, self.k, self.n)

    def right(self) -> PadicMatrix:
        return mat_product([elementary_to_matrix(e, self.p, self.k, self.n) for e in self.R_factors],
                           self.p, self.k, self.n)

    def diagonal(self) -> PadicMatrix:
        vals = [0 if isinstance(e, AtLeast) else self.p ** e for e in self.exponents]
        return PadicMatrix.diag(self.p, self.k, vals)


def exponents_nondecreasing(exps: Sequence[Valuation]) -> bool:
    def key(e):
        return (1, e.k) if isinstance(e, AtLeast) else (0, e)
    return all(key(a) <= key(b) for a, b in zip(exps, exps[1:]))


def smith_normal_form(a: PadicMatrix) -> SmithDecomposition:
    """Smith normal form over Z_p with the diagonal normalised to powers of p.

    Pivot is the entry of least valuation in the working block (row-major
    tie break).  Row operations go into ``L``, column operations into ``R``.
    """
    p, k, n, m = a.p, a.k, a.n, a.modulus
    w = a.tolist()
    row_ops: list[ElementaryMatrix] = []
    col_ops: list[ElementaryMatrix] = []
    exps: list[Valuation] = []

    def val(x: int) -> Valuation:
        return int_valuation(x, p, k)

    for t in range(n):
        best = None
        for i in range(t, n):
            for j in range(t, n):
                if w[i][j]:
                    v = val(w[i][j])
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            exps.extend([AtLeast(k)] * (n - t))
            break
        e, pi, pj = best
        if pi != t:
            w[t], w[pi] = w[pi], w[t]
            row_ops.append(Swap(t + 1, pi + 1))
        if pj != t:
            for row in w:
                row[t], row[pj] = row[pj], row[t]
            col_ops.append(Swap(t + 1, pj + 1))

        unit = w[t][t] // p ** e
        uinv = pow(unit, -1, m)
        for i in range(t + 1, n):
            if w[i][t]:
                b = -(w[i][t] // p ** e) * uinv % m
                w[i] = [(x + b * y) % m for x, y in zip(w[i], w[t])]
                row_ops.append(Transvection(i + 1, t + 1, b))
        for j in range(t + 1, n):
            if w[t][j]:
                b = -(w[t][j] // p ** e) * uinv % m
                for row in w:
                    row[j] = (row[j] + b * row[t]) % m
                col_ops.append(Transvection(t + 1, j + 1, b))
        if unit % m != 1:
            w[t][t] = w[t][t] * uinv % m
            row_ops.append(Dilation(t + 1, uinv))
        exps.append(e)

    # row ops were applied left-multiplying, so the latest is leftmost
    return SmithDecomposition(p, k, n, tuple(reversed(row_ops)), tuple(col_ops), tuple(exps))


def minor_valuations(a: PadicMatrix) -> list[Valuation]:
    """``v(Delta_i)`` for i = 1..N: least valuation over all i x i minors.

    Brute-force enumeration, meant as an independent check of
    :func:`smith_normal_form` for small N.
    """
    n, out = a.n, []
    for size in range(1, n + 1):
        best: Valuation = AtLeast(a.k)
        for rows in combinations(range(n), size):
            for cols in combinations(range(n), size):
                minor = int_det([[a.entries[r][c] for c in cols] for r in rows])
                v = int_valuation(minor, a.p, a.k)
                if not isinstance(v, AtLeast) and (isinstance(best, AtLeast) or v < best):
                    best = v
        out.append(best)
    return out


def elementary_divisor_check(a: PadicMatrix, snf: SmithDecomposition) -> bool:
    """Check SNF exponents against ``e_i = v(Delta_i) - v(Delta_{i-1})``.

    Where ``Delta_i`` vanishes to precision, the running exponent sum must
    reach the precision floor instead.
    """
    if len(snf.exponents) != a.n or not exponents_nondecreasing(snf.exponents):
        return False
    running = 0
    for e, d in zip(snf.exponents, minor_valuations(a)):
        running = None if running is None or isinstance(e, AtLeast) else running + e
        if isinstance(d, AtLeast):
            if running is not None and running < a.k:
                return False
        elif running != d:
            return False
    return True


# --- JSON matrix files ------------------------------------------------------

def matrix_from_json(obj, p: int | None = None, k: int | None = None) -> PadicMatrix:
    """Build from ``{"p", "k", "n", "entries"}``; explicit ``p``/``k`` fill gaps."""
    p = obj.get("p", p)
    k = obj.get("k", k)
    if p is None or k is None:
        raise ValueError("matrix file needs 'p' and 'k'")
    entries = obj["entries"]
    if "n" in obj and obj["n"] != len(entries):
        raise ValueError(f"'n' = {obj['n']} but {len(entries)} rows given")
    return PadicMatrix.from_rows(int(p), int(k), entries)


def matrix_to_json(a: PadicMatrix) -> dict:
    return {"p": a.p, "k": a.k, "n": a.n, "entries": a.tolist()}


def load_matrix(path, p: int | None = None, k: int | None = None) -> PadicMatrix:
    with open(path) as fh:
        return matrix_from_json(json.load(fh), p, k)
