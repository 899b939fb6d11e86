"""Bounded-precision arithmetic in Z_p.

Every value carries its prime ``p`` and precision ``k`` explicitly and is
stored as a canonical residue in ``[0, p**k)``.  Binary operations between
values of different precision truncate to the smaller one; nothing ever
silently gains precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union


class PadicError(ValueError):
    """Raised on invalid p-adic input (bad prime, precision, non-unit...)."""


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True, order=True)
class AtLeast:
    """Valuation marker for a value that vanishes to the working precision.

    A residue of 0 mod p**k only says the true valuation is ``>= k``.
    """

    k: int

    def __str__(self) -> str:
        return f">={self.k}"


Valuation = Union[int, AtLeast]


@dataclass(frozen=True)
class PadicInt:
    """An element of Z_p known modulo ``p**k``."""

    p: int
    k: int
    r: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise PadicError(f"{self.p} is not prime")
        if self.k < 1:
            raise PadicError(f"precision must be >= 1, got {self.k}")
        if not 0 <= self.r < self.p ** self.k:
            raise PadicError(f"residue {self.r} not canonical mod {self.p}^{self.k}")

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    def _coerce(self, other) -> PadicInt:
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise PadicError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return make(self.p, self.k, other)
        return NotImplemented

    def _binop(self, other, fn) -> PadicInt:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        k = min(self.k, other.k)
        return make(self.p, k, fn(self.r, other.r))

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __neg__(self) -> PadicInt:
        return make(self.p, self.k, -self.r)

    def __pow__(self, e: int) -> PadicInt:
        if e < 0:
            return pow(self.inverse(), -e)
        return PadicInt(self.p, self.k, pow(self.r, e, self.modulus))

    def __int__(self) -> int:
        return self.r

    def __str__(self) -> str:
        return format_padic(self)

    def is_unit(self) -> bool:
        return self.r % self.p != 0

    def inverse(self) -> PadicInt:
        return inverse(self)

    def valuation(self) -> Valuation:
        return valuation(self)

    def reduce(self, k: int) -> PadicInt:
        """Truncate to a lower precision."""
        if k > self.k:
            raise PadicError(f"cannot raise precision from {self.k} to {k}")
        return make(self.p, k, self.r)


def make(p: int, k: int, n: int) -> PadicInt:
    """Reduce the integer ``n`` into Z_p at precision ``k``."""
    if not is_prime(p):
        raise PadicError(f"{p} is not prime")
    if k < 1:
        raise PadicError(f"precision must be >= 1, got {k}")
    return PadicInt(p, k, n % p ** k)


def arith(op: str, x: PadicInt, y: PadicInt) -> PadicInt:
    """Dispatch ``op`` in {'add', 'sub', 'mul'}; result precision is the min."""
    try:
        fn = {"add": PadicInt.__add__, "sub": PadicInt.__sub__, "mul": PadicInt.__mul__}[op]
    except KeyError:
        raise PadicError(f"unknown operation {op!r}") from None
    return fn(x, y)


def inverse(u: PadicInt) -> PadicInt:
    if not u.is_unit():
        raise PadicError(f"{u} is not a unit")
    return PadicInt(u.p, u.k, pow(u.r, -1, u.modulus))


def valuation(x: PadicInt) -> Valuation:
    """p-adic valuation of ``x``, or ``AtLeast(k)`` when ``x`` is 0 mod p**k."""
    if x.r == 0:
        return AtLeast(x.k)
    v, r = 0, x.r
    while r % x.p == 0:
        r //= x.p
        v += 1
    return v


def int_valuation(n: int, p: int, k: int) -> Valuation:
    """Valuation of an integer read modulo ``p**k``."""
    return valuation(make(p, k, n))


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest generator of (Z/pZ)^* for an odd prime ``p``."""
    if not is_prime(p):
        raise PadicError(f"{p} is not prime")
    if p == 2:
        raise PadicError("p = 2 is not supported by the unit decomposition")
    qs = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable: every odd prime has a primitive root")


@dataclass(frozen=True)
class UnitDecomposition:
    """Exponents with ``zeta**a * (1+p)**b == u (mod p**k)``."""

    a: int
    b: int
    p: int
    k: int

    @property
    def zeta(self) -> int:
        return primitive_root(self.p)

    def recompose(self) -> PadicInt:
        m = self.p ** self.k
        return PadicInt(self.p, self.k, pow(self.zeta, self.a, m) * pow(1 + self.p, self.b, m) % m)


def unit_decompose(u: PadicInt) -> UnitDecomposition:
    """Write a unit as ``zeta**a * (1+p)**b`` with ``0 <= a < p-1``, ``0 <= b < p**(k-1)``.

    ``a`` is the discrete log of ``u mod p`` (exhaustive search) and ``b`` is
    lifted one base-p digit at a time.
    """
    p, k = u.p, u.k
    if p == 2:
        raise PadicError("p = 2 is not supported by the unit decomposition")
    if not u.is_unit():
        raise PadicError(f"{u} is not a unit")
    zeta = primitive_root(p)
    m = p ** k

    target = u.r % p
    a, acc = 0, 1
    while acc != target:
        acc = acc * zeta % p
        a += 1

    # w lies in 1 + pZ_p; (1+p)**(p**i) == 1 + p**(i+1) mod p**(i+2) for odd p
    w = u.r * pow(zeta, -a, m) % m
    b = 0
    for j in range(1, k):
        mod = p ** (j + 1)
        step = p ** (j - 1)
        for d in range(p):
            if pow(1 + p, b + d * step, mod) == w % mod:
                b += d * step
                break
        else:
            raise AssertionError("digit lifting failed")
    return UnitDecomposition(a, b, p, k)


def format_padic(x: PadicInt) -> str:
    return f"{x.p}^{x.k}:{x.r}"


def parse_padic(text: str) -> PadicInt:
    """Parse the ``p^k:r`` text encoding, e.g. ``5^3:63``."""
    try:
        head, r = text.strip().split(":")
        p, k = head.split("^")
        return make(int(p), int(k), int(r))
    except ValueError as exc:
        if isinstance(exc, PadicError):
            raise
        raise PadicError(f"cannot parse p-adic literal {text!r}") from None
