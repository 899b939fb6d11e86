import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicgates.padic import (
    AtLeast,
    PadicError,
    PadicInt,
    arith,
    inverse,
    make,
    parse_padic,
    primitive_root,
    unit_decompose,
    valuation,
)
from oracles import egcd_inverse, search_unit_exponents, smallest_generator


@pytest.mark.parametrize("p, k, n, r", [(5, 3, 126, 1), (5, 3, -1, 124), (3, 2, 9, 0)])
def test_make(p, k, n, r):
    assert make(p, k, n).r == r


@pytest.mark.parametrize("p, k", [(4, 2), (1, 1), (5, 0)])
def test_make_rejects(p, k):
    with pytest.raises(PadicError):
        make(p, k, 3)


def test_arith_examples():
    two, x = make(5, 3, 2), make(5, 3, 63)
    assert arith("mul", two, x).r == 1
    assert egcd_inverse(2, 125) == 63
    assert arith("add", x, make(5, 3, 0)) == x
    mixed = arith("mul", make(5, 3, 7), make(5, 2, 3))
    assert mixed.k == 2 and mixed.r == 21
    with pytest.raises(PadicError):
        arith("add", make(5, 2, 1), make(3, 2, 1))


def test_operators_with_ints():
    x = make(7, 2, 10)
    assert (x + 1).r == 11
    assert (1 - x).r == (1 - 10) % 49
    assert (3 * x).r == 30
    assert (-x).r == 39
    assert (x ** -1 * x).r == 1


@pytest.mark.parametrize("u, expect", [(2, 63), (1, 1), (124, 124)])
def test_inverse_examples(u, expect):
    assert inverse(make(5, 3, u)).r == expect


def test_inverse_non_unit():
    with pytest.raises(PadicError):
        inverse(make(5, 3, 10))


def test_inverse_random_against_euclid():
    rng = random.Random(1)
    for p, k in [(3, 4), (5, 3), (7, 2), (2, 10), (11, 3)]:
        m = p ** k
        for _ in range(1000):
            u = rng.randrange(m)
            if u % p == 0:
                continue
            inv = inverse(make(p, k, u))
            assert inv.r == egcd_inverse(u, m)
            assert (inv * make(p, k, u)).r == 1


@pytest.mark.parametrize("n, v", [(50, 2), (7, 0), (0, AtLeast(3))])
def test_valuation(n, v):
    assert valuation(make(5, 3, n)) == v


def test_valuation_marker_prints():
    assert str(valuation(make(5, 3, 0))) == ">=3"


@pytest.mark.parametrize("p, zeta", [(5, 2), (3, 2), (7, 3), (11, 2), (23, 5), (41, 6)])
def test_primitive_root(p, zeta):
    assert primitive_root(p) == zeta == smallest_generator(p)


def test_primitive_root_rejects_two():
    with pytest.raises(PadicError):
        primitive_root(2)


@pytest.mark.parametrize("u, p, k, ab", [(7, 5, 2, (1, 3)), (1, 5, 3, (0, 0)), (2, 5, 1, (1, 0))])
def test_unit_decompose_examples(u, p, k, ab):
    dec = unit_decompose(make(p, k, u))
    assert (dec.a, dec.b) == ab
    assert search_unit_exponents(u, p, k, primitive_root(p)) == [ab]


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_unit_decompose_exhaustive(p, k):
    m = p ** k
    for u in range(m):
        if u % p == 0:
            continue
        dec = unit_decompose(make(p, k, u))
        assert 0 <= dec.a <= p - 2 and 0 <= dec.b < p ** (k - 1)
        assert dec.recompose().r == u


def test_unit_decompose_matches_search_small():
    for u in range(1, 49):
        if u % 7:
            dec = unit_decompose(make(7, 2, u))
            assert search_unit_exponents(u, 7, 2, 3) == [(dec.a, dec.b)]


def test_unit_decompose_high_precision():
    # residues beyond 64 bits
    u = make(7, 40, 123456789123456789123456789)
    assert unit_decompose(u).recompose() == u


def test_unit_decompose_rejects():
    with pytest.raises(PadicError):
        unit_decompose(make(2, 3, 3))
    with pytest.raises(PadicError):
        unit_decompose(make(5, 3, 5))


def test_text_encoding_roundtrip():
    x = parse_padic("5^3:63")
    assert x == PadicInt(5, 3, 63)
    assert str(x) == "5^3:63"
    assert parse_padic("5^3:126").r == 1
    with pytest.raises(PadicError):
        parse_padic("5-3:1")


primes = st.sampled_from([2, 3, 5, 7, 13])


@st.composite
def triples(draw):
    p = draw(primes)
    vals = [make(p, draw(st.integers(1, 6)), draw(st.integers(-10 ** 6, 10 ** 6))) for _ in range(3)]
    return vals


@settings(max_examples=300, deadline=None)
@given(triples())
def test_ring_axioms(xyz):
    x, y, z = xyz
    assert (x * y) * z == x * (y * z)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x


@settings(max_examples=300, deadline=None)
@given(primes, st.integers(2, 8), st.integers(1, 10 ** 9), st.integers(1, 10 ** 9))
def test_valuation_additive(p, k, a, b):
    x, y = make(p, k, a), make(p, k, b)
    vx, vy = valuation(x), valuation(y)
    if isinstance(vx, int) and isinstance(vy, int) and vx + vy < k:
        assert valuation(x * y) == vx + vy
