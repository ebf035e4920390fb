"""Independent slow oracles shared by the test modules."""

from __future__ import annotations

from functools import lru_cache

import pytest

from kummerlab.padic import diagonal_soluble, real_soluble
from kummerlab.qfield import INF, is_prime, local_dim, local_rep, squarefree_part


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running oracle comparisons")


# ----------------------------------------------------------- Hilbert symbol

def brute_hilbert(a: int, b: int, v) -> int:
    """+1 iff z^2 = a x^2 + b y^2 has a primitive solution, searched modulo p^N.

    a and b are reduced to squarefree integers first.  For odd p a primitive
    solution mod p^3 lifts by Hensel; for p = 2 the same holds mod 2^5.
    """
    a, b = squarefree_part(a), squarefree_part(b)
    if v == INF:
        return -1 if a < 0 and b < 0 else 1
    p = v
    mod = p**3 if p != 2 else 2**5
    squares = {z * z % mod for z in range(mod)}
    for x in range(mod):
        for y in range(mod):
            if x % p == 0 and y % p == 0:
                continue
            if (a * x * x + b * y * y) % mod in squares:
                return 1
    return -1


# --------------------------------------------------- elliptic local images

def homogeneous_space_rows(roots, pair):
    """Diagonal quadrics in (z1, z2, z3, t) for the 2-covering attached to pair.

    b1 z1^2 = x - e1, b2 z2^2 = x - e2, b1 b2 z3^2 = x - e3 with x eliminated.
    """
    e1, e2, e3 = roots
    b1, b2 = pair
    return [[b1, -b2, 0, -(e2 - e1)], [b1, 0, -b1 * b2, -(e3 - e1)]]


def homogeneous_space_soluble(roots, pair, v) -> bool:
    if pair == (1, 1):
        return True
    rows = homogeneous_space_rows(roots, pair)
    if v == INF:
        return real_soluble(rows)[0]
    return diagonal_soluble(rows, v)[0]


@lru_cache(maxsize=None)
def oracle_local_image(roots, v) -> frozenset:
    """Local vectors (packed as in the descent module) of soluble coverings."""
    k = local_dim(v)
    out = set()
    for bits in range(1 << (2 * k)):
        pair = (local_rep(bits & ((1 << k) - 1), v), local_rep(bits >> k, v))
        if homogeneous_space_soluble(roots, pair, v):
            out.add(bits)
    return frozenset(out)


def oracle_selmer_dim(curve) -> int:
    """log2 of the number of pairs on {-1} and the bad primes passing every local test."""
    from kummerlab.descent.curve import pair_vector

    gens = [-1] + curve.bad_primes()
    places = curve.bad_primes() + [INF]
    count = 0
    for m1 in range(1 << len(gens)):
        b1 = _from_mask(m1, gens)
        for m2 in range(1 << len(gens)):
            b2 = _from_mask(m2, gens)
            if all(pair_vector((b1, b2), v) in oracle_local_image(curve.roots, v)
                   for v in places):
                count += 1
    dim = count.bit_length() - 1
    assert 1 << dim == count
    return dim


def _from_mask(mask, gens):
    out = 1
    for i, g in enumerate(gens):
        if mask >> i & 1:
            out *= g
    return out


# ------------------------------------------------------------- fixtures

def squarefree_range(lo: int, hi: int) -> list[int]:
    return [d for d in range(lo, hi + 1) if d != 0 and squarefree_part(d) == d]


SAMPLE_CURVES = [(0, 1, -1), (0, 3, 10), (0, 2, 7), (-1, 4, 9), (0, 5, -6)]


@pytest.fixture
def sample_curves():
    return list(SAMPLE_CURVES)


def small_primes(bound: int) -> list[int]:
    return [p for p in range(2, bound) if is_prime(p)]

