"""Exact arithmetic in Q and its completions.

Square classes are plain Python ints holding the squarefree representative
(sign included).  Places are finite primes (ints) or :data:`INF`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .errors import DomainError, UnfactoredResidue

RationalLike = Union[int, Fraction]

INF = math.inf

TRIAL_BOUND = 10**6
# Miller-Rabin with the first 13 primes as bases is deterministic below this.
_MR_DETERMINISTIC = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
RHO_BUDGET = 2_000_000


# ---------------------------------------------------------------- primality

@lru_cache(maxsize=1)
def _small_primes():
    sieve = bytearray([1]) * (TRIAL_BOUND + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(TRIAL_BOUND) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, TRIAL_BOUND + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def primes_up_to(bound: int) -> list[int]:
    if bound <= TRIAL_BOUND:
        ps = _small_primes()
        lo, hi = 0, len(ps)
        while lo < hi:
            mid = (lo + hi) // 2
            if ps[mid] <= bound:
                lo = mid + 1
            else:
                hi = mid
        return ps[:lo]
    return [n for n in range(2, bound + 1) if is_prime(n)]


def _miller_rabin(n: int, bases: Iterable[int]) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a in (0, 1, n - 1):
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pocklington(n: int) -> bool:
    """Certify a probable prime n via a factored part of n - 1 exceeding sqrt(n)."""
    m = n - 1
    known = []
    F = 1
    for p in _small_primes():
        if m % p == 0:
            known.append(p)
            while m % p == 0:
                m //= p
                F *= p
        if F * F > n:
            break
    while F * F <= n and m > 1:
        if is_prime(m):
            known.append(m)
            F *= m
            m = 1
            break
        q = _pollard_brent(m)
        for r in factor(q).primes:
            known.append(r)
            while m % r == 0:
                m //= r
                F *= r
    if F * F <= n:
        return False
    for q in known:
        for a in range(2, 200):
            if pow(a, n - 1, n) != 1:
                return False
            if math.gcd(pow(a, (n - 1) // q, n) - 1, n) == 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=65536)
def is_prime(n: int) -> bool:
    """Certified primality test; raises UnfactoredResidue if no certificate is found."""
    if n < 2:
        return False
    if n <= TRIAL_BOUND:
        ps = _small_primes()
        lo, hi = 0, len(ps)
        while lo < hi:
            mid = (lo + hi) // 2
            if ps[mid] < n:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(ps) and ps[lo] == n
    for p in _small_primes()[:200]:
        if n % p == 0:
            return False
    if not _miller_rabin(n, _MR_BASES):
        return False
    if n < _MR_DETERMINISTIC:
        return True
    if _pocklington(n):
        return True
    raise UnfactoredResidue(n, f"probable prime {n} could not be certified")


def _pollard_brent(n: int, budget: int = RHO_BUDGET) -> int:
    """Return a nontrivial factor of the composite n (deterministic seeds)."""
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    spent = 0
    while spent < budget:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            spent += r
            if spent > budget:
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise UnfactoredResidue(n)


# ------------------------------------------------------------- factorization

@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out


def _factor_positive(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < TRIAL_BOUND**2 or is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.extend((d, m // d))
    return out


@lru_cache(maxsize=65536)
def factor(n: int) -> Factorization:
    """Exact factorization of a nonzero integer."""
    if n == 0:
        raise DomainError("cannot factor 0")
    fac = _factor_positive(abs(n))
    return Factorization(1 if n > 0 else -1, tuple(sorted(fac.items())))


def as_fraction(q: RationalLike) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int) and not isinstance(q, bool):
        return Fraction(q)
    if isinstance(q, str):
        return Fraction(q)
    raise DomainError(f"not an exact rational: {q!r}")


def prime_support(*qs: RationalLike) -> list[int]:
    """Sorted primes dividing the numerator or denominator of any argument."""
    out: set[int] = set()
    for q in qs:
        q = as_fraction(q)
        if q == 0:
            raise DomainError("zero has no prime support")
        out.update(factor(q.numerator).primes)
        if q.denominator != 1:
            out.update(factor(q.denominator).primes)
    return sorted(out)


def check_place(v) -> None:
    if v == INF:
        return
    if not isinstance(v, int) or isinstance(v, bool) or not is_prime(v):
        raise DomainError(f"not a place of Q: {v!r}")


def place_key(v):
    return (1, 0) if v == INF else (0, v)


def format_place(v) -> str:
    return "inf" if v == INF else str(v)


def parse_place(text):
    if text in ("inf", "oo", "infinity", INF):
        return INF
    v = int(text)
    check_place(v)
    return v


# ------------------------------------------------------- valuations, squares

def valuation(q: RationalLike, p: int) -> int:
    q = as_fraction(q)
    if q == 0:
        raise DomainError("valuation of 0")
    if p == INF:
        raise DomainError("valuation at the infinite place")
    if p < 2:
        raise DomainError(f"not a prime: {p}")
    v = 0
    n, d = q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _int_squarefree(n: int) -> int:
    out = 1 if n > 0 else -1
    for p, e in factor(n).factors:
        if e % 2:
            out *= p
    return out


def squarefree_part(q: RationalLike) -> int:
    """The squarefree integer representing q in Q*/Q*^2."""
    q = as_fraction(q)
    if q == 0:
        raise DomainError("square class of 0")
    return _int_squarefree(q.numerator * q.denominator)


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in factor(n).factors)


def sq_mul(a: int, b: int) -> int:
    """Product of two square classes given by squarefree representatives."""
    g = math.gcd(a, b)
    return (a // g) * (b // g)


def sq_prod(classes: Iterable[int]) -> int:
    out = 1
    for c in classes:
        out = sq_mul(out, c)
    return out


def support_vector(sq: int, basis: list[int]) -> int:
    """F2 coordinates of a squarefree class: bit 0 is the sign, bit i+1 is basis[i]."""
    bits = 1 if sq < 0 else 0
    m = abs(sq)
    for i, p in enumerate(basis):
        if m % p == 0:
            bits |= 1 << (i + 1)
            m //= p
    if m != 1:
        raise DomainError(f"class {sq} not supported on {basis}")
    return bits


def from_support_vector(bits: int, basis: list[int]) -> int:
    out = -1 if bits & 1 else 1
    for i, p in enumerate(basis):
        if bits >> (i + 1) & 1:
            out *= p
    return out


# ------------------------------------------------------------------ symbols

def legendre(a: int, p: int) -> int:
    if p == 2 or not is_prime(p):
        raise DomainError(f"legendre symbol needs an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


@lru_cache(maxsize=4096)
def nonresidue(p: int) -> int:
    """Least quadratic non-residue modulo the odd prime p (always a prime)."""
    n = 2
    while legendre(n, p) != -1:
        n += 1
    return n


def _split(q: Fraction, p: int) -> tuple[int, int]:
    """q = p^v * u with u a p-adic unit; returns (v, u) with u an integer."""
    n = q.numerator * q.denominator
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 2
    return v, n


def hilbert(a: RationalLike, b: RationalLike, v) -> int:
    """Hilbert symbol (a, b)_v in {-1, +1}."""
    a, b = as_fraction(a), as_fraction(b)
    if a == 0 or b == 0:
        raise DomainError("hilbert symbol of 0")
    if v == INF:
        return -1 if a < 0 and b < 0 else 1
    check_place(v)
    alpha, u = _split(a, v)
    beta, w = _split(b, v)
    if v == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        e = (eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)) % 2
        return -1 if e else 1
    sign = -1 if (alpha * beta * ((v - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre(u, v)
    if alpha % 2:
        sign *= legendre(w, v)
    return sign


def places_of(*qs: RationalLike) -> list:
    """2, infinity and every prime in the joint support, sorted."""
    ps = set(prime_support(*qs)) | {2}
    return sorted(ps) + [INF]


# ----------------------------------------------------- local square classes

def local_dim(v) -> int:
    """Dimension of Q_v*/Q_v*^2 over F2."""
    if v == INF:
        return 1
    return 3 if v == 2 else 2


def local_bits(q: RationalLike, v) -> int:
    """F2 coordinates of q in Q_v*/Q_v*^2.

    infinity: bit0 = sign.  odd p: bit0 = valuation parity, bit1 = non-residue unit.
    p = 2: bit0 = valuation parity, bit1 = unit = 3 mod 4, bit2 = unit = +-3 mod 8.
    """
    q = as_fraction(q)
    if q == 0:
        raise DomainError("local class of 0")
    if v == INF:
        return 1 if q < 0 else 0
    val, u = _split(q, v)
    if v == 2:
        u8 = u % 8
        return (val % 2) | ((u8 % 4 == 3) << 1) | ((u8 in (3, 5)) << 2)
    return (val % 2) | ((legendre(u, v) == -1) << 1)


def local_rep(bits: int, v) -> int:
    """Canonical squarefree integer in the local class with the given bits."""
    if v == INF:
        return -1 if bits & 1 else 1
    if v == 2:
        unit = {0: 1, 1: 7, 2: 5, 3: 3}[(bits >> 1) & 3]
        return unit * (2 if bits & 1 else 1)
    unit = nonresidue(v) if bits & 2 else 1
    return unit * (v if bits & 1 else 1)


def local_class(q: RationalLike, v) -> int:
    return local_rep(local_bits(q, v), v)


def is_local_square(q: RationalLike, v) -> bool:
    return local_bits(q, v) == 0


def sqrt_mod_prime_power(u: int, p: int, k: int) -> int:
    """x with x^2 = u mod p^k for a unit u that is a p-adic square."""
    if k <= 0:
        return 0
    mod = p**k
    u %= mod
    if p == 2:
        if u % min(8, mod) != 1 % min(8, mod):
            raise DomainError(f"{u} is not a 2-adic square unit")
        x = 1
        # lift: if x^2 = u mod 2^j (j >= 3), adjust by 2^(j-1)
        for j in range(3, k):
            if (x * x - u) % 2 ** (j + 1):
                x += 2 ** (j - 1)
        return x % mod
    if legendre(u, p) != 1:
        raise DomainError(f"{u} is not a square modulo {p}")
    x = _tonelli(u % p, p)
    pk = p
    while pk < mod:
        pk *= p
        # Newton step x <- x - (x^2 - u)/(2x)
        x = (x - (x * x - u) * pow(2 * x, -1, pk)) % pk
    return x % mod


def _tonelli(n: int, p: int) -> int:
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r
