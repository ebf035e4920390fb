"""Least prime with prescribed quadratic residue symbols."""

from __future__ import annotations

from typing import Sequence

from .. import f2
from ..errors import DomainError, NoSuchFrobenius, SearchExhausted
from ..qfield import is_prime, legendre, prime_support, squarefree_part, support_vector

DEFAULT_BOUND = 10**6


def check_consistent(conditions: Sequence[tuple[int, int]]) -> None:
    """Raise NoSuchFrobenius if some subset of classes multiplies to a square
    while the prescribed symbols multiply to -1."""
    classes = [squarefree_part(c) for c, _ in conditions]
    for _, s in conditions:
        if s not in (1, -1):
            raise DomainError(f"prescribed symbol must be +1 or -1, got {s}")
    primes = prime_support(*classes) if classes else []
    images = [support_vector(c, primes) for c in classes]
    for mask in f2.kernel(images):
        chosen = [i for i in range(len(conditions)) if mask >> i & 1]
        if sum(conditions[i][1] == -1 for i in chosen) % 2:
            raise NoSuchFrobenius([conditions[i][0] for i in chosen])


def find_prime(conditions: Sequence[tuple[int, int]], bound: int = DEFAULT_BOUND) -> int:
    """Least odd prime p <= bound, coprime to every class, with (c|p) = s for all (c, s)."""
    conditions = [(int(c), int(s)) for c, s in conditions]
    check_consistent(conditions)
    classes = [squarefree_part(c) for c, _ in conditions]
    bad = set(prime_support(*classes)) if classes else set()
    for p in range(3, bound + 1, 2):
        if p in bad or not is_prime(p):
            continue
        if all(legendre(c, p) == s for c, (_, s) in zip(classes, conditions)):
            return p
    raise SearchExhausted(f"no prime up to {bound} satisfies the conditions")
