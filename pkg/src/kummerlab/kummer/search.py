"""Height-bounded search for rational points on the quadric intersection."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

from ..errors import DomainError
from .equations import QuadricForm, coefficient_matrix, minors


def _solve3(m, rhs):
    """Cramer's rule for a 3x3 integer system with exact rational output."""
    def det(a):
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    D = det(m)
    out = []
    for j in range(3):
        mj = [row[:j] + [r] + row[j + 1:] for row, r in zip(m, rhs)]
        out.append(Fraction(det(mj), D))
    return out


def _square_root(q: Fraction) -> Optional[int]:
    if q < 0 or q.denominator != 1:
        return None
    r = math.isqrt(q.numerator)
    return r if r * r == q.numerator else None


def search_points(forms: Sequence[QuadricForm], H: int) -> list[tuple[int, ...]]:
    """All primitive nonnegative solutions with max |x_i| <= H, sorted.

    Three coordinates are enumerated; the squares of the other three follow
    linearly, so no sieving is needed.  Signs are dropped since only squares occur.
    """
    if H < 1:
        raise DomainError("height bound must be at least 1")
    rows = coefficient_matrix(forms)
    det = minors(forms)
    solved = next((cols for cols in sorted(combinations(range(6), 3), reverse=True)
                   if det[cols] != 0), None)
    if solved is None:
        raise DomainError("coefficient matrix has rank below 3")
    free = [i for i in range(6) if i not in solved]
    m = [[r[c] for c in solved] for r in rows]
    found = []
    for xs in product(range(H + 1), repeat=3):
        ys = [x * x for x in xs]
        rhs = [-sum(r[c] * y for c, y in zip(free, ys)) for r in rows]
        sol = _solve3(m, rhs)
        roots = [_square_root(q) for q in sol]
        if any(r is None or r > H for r in roots):
            continue
        x = [0] * 6
        for c, v in zip(free, xs):
            x[c] = v
        for c, v in zip(solved, roots):
            x[c] = v
        if not any(x):
            continue
        g = 0
        for v in x:
            g = math.gcd(g, v)
        if g == 1:
            found.append(tuple(x))
    return sorted(found)


def search_point(forms: Sequence[QuadricForm], H: int) -> Optional[tuple[int, ...]]:
    """Lexicographically least primitive point of height <= H, or None."""
    pts = search_points(forms, H)
    return pts[0] if pts else None
