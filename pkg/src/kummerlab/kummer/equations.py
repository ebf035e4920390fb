"""The Kummer surface as an intersection of three diagonal quadrics in P^5.

For roots a_0..a_5 and b = (b_0..b_5) the surface is

    sum_i a_i^k b_i x_i^2 / f'(a_i) = 0,   k = 0, 1, 2,

with f(x) = prod (x - a_i).  Forms are stored with integer coefficients,
content 1 and positive leading coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

from ..errors import DomainError
from ..qfield import as_fraction, squarefree_part
from ..twotorsion import BVector


@dataclass(frozen=True)
class KummerSpec:
    a: tuple[int, ...]
    b: tuple[Fraction, ...]
    M: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        b = tuple(as_fraction(x) for x in self.b)
        if len(a) != 6 or len(b) != 6:
            raise DomainError("a Kummer spec needs six roots and six b values")
        if len(set(a)) != 6:
            raise DomainError(f"roots are not distinct: {a}")
        if any(x == 0 for x in b):
            raise DomainError("b values must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if self.M is not None:
            object.__setattr__(self, "M", tuple(int(w) for w in self.M))

    @property
    def d(self) -> int:
        out = 1
        for i, j in combinations(range(6), 2):
            out *= self.a[j] - self.a[i]
        return out

    @property
    def product_is_square(self) -> bool:
        prod = Fraction(1)
        for x in self.b:
            prod *= x
        return squarefree_part(prod) == 1

    @property
    def bvector(self) -> BVector:
        """The class in H^1(Q, A[2]); needs a square product."""
        return BVector(self.b)


@dataclass(frozen=True)
class QuadricForm:
    """sum_i coeffs[i] * x_i^2 with integer coefficients."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if not any(coeffs):
            raise DomainError("quadric form is identically zero")
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, x: Sequence) -> Fraction | int:
        return sum(c * xi * xi for c, xi in zip(self.coeffs, x))

    @classmethod
    def normalized(cls, coeffs: Sequence[Fraction]) -> "QuadricForm":
        coeffs = [as_fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        if g == 0:
            raise DomainError("quadric form is identically zero")
        ints = [c // g for c in ints]
        lead = next(c for c in ints if c)
        if lead < 0:
            ints = [-c for c in ints]
        return cls(tuple(ints))


def fprime(a: Sequence[int]) -> list[int]:
    """f'(a_i) = prod_{j != i} (a_i - a_j)."""
    out = []
    for i, ai in enumerate(a):
        v = 1
        for j, aj in enumerate(a):
            if j != i:
                v *= ai - aj
        if v == 0:
            raise DomainError("repeated roots")
        out.append(v)
    return out


def moment_sums(a: Sequence[int], kmax: int = 4) -> list[Fraction]:
    """sum_i a_i^k / f'(a_i) for k = 0..kmax; zero for k < len(a) - 1."""
    fp = fprime(a)
    return [sum(Fraction(ai**k, f) for ai, f in zip(a, fp)) for k in range(kmax + 1)]


def build_equations(spec: KummerSpec) -> tuple[QuadricForm, QuadricForm, QuadricForm]:
    if spec.d == 0:
        raise DomainError("repeated roots")
    fp = fprime(spec.a)
    return tuple(
        QuadricForm.normalized([Fraction(ai**k) * bi / f for ai, bi, f in zip(spec.a, spec.b, fp)])
        for k in range(3)
    )


def coefficient_matrix(forms: Sequence[QuadricForm]) -> list[list[int]]:
    return [list(f.coeffs) for f in forms]


def on_surface(forms: Sequence[QuadricForm], x: Sequence) -> bool:
    return any(x) and all(f(x) == 0 for f in forms)


def _det3(m) -> int:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def minors(forms: Sequence[QuadricForm]) -> dict[tuple[int, int, int], int]:
    """All 3x3 minors of the coefficient matrix, keyed by column triple.

    A diagonal intersection of three quadrics is smooth exactly when every
    minor is nonzero, so these also decide good reduction at odd p.
    """
    rows = coefficient_matrix(forms)
    return {cols: _det3([[r[c] for c in cols] for r in rows]) for cols in combinations(range(6), 3)}


def kernel_basis(forms: Sequence[QuadricForm]) -> list[list[int]]:
    """Integer 6x3 matrix K whose columns span {y : sum_i q_ki y_i = 0}.

    Points of the surface are exactly x with (x_i^2) = K s for some s.
    """
    rows = [[Fraction(c) for c in r] for r in coefficient_matrix(forms)]
    n = 6
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    cols = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][f]
        den = 1
        for x in vec:
            den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [int(x * den) for x in vec]
        g = 0
        for x in ints:
            g = math.gcd(g, x)
        cols.append([x // g for x in ints])
    return [[cols[j][i] for j in range(len(cols))] for i in range(n)]


def count_points_mod_p(forms: Sequence[QuadricForm], p: int) -> int:
    """Number of F_p-points of the reduced intersection in P^5 (p odd)."""
    if p == 2:
        raise DomainError("point counts are implemented for odd p")
    rows = [[c % p for c in f.coeffs] for f in forms]
    basis = _kernel_mod_p(rows, p)
    sq = [0] * p
    for x in range(p):
        sq[x * x % p] += 1
    affine = 0
    for s in product(range(p), repeat=len(basis)):
        y = [sum(si * b[i] for si, b in zip(s, basis)) % p for i in range(6)]
        n = 1
        for yi in y:
            n *= sq[yi]
            if not n:
                break
        affine += n
    return (affine - 1) // (p - 1)


def _rank_mod_p(cols, p) -> int:
    rows = [list(r) for r in zip(*cols)] if cols else []
    rank = 0
    for c in range(len(cols)):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c] * inv
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def singular_points_mod_p(forms: Sequence[QuadricForm], p: int) -> list[tuple[int, ...]]:
    """Vectors y = (x_i^2) of singular F_p-points of the reduction (p odd).

    The Jacobian at x has columns 2 x_i q_i, so x is singular exactly when the
    coefficient columns on the support of x have rank below 3.
    """
    if p == 2:
        raise DomainError("smoothness checks are implemented for odd p")
    rows = [[c % p for c in f.coeffs] for f in forms]
    basis = _kernel_mod_p(rows, p)
    squares = {x * x % p for x in range(p)}
    out = set()
    for s in product(range(p), repeat=len(basis)):
        y = [sum(si * b[i] for si, b in zip(s, basis)) % p for i in range(6)]
        if not any(y) or any(yi not in squares for yi in y):
            continue
        support = [i for i in range(6) if y[i]]
        if _rank_mod_p([[r[i] for r in rows] for i in support], p) < 3:
            lead = next(v for v in y if v)
            inv = pow(lead, -1, p)
            out.add(tuple(v * inv % p for v in y))
    return sorted(out)


def is_smooth_mod_p(forms: Sequence[QuadricForm], p: int) -> bool:
    return not singular_points_mod_p(forms, p)


def _kernel_mod_p(rows, p):
    rows = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(6):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    out = []
    for f in (c for c in range(6) if c not in pivots):
        vec = [0] * 6
        vec[f] = 1
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][f] % p
        out.append(vec)
    return out


def is_square_int(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


__all__ = [
    "KummerSpec", "QuadricForm", "build_equations", "coefficient_matrix", "count_points_mod_p",
    "fprime", "is_smooth_mod_p", "kernel_basis", "minors", "moment_sums", "on_surface",
    "is_square_int", "singular_points_mod_p",
]
