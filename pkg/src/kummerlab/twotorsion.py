"""2-torsion of split hyperelliptic Jacobians and square-class coordinates.

A Jacobian with all Weierstrass points rational has A[2] equal to the even
subsets of the root set modulo complementation.  Points are stored as bitmasks
over root indices; the canonical representative avoids the last root.  For an
elliptic curve y^2 = (x - c1)(x - c2)(x - c3) the last root is the point at
infinity, so T_i = {i, inf} is stored as the complementary pair of finite roots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

from . import f2
from .errors import DomainError
from .qfield import (INF, as_fraction, check_place, hilbert, is_local_square, local_bits,
                     local_dim, prime_support, sq_mul, sq_prod, squarefree_part, support_vector,
                     valuation)


@dataclass(frozen=True)
class RootConfig:
    """Distinct integer roots; ``infinite`` appends a formal root at infinity (g = 1)."""

    roots: tuple[int, ...]
    infinite: bool = False

    def __post_init__(self):
        roots = tuple(int(r) for r in self.roots)
        object.__setattr__(self, "roots", roots)
        if len(set(roots)) != len(roots):
            raise DomainError(f"roots are not distinct: {roots}")
        if self.size not in (4, 6):
            raise DomainError("expected 3 roots with infinity or 6 finite roots")

    @property
    def size(self) -> int:
        return len(self.roots) + (1 if self.infinite else 0)

    @property
    def genus(self) -> int:
        return (self.size - 2) // 2

    @property
    def disc(self) -> int:
        """d = prod_{i<j} (a_j - a_i) over the finite roots."""
        out = 1
        for i, j in combinations(range(len(self.roots)), 2):
            out *= self.roots[j] - self.roots[i]
        return out

    def points(self) -> list["TwoTorsionPoint"]:
        n = self.size
        half = 1 << (n - 1)
        return [TwoTorsionPoint(m, n) for m in range(half) if bin(m).count("1") % 2 == 0]

    def point(self, indices: Iterable[int]) -> "TwoTorsionPoint":
        mask = 0
        for i in indices:
            if not 0 <= i < self.size:
                raise DomainError(f"root index {i} out of range")
            mask ^= 1 << i
        return TwoTorsionPoint(mask, self.size)


@dataclass(frozen=True)
class TwoTorsionPoint:
    """Even subset of {0..n-1} modulo complement; bitmask without bit n-1."""

    mask: int
    n: int

    def __post_init__(self):
        if bin(self.mask).count("1") % 2:
            raise DomainError("2-torsion points are even subsets")
        if self.mask >> (self.n - 1) & 1:
            object.__setattr__(self, "mask", self.mask ^ ((1 << self.n) - 1))

    def __add__(self, other: "TwoTorsionPoint") -> "TwoTorsionPoint":
        _same(self, other)
        return TwoTorsionPoint(self.mask ^ other.mask, self.n)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.mask >> i & 1)

    def is_zero(self) -> bool:
        return self.mask == 0


def _same(p: TwoTorsionPoint, q: TwoTorsionPoint) -> None:
    if p.n != q.n:
        raise DomainError("2-torsion points live on different root sets")


def weil_pairing(p: TwoTorsionPoint, q: TwoTorsionPoint) -> int:
    """(-1)^{|S & T|}."""
    _same(p, q)
    return -1 if bin(p.mask & q.mask).count("1") % 2 else 1


def e2(p: TwoTorsionPoint, q: TwoTorsionPoint) -> int:
    """Weil pairing as an element of F2."""
    return 1 if weil_pairing(p, q) == -1 else 0


def default_basis(n: int) -> tuple[TwoTorsionPoint, ...]:
    """B_i = {i, n-1} for i < n - 2."""
    return tuple(TwoTorsionPoint((1 << i) | (1 << (n - 1)), n) for i in range(n - 2))


def point_coords(p: TwoTorsionPoint, basis: Sequence[TwoTorsionPoint]) -> int:
    """Mask m with p = sum of basis[j] over bits j of m."""
    m = f2.solve([b.mask for b in basis], p.mask)
    if m is None:
        raise DomainError("point is not in the span of the basis")
    return m


def dual_basis(basis: Sequence[TwoTorsionPoint]) -> tuple[TwoTorsionPoint, ...]:
    """B*_j with e(B_i, B*_j) = -1 exactly when i = j."""
    n = basis[0].n
    points = [TwoTorsionPoint(m, n) for m in range(1 << (n - 1)) if bin(m).count("1") % 2 == 0]
    out = []
    for j in range(len(basis)):
        for q in points:
            if all(e2(b, q) == (1 if i == j else 0) for i, b in enumerate(basis)):
                out.append(q)
                break
        else:
            raise DomainError("basis is degenerate for the Weil pairing")
    return tuple(out)


# ----------------------------------------------------------------- classes

@dataclass(frozen=True)
class BVector:
    """(b_0, ..., b_{n-1}) with square product, up to squares and a common scalar."""

    b: tuple[Fraction, ...]

    def __post_init__(self):
        b = tuple(as_fraction(x) for x in self.b)
        object.__setattr__(self, "b", b)
        if len(b) not in (4, 6):
            raise DomainError("a b-vector has 4 or 6 entries")
        if any(x == 0 for x in b):
            raise DomainError("b-vector entries must be nonzero")
        prod = Fraction(1)
        for x in b:
            prod *= x
        if squarefree_part(prod) != 1:
            raise DomainError("product of the b_i is not a square")

    @property
    def n(self) -> int:
        return len(self.b)

    def canonical(self) -> tuple[int, ...]:
        """Classes b_i * b_last, which removes the scalar ambiguity."""
        last = self.b[-1]
        return tuple(squarefree_part(x * last) for x in self.b)

    def __eq__(self, other):
        return isinstance(other, BVector) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def to_class(self, basis: Sequence[TwoTorsionPoint] | None = None) -> "CohClass":
        basis = tuple(basis) if basis is not None else default_basis(self.n)
        return CohClass(tuple(pair_h1(self, p) for p in basis), basis)


@dataclass(frozen=True)
class CohClass:
    """Element of H^1(Q, A[2]) via its canonical coordinates <beta, basis_j>."""

    coords: tuple[int, ...]
    basis: tuple[TwoTorsionPoint, ...] = field(default=())

    def __post_init__(self):
        coords = tuple(squarefree_part(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        basis = tuple(self.basis) if self.basis else default_basis(len(coords) + 2)
        object.__setattr__(self, "basis", basis)
        if len(basis) != len(coords):
            raise DomainError("coordinate count differs from basis size")
        if f2.rank(p.mask for p in basis) != len(basis):
            raise DomainError("basis points are dependent")

    @classmethod
    def zero(cls, n: int, basis=None) -> "CohClass":
        return cls((1,) * (n - 2), tuple(basis) if basis else ())

    @property
    def n(self) -> int:
        return self.basis[0].n

    def __mul__(self, other: "CohClass") -> "CohClass":
        other = other.rebase(self.basis)
        return CohClass(tuple(sq_mul(a, b) for a, b in zip(self.coords, other.coords)), self.basis)

    def is_zero(self) -> bool:
        return all(c == 1 for c in self.coords)

    def rebase(self, basis: Sequence[TwoTorsionPoint]) -> "CohClass":
        basis = tuple(basis)
        if basis == self.basis:
            return self
        return CohClass(tuple(pair_h1(self, p) for p in basis), basis)

    def to_bvector(self) -> BVector:
        n = self.n
        b = [pair_h1(self, TwoTorsionPoint((1 << i) | (1 << (n - 1)), n)) for i in range(n - 1)]
        return BVector(tuple(b) + (1,))

    def __eq__(self, other):
        if not isinstance(other, CohClass) or other.n != self.n:
            return False
        return other.rebase(self.basis).coords == self.coords

    def __hash__(self):
        return hash(self.rebase(default_basis(self.n)).coords)


ClassLike = Union[CohClass, BVector]


def pair_h1(beta: ClassLike, p: TwoTorsionPoint) -> int:
    """<beta, P> in Q*/Q*^2."""
    if isinstance(beta, BVector):
        if beta.n != p.n:
            raise DomainError("class and point live on different root sets")
        return squarefree_part(_prod(beta.b[i] for i in p.indices))
    if beta.n != p.n:
        raise DomainError("class and point live on different root sets")
    m = point_coords(p, beta.basis)
    return sq_prod(c for j, c in enumerate(beta.coords) if m >> j & 1)


def _prod(xs: Iterable[Fraction]) -> Fraction:
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


def _as_class(beta: ClassLike) -> CohClass:
    return beta.to_class() if isinstance(beta, BVector) else beta


def ratio_classes(beta: ClassLike) -> list[int]:
    """b_i / b_0 for i = 1..2g, i.e. <beta, {0, i}>."""
    n = beta.n
    return [pair_h1(beta, TwoTorsionPoint(1 | (1 << i), n)) for i in range(1, n - 1)]


def is_nondegenerate(beta: ClassLike) -> bool:
    classes = ratio_classes(beta)
    primes = prime_support(*classes) if classes else []
    return f2.rank(support_vector(c, primes) for c in classes) == len(classes)


def _odd_place(w) -> None:
    check_place(w)
    if w == 2 or w == INF:
        raise DomainError("criterion is only available at odd finite places")


def is_unramified_at(beta: ClassLike, w: int) -> bool:
    _odd_place(w)
    return all(valuation(c, w) % 2 == 0 for c in _as_class(beta).coords)


def local_is_trivial(beta: ClassLike, w: int) -> bool:
    _odd_place(w)
    return all(is_local_square(c, w) for c in _as_class(beta).coords)


def local_vector(beta: ClassLike, v) -> int:
    """Concatenated local bits of the canonical coordinates at v."""
    k = local_dim(v)
    out = 0
    for j, c in enumerate(_as_class(beta).coords):
        out |= local_bits(c, v) << (k * j)
    return out


# ------------------------------------------------------------ elliptic curves

def elliptic_roots(c: Sequence[int]) -> RootConfig:
    return RootConfig(tuple(c), infinite=True)


def torsion_point(i: int) -> TwoTorsionPoint:
    """T_i = (c_i, 0) as the subset {i, inf} of a 4-element root set."""
    if i not in (0, 1, 2):
        raise DomainError("elliptic 2-torsion index must be 0, 1 or 2")
    return TwoTorsionPoint((1 << i) | (1 << 3), 4)


def torsion_index(p: TwoTorsionPoint) -> int:
    """i with p = T_i; the identity has no index."""
    if p.n != 4 or p.is_zero():
        raise DomainError("not a nonzero elliptic 2-torsion point")
    (i,) = [j for j in range(3) if not p.mask >> j & 1]
    return i


def delta_x(c: Sequence[int], x: Fraction) -> tuple[int, int]:
    """(x - c1, x - c2) mod squares, with the degenerate coordinate replaced."""
    x = as_fraction(x)
    diffs = [x - ci for ci in c]
    out = []
    for i in range(2):
        if diffs[i] != 0:
            out.append(squarefree_part(diffs[i]))
        else:
            others = [c[i] - c[j] for j in range(3) if j != i]
            out.append(squarefree_part(others[0] * others[1]))
    return out[0], out[1]


def delta_torsion(c: Sequence[int], t: TwoTorsionPoint, d: int = 1) -> tuple[int, int]:
    """Image of T in (Q*/Q*^2)^2 on the twist y^2 = (x - d c1)(x - d c2)(x - d c3)."""
    if t.is_zero():
        raise DomainError("delta of the identity is trivial; use the zero class")
    if d == 0 or squarefree_part(d) != d:
        raise DomainError(f"twist parameter must be squarefree, got {d}")
    e = [d * ci for ci in c]
    if len(set(e)) != 3:
        raise DomainError("curve roots are not distinct")
    i = torsion_index(t)
    return delta_x(e, Fraction(e[i]))


def delta_class(c: Sequence[int], t: TwoTorsionPoint, d: int = 1) -> CohClass:
    if t.is_zero():
        return CohClass.zero(4)
    return CohClass(delta_torsion(c, t, d))


# --------------------------------------------------------------- cup product

def local_cup(alpha: ClassLike, beta: ClassLike, v) -> int:
    """Local invariant of alpha cup beta at v, as an element of F2."""
    alpha, beta = _as_class(alpha), _as_class(beta)
    if alpha.n != beta.n:
        raise DomainError("classes live on different root sets")
    beta = beta.rebase(alpha.basis)
    dual = dual_basis(alpha.basis)
    a = [pair_h1(alpha, q) for q in dual]
    b = [pair_h1(beta, q) for q in dual]
    out = 0
    for j, bj in enumerate(alpha.basis):
        for k, bk in enumerate(alpha.basis):
            if e2(bj, bk) and hilbert_f2(a[j], b[k], v):
                out ^= 1
    return out


def hilbert_f2(a, b, v) -> int:
    return 1 if hilbert(a, b, v) == -1 else 0


def cup_is_zero(alpha: ClassLike, beta: ClassLike) -> bool:
    alpha, beta = _as_class(alpha), _as_class(beta)
    primes = set(prime_support(*alpha.coords, *beta.coords)) | {2}
    return all(local_cup(alpha, beta, v) == 0 for v in sorted(primes) + [INF])
