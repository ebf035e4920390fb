"""Elliptic curves with full rational 2-torsion and their local Selmer conditions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .. import f2
from ..errors import DomainError, Undecided
from ..padic import class_patterns
from ..qfield import (INF, check_place, format_place, hilbert, local_bits, local_dim,
                      local_rep, prime_support, squarefree_part)
from ..twotorsion import delta_torsion, delta_x, torsion_point

Pair = tuple[int, int]


@dataclass(frozen=True)
class EllipticCurveFull2:
    """y^2 = (x - d c1)(x - d c2)(x - d c3), the twist by d of the curve with roots c."""

    c: tuple[int, int, int]
    d: int = 1

    def __post_init__(self):
        c = tuple(int(x) for x in self.c)
        if len(c) != 3:
            raise DomainError("an elliptic curve needs exactly three roots")
        if len(set(c)) != 3:
            raise DomainError(f"roots are not distinct: {c}")
        d = int(self.d)
        if d == 0 or squarefree_part(d) != d:
            raise DomainError(f"twist parameter must be a squarefree integer, got {d}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def roots(self) -> tuple[int, int, int]:
        return tuple(self.d * x for x in self.c)

    def twist(self, d: int) -> "EllipticCurveFull2":
        return EllipticCurveFull2(self.c, squarefree_part(self.d * d))

    @property
    def root_differences(self) -> int:
        e = self.roots
        return (e[0] - e[1]) * (e[0] - e[2]) * (e[1] - e[2])

    @property
    def discriminant(self) -> int:
        return 16 * self.root_differences**2

    def bad_primes(self) -> list[int]:
        """Primes of bad reduction of this model, with 2 always included."""
        return sorted(set(prime_support(self.root_differences)) | {2})

    def torsion_images(self) -> list[Pair]:
        return [delta_torsion(self.c, torsion_point(i), self.d) for i in range(3)]


# -------------------------------------------------------- local subspaces

def pair_vector(x: Pair, v) -> int:
    k = local_dim(v)
    return local_bits(x[0], v) | (local_bits(x[1], v) << k)


def vector_pair(bits: int, v) -> Pair:
    k = local_dim(v)
    mask = (1 << k) - 1
    return local_rep(bits & mask, v), local_rep(bits >> k, v)


@dataclass(frozen=True)
class LocalSubspace:
    """F2-subspace of H^1(Q_v, E[2]) = (Q_v*/Q_v*^2)^2, stored as packed local bits."""

    place: object
    vectors: tuple[int, ...]
    closed: bool = True

    @property
    def ambient_dim(self) -> int:
        return 2 * local_dim(self.place)

    @property
    def echelon(self) -> f2.Echelon:
        return f2.Echelon(self.vectors)

    @property
    def dim(self) -> int:
        return self.echelon.dim

    @property
    def basis(self) -> list[Pair]:
        return [vector_pair(b, self.place) for b in self.echelon.basis()]

    def __contains__(self, x: Pair) -> bool:
        return pair_vector(x, self.place) in self.echelon

    def elements(self) -> list[Pair]:
        return [vector_pair(b, self.place) for b in self.echelon.elements()]

    def intersection(self, other: "LocalSubspace") -> "LocalSubspace":
        return LocalSubspace(self.place, tuple(f2.intersection(self.vectors, other.vectors).basis()))

    def is_isotropic(self) -> bool:
        basis = self.basis
        return all(local_pairing(x, y, self.place) == 0 for x in basis for y in basis)

    def is_maximal_isotropic(self) -> bool:
        return self.is_isotropic() and 2 * self.dim == self.ambient_dim

    def unramified_part(self) -> "LocalSubspace":
        """Elements whose coordinates both have even valuation (odd finite places)."""
        v = self.place
        if v == INF or v == 2:
            raise DomainError("unramified part is only defined at odd places")
        # bit 0 of each coordinate block is the valuation parity
        val_mask = 1 | (1 << 2)
        images = [b & val_mask for b in self.vectors]
        out = f2.Echelon()
        for mask in f2.kernel(images):
            out.add(f2.combine(mask, self.vectors))
        return LocalSubspace(v, tuple(out.basis()))

    def __eq__(self, other):
        return (isinstance(other, LocalSubspace) and self.place == other.place
                and sorted(self.echelon.basis()) == sorted(other.echelon.basis()))

    def __hash__(self):
        return hash((self.place, tuple(sorted(self.echelon.basis()))))

    def label(self) -> str:
        return format_place(self.place)


def local_pairing(x: Pair, y: Pair, v) -> int:
    """Local cup product through the Weil pairing, in F2."""
    if 0 in x or 0 in y:
        raise DomainError("local pairing of a zero entry")
    s = hilbert(x[0], y[1], v) * hilbert(x[1], y[0], v)
    return 1 if s == -1 else 0


def local_image(curve: EllipticCurveFull2, v) -> LocalSubspace:
    """delta(E(Q_v)) inside (Q_v*/Q_v*^2)^2."""
    check_place(v)
    return _local_image(curve.roots, v)


@lru_cache(maxsize=None)
def _local_image(roots: tuple[int, int, int], v) -> LocalSubspace:
    realized = {0}
    for i in range(3):
        realized.add(pair_vector(delta_x(roots, Fraction(roots[i])), v))
    if v == INF:
        realized |= _real_image(roots)
    else:
        realized |= _padic_image(roots, v)
    ech = f2.Echelon(realized)
    closed = len(realized) == 1 << ech.dim
    return LocalSubspace(v, tuple(ech.basis()), closed)


def _real_image(roots) -> set[int]:
    r1, r2, r3 = sorted(roots)
    out = set()
    for x in (Fraction(r1 + r2, 2), Fraction(r3 + 1)):
        out.add(pair_vector(delta_x(roots, x), INF))
    return out


def _padic_image(roots, p: int) -> set[int]:
    k = local_dim(p)
    forms = [(1, -e) for e in roots] + [(0, 1)]
    out = set()
    for pattern, _ball in class_patterns(forms, p):
        free = [i for i, s in enumerate(pattern) if s is None]
        known = 0
        for s in pattern:
            if s is not None:
                known ^= s
        s = list(pattern)
        if free:
            if len(free) > 1:
                raise Undecided(p, "two roots meet in one ball")
            s[free[0]] = known
        elif known:
            continue
        out.add((s[0] ^ s[3]) | ((s[1] ^ s[3]) << k))
    return out


def condition_places(curve: EllipticCurveFull2) -> list:
    return curve.bad_primes() + [INF]


def torsion_pairs(curve: EllipticCurveFull2):
    """(T_i, delta(T_i)) for the three nonzero 2-torsion points."""
    return [(torsion_point(i), img) for i, img in enumerate(curve.torsion_images())]

