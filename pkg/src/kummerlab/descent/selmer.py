"""2-Selmer groups and the Mazur-Rubin comparison under quadratic twist."""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import f2
from ..errors import DomainError, UncomparedPlace
from ..qfield import (INF, from_support_vector, local_dim, place_key, prime_support,
                      sq_mul, support_vector)
from ..twotorsion import CohClass
from .curve import EllipticCurveFull2, LocalSubspace, local_image, pair_vector

Pair = tuple[int, int]


@dataclass(frozen=True)
class SelmerGroup:
    curve: EllipticCurveFull2
    support: tuple[int, ...]  # -1 followed by primes
    basis: tuple[Pair, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def classes(self) -> list[CohClass]:
        return [CohClass(b) for b in self.basis]

    def __contains__(self, x: Pair) -> bool:
        primes = list(self.support[1:])
        k = len(primes) + 1
        try:
            v = _support_bits(x, primes, k)
        except DomainError:
            return False
        return v in f2.Echelon(_support_bits(b, primes, k) for b in self.basis)

    def elements(self) -> list[Pair]:
        out = [(1, 1)]
        for b in self.basis:
            out += [(sq_mul(x[0], b[0]), sq_mul(x[1], b[1])) for x in out]
        return out


def selmer_support(curve: EllipticCurveFull2) -> list[int]:
    return curve.bad_primes()


def _candidate_generators(primes: list[int]) -> list[Pair]:
    gens = [-1] + primes
    return [(g, 1) for g in gens] + [(1, g) for g in gens]


def selmer_group(curve: EllipticCurveFull2, d: int = 1, extra_primes=()) -> SelmerGroup:
    """2-Selmer group of the twist of ``curve`` by d.

    ``extra_primes`` widens the candidate support; the group must not change.
    """
    curve = curve.twist(d) if d != 1 else curve
    primes = sorted(set(selmer_support(curve)) | {int(p) for p in extra_primes})
    gens = _candidate_generators(primes)
    images = [0] * len(gens)
    shift = 0
    for v in primes + [INF]:
        W = local_image(curve, v).echelon
        width = 2 * local_dim(v)
        for i, g in enumerate(gens):
            images[i] |= W.reduce(pair_vector(g, v)) << shift
        shift += width
    basis = []
    for mask in f2.kernel(images):
        x = (1, 1)
        for i, g in enumerate(gens):
            if mask >> i & 1:
                x = (sq_mul(x[0], g[0]), sq_mul(x[1], g[1]))
        basis.append(x)
    k = len(primes) + 1
    ech = f2.Echelon(_support_bits(x, primes, k) for x in basis)
    basis = [_from_bits(b, primes, k) for b in ech.basis()]
    return SelmerGroup(curve, tuple([-1] + primes), tuple(basis))


def _support_bits(x: Pair, primes, k) -> int:
    return support_vector(x[0], primes) | (support_vector(x[1], primes) << k)


def _from_bits(bits: int, primes, k) -> Pair:
    mask = (1 << k) - 1
    return from_support_vector(bits & mask, primes), from_support_vector(bits >> k, primes)


# ------------------------------------------------------------- Mazur-Rubin

@dataclass
class PlaceComparison:
    place: object
    W: LocalSubspace
    W_twist: LocalSubspace
    U: LocalSubspace

    @property
    def dim_bar(self) -> int:
        return self.W.dim - self.U.dim


@dataclass
class MazurRubinReport:
    curve: EllipticCurveFull2
    d: int
    T: list
    r: int
    dim_V: int
    dim_V_twist: int
    places: list[PlaceComparison] = field(default_factory=list)
    dim_sel: int = 0
    dim_sel_twist: int = 0

    @property
    def gap(self) -> int:
        return self.r - self.dim_V - self.dim_V_twist

    @property
    def bound_holds(self) -> bool:
        return self.gap >= 0

    @property
    def parity_holds(self) -> bool:
        return self.gap % 2 == 0

    @property
    def ok(self) -> bool:
        return self.bound_holds and self.parity_holds


def comparison_places(curve: EllipticCurveFull2, d: int) -> list:
    primes = set(curve.bad_primes()) | set(prime_support(d)) | {2}
    return sorted(primes) + [INF]


def _localize(selmer: SelmerGroup, comps: list[PlaceComparison]) -> int:
    vectors = []
    for x in selmer.basis:
        vec, shift = 0, 0
        for comp in comps:
            v = comp.place
            vec |= comp.U.echelon.reduce(pair_vector(x, v)) << shift
            shift += 2 * local_dim(v)
        vectors.append(vec)
    return f2.rank(vectors)


def twist_report(curve: EllipticCurveFull2, d: int, T=None) -> MazurRubinReport:
    """Compare Selmer conditions of E and E^d on the places T.

    T defaults to the places where the conditions differ.  A place where they
    differ but which is missing from a supplied T raises UncomparedPlace.
    Places 2 and infinity are allowed in T.
    """
    twisted = curve.twist(d)
    comps = []
    differ = []
    for v in comparison_places(curve, d):
        W, Wd = local_image(curve, v), local_image(twisted, v)
        if W != Wd:
            differ.append(v)
        comps.append(PlaceComparison(v, W, Wd, W.intersection(Wd)))
    if T is None:
        T = differ
    else:
        T = sorted(set(T), key=place_key)
        for v in differ:
            if v not in T:
                raise UncomparedPlace(v)
    by_place = {c.place: c for c in comps}
    chosen = []
    for v in T:
        if v not in by_place:
            W, Wd = local_image(curve, v), local_image(twisted, v)
            by_place[v] = PlaceComparison(v, W, Wd, W.intersection(Wd))
        chosen.append(by_place[v])
    sel = selmer_group(curve)
    sel_d = selmer_group(twisted)
    r = sum(c.dim_bar for c in chosen)
    return MazurRubinReport(
        curve=curve, d=d, T=list(T), r=r,
        dim_V=_localize(sel, chosen),
        dim_V_twist=_localize(sel_d, chosen),
        places=chosen, dim_sel=sel.dim, dim_sel_twist=sel_d.dim,
    )
