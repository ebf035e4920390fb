"""2-structure certificates, the semi-direct decomposition and admissibility."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .. import f2
from ..errors import DomainError, StructureRejected
from ..qfield import INF, is_prime, prime_support, support_vector, valuation
from ..twotorsion import (CohClass, TwoTorsionPoint, delta_torsion, e2, is_unramified_at,
                          pair_h1, torsion_point)


@dataclass(frozen=True)
class PlaceCertificate:
    place: int
    pair: tuple[int, int]        # root indices whose difference has valuation 1
    point: TwoTorsionPoint       # P_w, the colliding pair as a 2-torsion point


@dataclass(frozen=True)
class TwoStructure:
    roots: tuple[int, ...]
    n: int                       # size of the root set (4 with infinity, or 6)
    certificates: tuple[PlaceCertificate, ...]
    extended: bool

    @property
    def places(self) -> tuple[int, ...]:
        return tuple(c.place for c in self.certificates)

    @property
    def genus(self) -> int:
        return (self.n - 2) // 2

    def point(self, w: int) -> TwoTorsionPoint:
        for c in self.certificates:
            if c.place == w:
                return c.point
        raise DomainError(f"{w} is not in the 2-structure")

    def basis_certificates(self) -> tuple[PlaceCertificate, ...]:
        """Certificates ordered by w; for an extended structure the largest w is dropped."""
        certs = sorted(self.certificates, key=lambda c: c.place)
        return tuple(certs[:-1] if self.extended else certs)

    def basis(self) -> tuple[TwoTorsionPoint, ...]:
        return tuple(c.point for c in self.basis_certificates())

    def nontrivial_image(self, q: TwoTorsionPoint, w: int) -> bool:
        """Whether q reduces to the nontrivial element of C_w/2C_w."""
        return e2(q, self.point(w)) == 1


def _certify_place(roots: Sequence[int], n: int, w) -> PlaceCertificate:
    if w == INF or not isinstance(w, int) or w == 2 or not is_prime(w):
        raise StructureRejected("odd-place", w, "2-structure places must be odd primes")
    hits = []
    for i, j in combinations(range(len(roots)), 2):
        val = valuation(roots[i] - roots[j], w)
        if val == 1:
            hits.append((i, j))
        elif val != 0:
            raise StructureRejected("valuation", w,
                                    f"root difference a{j} - a{i} has valuation {val}")
    if len(hits) != 1:
        raise StructureRejected("valuation", w,
                                f"{len(hits)} root pairs collide, expected exactly one")
    i, j = hits[0]
    return PlaceCertificate(w, (i, j), TwoTorsionPoint((1 << i) | (1 << j), n))


def check_two_structure(roots: Sequence[int], M: Sequence[int], extended: bool = False,
                        infinite: bool | None = None) -> TwoStructure:
    """Certify M as a (possibly extended) 2-structure by valuations of root differences.

    Three integer roots describe y^2 = (x - c1)(x - c2)(x - c3); six describe
    the genus 2 curve y^2 = prod (x - a_i).
    """
    roots = tuple(roots)
    if any(not isinstance(r, int) or isinstance(r, bool) for r in roots):
        raise StructureRejected("integrality", None, "roots must be integers")
    if len(set(roots)) != len(roots):
        raise DomainError("roots are not distinct")
    if infinite is None:
        infinite = len(roots) == 3
    n = len(roots) + (1 if infinite else 0)
    if n not in (4, 6):
        raise DomainError("expected 3 or 6 roots")
    g = (n - 2) // 2
    M = sorted(set(M), key=lambda w: (w == INF, w if w != INF else 0))
    want = 2 * g + (1 if extended else 0)
    if len(M) != want:
        raise StructureRejected("size", None, f"|M| = {len(M)}, expected {want}")
    certs = tuple(_certify_place(roots, n, w) for w in M)
    points = [c.point.mask for c in certs]
    subsets = combinations(range(len(certs)), 2 * g) if extended else [range(len(certs))]
    for sub in subsets:
        if f2.rank(points[i] for i in sub) != 2 * g:
            dropped = [certs[i].place for i in range(len(certs)) if i not in sub]
            raise StructureRejected("basis", None,
                                    "images in the component groups are dependent"
                                    + (f" after dropping {dropped}" if dropped else ""))
    return TwoStructure(roots, n, certs, extended)


# ------------------------------------------------------- elliptic helpers

def decompose(structure: TwoStructure, c: Sequence[int], beta: tuple[int, int]):
    """Write beta = gamma * delta(T) with gamma unramified over M.

    Returns (gamma, T).  Raises DomainError when no such decomposition exists.
    """
    if structure.n != 4:
        raise DomainError("decomposition is implemented for elliptic curves")
    found = []
    for t in [TwoTorsionPoint(0, 4)] + [torsion_point(i) for i in range(3)]:
        img = (1, 1) if t.is_zero() else delta_torsion(c, t)
        gamma = CohClass(beta) * CohClass(img)
        if all(is_unramified_at(gamma, w) for w in structure.places):
            found.append((gamma.coords, t))
    if len(found) != 1:
        raise DomainError(f"{len(found)} decompositions found, expected exactly one")
    return found[0]


@dataclass
class AdmissibilityResult:
    admissible: bool
    witness: dict | None = None


def _pairs_and_points(structures):
    """(factor index, w, P_w) for every place of every factor, sorted by w."""
    out = []
    for k, s in enumerate(structures):
        out += [(k, c.place, c.point) for c in s.basis_certificates()]
    return sorted(out, key=lambda t: t[1])


def is_admissible(curves: Sequence[Sequence[int]], structures: Sequence[TwoStructure],
                  alpha: Sequence[CohClass]) -> AdmissibilityResult:
    """Admissibility of alpha on the product of the elliptic curves.

    Variables f(w), h(w, u) over the 2-structure places.  The relation map sends
    them to prod <alpha,P_w>^f(w) prod <delta(P_w),P_u>^h(w,u) in Q*/Q*^2 and
    the sign map to prod <P_w,P_u>^h(w,u).  Admissible means the sign map
    vanishes on the kernel of the relation map.
    """
    if not (len(curves) == len(structures) == len(alpha)):
        raise DomainError("need one 2-structure and one class per curve")
    for c, s in zip(curves, structures):
        if s.n != 4 or tuple(s.roots) != tuple(c):
            raise DomainError("2-structure was not certified for this curve")
    places = _pairs_and_points(structures)
    classes = []   # (label, factor, class)
    signs = []
    for k, w, p in places:
        classes.append((("f", w), k, pair_h1(alpha[k], p)))
        signs.append(0)
    for kw, w, pw in places:
        for ku, u, pu in places:
            if kw == ku:
                cls = pair_h1(CohClass(delta_torsion(curves[kw], pw)), pu)
                sign = e2(pw, pu)
            else:
                cls, sign = 1, 0
            classes.append((("h", w, u), kw, cls))
            signs.append(sign)
    primes = prime_support(*[c for _, _, c in classes])
    images = [support_vector(c, primes) for _, _, c in classes]
    for mask in f2.kernel(images):
        if sum(signs[i] for i in range(len(signs)) if mask >> i & 1) % 2:
            f = {str(lab[1]): 1 for i, (lab, _, _) in enumerate(classes)
                 if mask >> i & 1 and lab[0] == "f"}
            h = {f"{lab[1]},{lab[2]}": 1 for i, (lab, _, _) in enumerate(classes)
                 if mask >> i & 1 and lab[0] == "h"}
            return AdmissibilityResult(False, {"f": f, "h": h})
    return AdmissibilityResult(True, None)
