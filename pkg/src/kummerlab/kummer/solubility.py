"""Local solubility of the quadric intersection and ELS certificates.

A point of the surface is the same as s in Q_v^3 with y = K s having every
entry a square, where the columns of K span the kernel of the coefficient
matrix.  Over Q_p that means: up to a common scalar, every nonzero y_i lies
in one square class.  The ball cover of P^2(Q_p) from :mod:`kummerlab.padic`
decides this exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..errors import DomainError, Undecided
from ..padic import class_patterns, hensel_certificate, real_soluble, vp, zero_in_ball
from ..qfield import (INF, format_place, local_rep, prime_support, primes_up_to,
                      sqrt_mod_prime_power)
from .equations import (KummerSpec, QuadricForm, build_equations, coefficient_matrix,
                        kernel_basis, minors, on_surface)
from .search import search_point

# For p >= GOOD_CUTOFF of good reduction, #X(F_p) >= p^2 + 1 - 22 p > 0 (K3 surface,
# b_2 = 22), and a smooth F_p-point lifts by Hensel's lemma.
GOOD_CUTOFF = 23
MAX_PRECISION = 200


@dataclass
class LocalVerdict:
    place: object
    soluble: bool
    witness: Optional[tuple[int, ...]] = None
    precision: Optional[int] = None      # witness is correct modulo p^precision; None = exact
    squares: Optional[tuple[int, ...]] = None   # real witness: x_i = sqrt(squares_i)
    reason: str = ""
    certificate: dict = field(default_factory=dict)


def _global(forms, H=1):
    return search_point(forms, H)


def local_solubility(forms: Sequence[QuadricForm], v, try_global: bool = True) -> LocalVerdict:
    """Decide whether the intersection has a Q_v-point, with a checkable witness."""
    forms = tuple(forms)
    if try_global:
        pt = _global(forms)
        if pt is not None:
            return LocalVerdict(v, True, pt, None, reason="rational point",
                                certificate={"kind": "global"})
    if v == INF:
        return _real(forms)
    return _padic(forms, v)


def _real(forms) -> LocalVerdict:
    rows = coefficient_matrix(forms)
    ok, vec = real_soluble(rows)
    if ok:
        den = 1
        for y in vec:
            den = den * y.denominator // math.gcd(den, y.denominator)
        ys = tuple(int(y * den) for y in vec)
        return LocalVerdict(INF, True, squares=ys, reason="nonnegative kernel vector",
                            certificate={"kind": "real-squares"})
    den = 1
    for m in vec:
        den = den * m.denominator // math.gcd(den, m.denominator)
    mu = [int(m * den) for m in vec]
    combo = [sum(m * r[i] for m, r in zip(mu, rows)) for i in range(6)]
    return LocalVerdict(INF, False, reason="a combination of the forms is positive definite",
                        certificate={"kind": "definite", "multipliers": mu, "combination": combo})


def _padic(forms, p: int) -> LocalVerdict:
    K = kernel_basis(forms)
    balls = 0
    for pattern, ball in class_patterns(K, p):
        balls += 1
        classes = {s for s in pattern if s is not None}
        if len(classes) != 1:
            continue
        (cls,) = classes
        free = [i for i, s in enumerate(pattern) if s is None]
        s_pt = zero_in_ball([K[i] for i in free], ball, p)
        y = [sum(Fraction(k) * si for k, si in zip(row, s_pt)) for row in K]
        t = local_rep(cls, p)
        x, prec, cert = _lift(forms, [t * yi for yi in y], p)
        return LocalVerdict(p, True, x, prec, reason="consistent square classes on a p-adic ball",
                            certificate=cert)
    return LocalVerdict(p, False, reason="no ball of the cover carries one square class",
                        certificate={"kind": "ball-cover", "balls": balls})


def _padic_sqrt(u: Fraction, p: int, prec: int) -> tuple[int, int]:
    """(e, r) with u = p^(2e) * r^2 modulo p^(2e + prec), r a unit."""
    num, den = u.numerator, u.denominator
    v = int(vp(num, p) - vp(den, p))
    if v % 2:
        raise DomainError("value is not a p-adic square")
    num //= p ** int(vp(num, p))
    den //= p ** int(vp(den, p))
    mod = p**prec
    r = sqrt_mod_prime_power(num * den % mod, p, prec) * pow(den, -1, mod) % mod
    return v // 2, r


def _lift(forms, u: list[Fraction], p: int):
    """Integer vector approximating sqrt(u_i) with a Hensel certificate."""
    rows = coefficient_matrix(forms)
    prec = 8
    while prec <= MAX_PRECISION:
        parts = [None if ui == 0 else _padic_sqrt(ui, p, prec) for ui in u]
        emin = min(e for e, _ in (q for q in parts if q is not None))
        x = tuple(0 if q is None else p ** (q[0] - emin) * q[1] for q in parts)
        cert = hensel_certificate(rows, x, p)
        if cert is not None:
            cols, e = cert
            return x, prec, {"kind": "hensel", "columns": list(cols), "det_valuation": e,
                             "residual_valuation": min(_val(r, x, p) for r in rows)}
        prec *= 2
    raise Undecided(p, "Hensel certificate not reached within the precision ceiling")


def _val(row, x, p):
    v = vp(sum(c * xi * xi for c, xi in zip(row, x)), p)
    return "inf" if v == float("inf") else int(v)


def verify_verdict(forms: Sequence[QuadricForm], verdict: LocalVerdict) -> bool:
    """Re-check a witness or an insolubility certificate independently."""
    rows = coefficient_matrix(forms)
    kind = verdict.certificate.get("kind")
    if not verdict.soluble:
        if kind == "definite":
            mu = verdict.certificate["multipliers"]
            combo = [sum(m * r[i] for m, r in zip(mu, rows)) for i in range(6)]
            return all(c > 0 for c in combo)
        if kind == "ball-cover":
            return not _padic(forms, verdict.place).soluble
        return False
    if kind == "global":
        return on_surface(forms, verdict.witness)
    if kind == "real-squares":
        ys = verdict.squares
        return any(ys) and all(y >= 0 for y in ys) and all(
            sum(c * y for c, y in zip(r, ys)) == 0 for r in rows)
    if kind == "hensel":
        cert = hensel_certificate(rows, verdict.witness, verdict.place)
        return cert is not None
    return False


# ---------------------------------------------------------------- ELS

@dataclass
class SolubilityCertificate:
    spec: KummerSpec
    forms: tuple[QuadricForm, ...]
    verdicts: list[LocalVerdict]
    bad_primes: list[int]
    cutoff: int = GOOD_CUTOFF
    undecided: list = field(default_factory=list)
    assumption: str = (
        f"every odd prime p >= {GOOD_CUTOFF} not listed has good reduction; the reduction is a "
        "smooth K3 surface with at least p^2 + 1 - 22p > 0 points over F_p, and a smooth point "
        "lifts to Q_p by Hensel's lemma"
    )

    @property
    def status(self) -> str:
        if self.undecided:
            return "undecided"
        return "els" if all(v.soluble for v in self.verdicts) else "not-els"

    @property
    def els(self) -> Optional[bool]:
        return None if self.undecided else all(v.soluble for v in self.verdicts)

    @property
    def failing(self) -> list:
        return [v.place for v in self.verdicts if not v.soluble]


def bad_primes(spec: KummerSpec, forms=None) -> list[int]:
    """2, primes of d and of the b_i, and primes dividing any 3x3 minor."""
    forms = forms or build_equations(spec)
    nums = [spec.d] + [b.numerator for b in spec.b] + [b.denominator for b in spec.b]
    nums += [m for m in minors(forms).values()]
    nums = [abs(n) for n in nums if n not in (0, 1, -1)]
    return sorted(set(prime_support(*nums)) | {2}) if nums else [2]


def els_places(spec: KummerSpec, forms=None) -> list:
    bad = bad_primes(spec, forms)
    small = [p for p in primes_up_to(GOOD_CUTOFF - 1) if p != 2]
    return [INF] + sorted(set(bad) | set(small))


def is_els(spec: KummerSpec) -> SolubilityCertificate:
    forms = build_equations(spec)
    bad = bad_primes(spec, forms)
    verdicts = []
    undecided = []
    glob = _global(forms)
    for v in els_places(spec, forms):
        if glob is not None:
            verdicts.append(LocalVerdict(v, True, glob, None, reason="rational point",
                                         certificate={"kind": "global"}))
            continue
        try:
            verdicts.append(local_solubility(forms, v, try_global=False))
        except Undecided:
            undecided.append(v)
    return SolubilityCertificate(spec, forms, verdicts, bad, undecided=undecided)


def describe(verdict: LocalVerdict) -> str:
    state = "soluble" if verdict.soluble else "insoluble"
    return f"{format_place(verdict.place)}: {state} ({verdict.reason})"
