"""Itemized check of the arithmetic hypotheses on (a, b, M)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..errors import DomainError
from ..qfield import is_local_square, is_prime, valuation
from ..twotorsion import is_nondegenerate, is_unramified_at, local_is_trivial
from .equations import KummerSpec

CONDITIONS = ("square-product", "nondegenerate", "odd-place", "integrality", "valuation",
              "unit", "nonsquare", "local-image")


@dataclass
class Item:
    condition: str
    ok: bool
    place: Optional[int] = None
    detail: str = ""


@dataclass
class HypothesisReport:
    spec: KummerSpec
    items: list[Item] = field(default_factory=list)

    @property
    def accept(self) -> bool:
        return all(i.ok for i in self.items)

    @property
    def failed(self) -> list[str]:
        out = []
        for i in self.items:
            if not i.ok and i.condition not in out:
                out.append(i.condition)
        return out


def check_hypotheses(spec: KummerSpec) -> HypothesisReport:
    """w_i = M[i-1] is paired with the root a_i (i = 1..5)."""
    if spec.M is None or len(spec.M) != 5:
        raise DomainError("hypothesis check needs M with exactly five places")
    rep = HypothesisReport(spec)
    add = rep.items.append
    square = spec.product_is_square
    add(Item("square-product", square, detail="" if square else "prod b_i is not a square"))
    ratios = [spec.b[i] / spec.b[0] for i in range(1, 6)]
    if square:
        nondeg = is_nondegenerate(spec.bvector)
        add(Item("nondegenerate", nondeg,
                 detail="" if nondeg else "b_1/b_0, ..., b_4/b_0 are dependent mod squares"))
    d = spec.d
    for i, w in enumerate(spec.M, start=1):
        if w == 2 or not is_prime(w):
            add(Item("odd-place", False, w, "not an odd prime"))
            continue
        add(Item("odd-place", True, w))
        integral = all(valuation(b, w) >= 0 for b in spec.b)
        add(Item("integrality", integral, w, "" if integral else "some b_j is not w-integral"))
        va, vd = valuation(spec.a[i] - spec.a[0], w), valuation(d, w)
        add(Item("valuation", va == 1 and vd == 1, w, f"val(a_{i} - a_0) = {va}, val(d) = {vd}"))
        bad = [j + 1 for j, r in enumerate(ratios) if valuation(r, w) != 0]
        add(Item("unit", not bad, w, f"b_j/b_0 not a unit for j in {bad}" if bad else ""))
        units = [r for r in ratios if valuation(r, w) == 0]
        nonsq = any(not is_local_square(r, w) for r in units) if units else False
        add(Item("nonsquare", nonsq, w, "" if nonsq else "every ratio is a square at w"))
        if square:
            beta = spec.bvector
            ok = is_unramified_at(beta, w) and not local_is_trivial(beta, w)
            add(Item("local-image", ok, w,
                     "" if ok else "class is ramified or locally trivial at w"))
    return rep


def ratio_classes(spec: KummerSpec) -> list[Fraction]:
    return [spec.b[i] / spec.b[0] for i in range(1, 6)]
