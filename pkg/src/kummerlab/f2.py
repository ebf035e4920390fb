"""Linear algebra over F2 with vectors packed into Python ints."""

from __future__ import annotations

from typing import Iterable, Sequence


class Echelon:
    """Reduced row-echelon basis of a subspace, keyed by pivot bit."""

    def __init__(self, vectors: Iterable[int] = ()):
        self.rows: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        for pivot, row in self.rows.items():
            if v >> pivot & 1:
                v ^= row
        return v

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        pivot = v.bit_length() - 1
        for p, row in self.rows.items():
            if row >> pivot & 1:
                self.rows[p] = row ^ v
        self.rows[pivot] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> list[int]:
        return [self.rows[p] for p in sorted(self.rows, reverse=True)]

    def elements(self) -> list[int]:
        out = [0]
        for b in self.basis():
            out += [x ^ b for x in out]
        return sorted(out)


def rank(vectors: Iterable[int]) -> int:
    return Echelon(vectors).dim


def kernel(images: Sequence[int]) -> list[int]:
    """Basis of {mask : XOR of images[i] over bits i of mask == 0}."""
    rows: dict[int, tuple[int, int]] = {}
    out = []
    for i, img in enumerate(images):
        combo = 1 << i
        for pivot in sorted(rows, reverse=True):
            if img >> pivot & 1:
                r_img, r_combo = rows[pivot]
                img ^= r_img
                combo ^= r_combo
        if img:
            rows[img.bit_length() - 1] = (img, combo)
        else:
            out.append(combo)
    return out


def solve(images: Sequence[int], target: int) -> int | None:
    """Some mask whose XOR of images equals target, or None."""
    rows: dict[int, tuple[int, int]] = {}
    for i, img in enumerate(images):
        combo = 1 << i
        for pivot in sorted(rows, reverse=True):
            if img >> pivot & 1:
                img ^= rows[pivot][0]
                combo ^= rows[pivot][1]
        if img:
            rows[img.bit_length() - 1] = (img, combo)
    combo = 0
    for pivot in sorted(rows, reverse=True):
        if target >> pivot & 1:
            target ^= rows[pivot][0]
            combo ^= rows[pivot][1]
    return combo if target == 0 else None


def intersection(a: Iterable[int], b: Iterable[int]) -> Echelon:
    """Intersection of span(a) and span(b)."""
    a, b = list(a), list(b)
    out = Echelon()
    for mask in kernel(a + b):
        v = 0
        for i, x in enumerate(a):
            if mask >> i & 1:
                v ^= x
        out.add(v)
    return out


def combine(mask: int, vectors: Sequence[int]) -> int:
    v = 0
    for i, x in enumerate(vectors):
        if mask >> i & 1:
            v ^= x
    return v
