"""Local decision procedures over Q_p and R.

Two independent engines live here:

* :func:`class_patterns` covers P^{n-1}(Q_p) by p-adic balls on each of which
  every given integral linear form has a constant square class, or contains a
  zero of the form.  Descent and the Kummer solver read local images off the
  resulting patterns.
* :func:`diagonal_soluble` searches primitive solutions of a system of diagonal
  quadratic forms modulo p^k and stops at a Hensel certificate.  It never looks
  at square classes, so it serves as a cross-check of the first engine.

Both raise :class:`~kummerlab.errors.Undecided` rather than guess.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DomainError, Undecided
from .qfield import local_bits

FREE = None
MAX_LEVEL = 64


def vp(n: int, p: int) -> float:
    """p-adic valuation of an integer; infinity for 0."""
    if n == 0:
        return float("inf")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_frac(q: Fraction, p: int) -> float:
    if q == 0:
        return float("inf")
    return vp(q.numerator, p) - vp(q.denominator, p)


@dataclass(frozen=True)
class Ball:
    """Points of P^{n-1}(Q_p) with x_chart = 1 and x_r in center_r + p^level Z_p."""

    chart: int
    center: tuple[int, ...]
    level: int


def _initial_balls(n: int, p: int) -> list[Ball]:
    out = []
    for j in range(n):
        for tail in itertools.product(range(p), repeat=n - 1 - j):
            center = (0,) * j + (1,) + tail
            out.append(Ball(j, center, 1))
    return out


def _eval(form: Sequence[int], x: Sequence[int]) -> int:
    return sum(c * xi for c, xi in zip(form, x))


def _joint_zero(forms, ball: Ball, p: int) -> tuple[Fraction, ...] | None:
    """Common zero of the forms inside the ball (square systems only), or None."""
    free = [r for r in range(len(ball.center)) if r != ball.chart]
    if len(forms) != len(free):
        return None
    m = [[Fraction(f[r]) for r in free] for f in forms]
    rhs = [Fraction(-_eval(f, ball.center)) for f in forms]
    sol = _solve_square(m, rhs)
    if sol is None:
        return None
    if any(vp_frac(s, p) < ball.level for s in sol):
        return None
    point = [Fraction(c) for c in ball.center]
    for r, s in zip(free, sol):
        point[r] += s
    return tuple(point)


def _solve_square(m, rhs):
    n = len(m)
    a = [row[:] + [b] for row, b in zip(m, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col] / a[col][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _form_state(form, ball: Ball, p: int):
    """FREE, a determined local class (bits), or 'refine'."""
    value = _eval(form, ball.center)
    g = min((vp(form[r], p) for r in range(len(form)) if r != ball.chart),
            default=float("inf"))
    if g == float("inf"):
        if value == 0:
            raise DomainError("linear form vanishes identically on a chart")
        return local_bits(value, p)
    radius = ball.level + g
    m = vp(value, p)
    if m >= radius:
        return FREE
    need = 3 if p == 2 else 1
    if radius - m >= need:
        return local_bits(value, p)
    return "refine"


def class_patterns(forms: Sequence[Sequence[int]], p: int,
                   max_level: int = MAX_LEVEL) -> Iterator[tuple[tuple, Ball]]:
    """Yield (pattern, ball) over a finite cover of P^{n-1}(Q_p).

    ``pattern[i]`` is the local class bits of forms[i] on the ball, or FREE
    when the ball contains a zero of forms[i].  Whenever several forms are
    FREE, the ball contains a common zero of all of them and the map to
    (form values) is open there, so every combination of classes occurs.
    """
    forms = [tuple(int(c) for c in f) for f in forms]
    n = len(forms[0])
    stack = _initial_balls(n, p)[::-1]
    while stack:
        ball = stack.pop()
        states = [_form_state(f, ball, p) for f in forms]
        refine = any(s == "refine" for s in states)
        free = [i for i, s in enumerate(states) if s is FREE]
        if not refine and len(free) >= 2:
            refine = _joint_zero([forms[i] for i in free], ball, p) is None
        if not refine:
            yield tuple(states), ball
            continue
        if ball.level >= max_level:
            raise Undecided(p, f"class cover did not terminate by level {max_level}")
        step = p**ball.level
        free_coords = [r for r in range(n) if r != ball.chart]
        children = []
        for digits in itertools.product(range(p), repeat=len(free_coords)):
            c = list(ball.center)
            for r, t in zip(free_coords, digits):
                c[r] += t * step
            children.append(Ball(ball.chart, tuple(c), ball.level + 1))
        stack.extend(reversed(children))


def zero_in_ball(forms: Sequence[Sequence[int]], ball: Ball, p: int) -> tuple[Fraction, ...]:
    """A rational point of the ball on which every given form vanishes."""
    if len(forms) >= 2:
        pt = _joint_zero(forms, ball, p)
        if pt is None:
            raise DomainError("forms have no common zero in ball")
        return pt
    if not forms:
        return tuple(Fraction(c) for c in ball.center)
    form = forms[0]
    free = [r for r in range(len(form)) if r != ball.chart]
    r = min(free, key=lambda r: vp(form[r], p))
    point = [Fraction(c) for c in ball.center]
    point[r] -= Fraction(_eval(form, ball.center), form[r])
    return tuple(point)


# ------------------------------------------------------ diagonal quadrics

def _diag_value(row, x):
    return sum(c * xi * xi for c, xi in zip(row, x))


def _det(m):
    m = [[Fraction(x) for x in row] for row in m]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for i in range(col + 1, n):
            f = m[i][col] / m[col][col]
            m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def hensel_certificate(rows, x, p: int):
    """Columns S with v_p(det J_S(x)) = e and v_p(F(x)) >= 2e + 1 for all forms.

    J is the Jacobian of the diagonal forms at the integer vector x; such S
    certifies a Q_p-point near x (multivariate Hensel).  Returns (S, e) or None.
    """
    k = len(rows)
    vals = [vp(_diag_value(row, x), p) for row in rows]
    low = min(vals)
    best = None
    for cols in itertools.combinations(range(len(x)), k):
        if any(x[c] == 0 for c in cols):
            continue
        det = _det([[2 * row[c] * x[c] for c in cols] for row in rows])
        if det == 0:
            continue
        e = vp_frac(det, p)
        if low >= 2 * e + 1 and (best is None or e < best[1]):
            best = (cols, int(e))
    return best


def _primitive(row):
    """Row divided by its content; the zero set does not change."""
    row = tuple(int(c) for c in row)
    g = math.gcd(*row)
    return tuple(c // g for c in row) if g else row


def diagonal_soluble(rows: Sequence[Sequence[int]], p: int, max_level: int = 24):
    """Decide whether the diagonal quadrics sum_i rows[r][i] x_i^2 = 0 meet in P^{n-1}(Q_p).

    Returns (True, x, certificate) or (False, None, level at which the search
    tree died).  Exhaustive over primitive vectors modulo p^k.
    """
    rows = [_primitive(r) for r in rows]
    n = len(rows[0])
    for chart in range(n):
        level = 1
        nodes = []
        for tail in itertools.product(range(p), repeat=n - 1 - chart):
            x = (0,) * chart + (1,) + tail
            if all(_diag_value(r, x) % p == 0 for r in rows):
                nodes.append(x)
        while nodes:
            for x in nodes:
                cert = hensel_certificate(rows, x, p)
                if cert is not None:
                    return True, x, cert
            if level >= max_level:
                raise Undecided(p, f"diagonal search undecided at level {level}")
            mod = p ** (level + 1)
            step = p**level
            free = [r for r in range(n) if r != chart]
            nxt = []
            for x in nodes:
                for digits in itertools.product(range(p), repeat=len(free)):
                    y = list(x)
                    for r, t in zip(free, digits):
                        y[r] += t * step
                    if all(_diag_value(r, y) % mod == 0 for r in rows):
                        nxt.append(tuple(y))
            nodes = nxt
            level += 1
    return False, None, None


# ------------------------------------------------------------------ reals

def _kernel_vector(cols):
    """A nonzero rational vector spanning the kernel of the matrix with the given
    columns, or None when the kernel is not one-dimensional."""
    m = len(cols[0])
    n = len(cols)
    a = [[Fraction(cols[j][i]) for j in range(n)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    f = free[0]
    vec = [Fraction(0)] * n
    vec[f] = Fraction(1)
    for i, c in enumerate(pivots):
        vec[c] = -a[i][f] / a[i][c]
    return vec


def real_soluble(rows: Sequence[Sequence[int]]):
    """Decide real solubility of diagonal quadrics exactly.

    Returns (True, y) with y >= 0 a nonzero rational vector in the kernel of
    the coefficient matrix (so x_i = sqrt(y_i) is a real point), or
    (False, mu) with mu a rational combination of the forms whose
    coefficients are all strictly positive (a definite form).
    """
    rows = [[Fraction(c) for c in r] for r in rows]
    n = len(rows[0])
    rk = _rank(rows)
    for size in range(1, rk + 2):
        for support in itertools.combinations(range(n), size):
            vec = _kernel_vector([[row[j] for row in rows] for j in support])
            if vec is None:
                continue
            if all(v >= 0 for v in vec) or all(v <= 0 for v in vec):
                y = [Fraction(0)] * n
                sgn = 1 if any(v > 0 for v in vec) else -1
                for j, v in zip(support, vec):
                    y[j] = sgn * v
                return True, y
    mu = _positive_combination(rows)
    if mu is None:
        raise Undecided(float("inf"), "no real point and no definite combination found")
    return False, mu


def _rank(rows):
    a = [r[:] for r in rows]
    rk = 0
    ncols = len(a[0])
    for c in range(ncols):
        piv = next((i for i in range(rk, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        for i in range(len(a)):
            if i != rk and a[i][c] != 0:
                f = a[i][c] / a[rk][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rk])]
        rk += 1
    return rk


def _positive_combination(rows):
    """mu with sum_r mu_r rows[r][i] > 0 for every i, via extreme rays of the
    closed dual cone (intersections of coordinate hyperplanes).

    Only an independent subset of the rows is used, so the cone is pointed.
    """
    keep = []
    for r in range(len(rows)):
        if _rank([rows[i] for i in keep + [r]]) > len(keep):
            keep.append(r)
    if not keep:
        return None
    full = rows
    rows = [full[r] for r in keep]
    k = len(rows)
    n = len(rows[0])
    cols = [[rows[r][i] for r in range(k)] for i in range(n)]
    rays = []
    for support in itertools.combinations(range(n), k - 1):
        if k == 1:
            cands = [[Fraction(1)], [Fraction(-1)]]
        else:
            vec = _kernel_vector([[cols[i][r] for i in support] for r in range(k)])
            if vec is None:
                continue
            cands = [vec, [-v for v in vec]]
        for mu in cands:
            if all(sum(m * c for m, c in zip(mu, col)) >= 0 for col in cols):
                rays.append(mu)
    if not rays:
        return None
    mu = [sum(r[i] for r in rays) for i in range(k)]
    if all(sum(m * c for m, c in zip(mu, col)) > 0 for col in cols):
        out = [Fraction(0)] * len(full)
        for r, m in zip(keep, mu):
            out[r] = m
        return out
    return None
