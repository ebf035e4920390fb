import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kummerlab.errors import Undecided
from kummerlab.padic import (class_patterns, diagonal_soluble, hensel_certificate,
                             real_soluble, vp, zero_in_ball)
from kummerlab.qfield import hilbert, local_bits

from conftest import brute_hilbert


def test_vp():
    assert vp(48, 2) == 4
    assert vp(0, 3) == float("inf")


def _cover_values(forms, p, sample=2):
    """Classes met by forms on sample points of each ball, checked against the pattern."""
    for pattern, ball in class_patterns(forms, p):
        free = [i for i, s in enumerate(pattern) if s is None]
        if free:
            z = zero_in_ball([forms[i] for i in free], ball, p)
            assert all(sum(Fraction(c) * x for c, x in zip(forms[i], z)) == 0 for i in free)
        step = p**ball.level
        others = [r for r in range(len(ball.center)) if r != ball.chart]
        for digits in itertools.product(range(sample), repeat=len(others)):
            x = list(ball.center)
            for r, t in zip(others, digits):
                x[r] += t * step * (1 + t)
            for i, s in enumerate(pattern):
                val = sum(c * xi for c, xi in zip(forms[i], x))
                if s is not None and val != 0:
                    assert local_bits(val, p) == s, (forms[i], x, s)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_class_patterns_constant_on_balls(p):
    forms = [(1, 0), (1, -3), (1, -10), (0, 1)]
    _cover_values(forms, p)
    _cover_values([(1, 2, 0), (0, 1, -5), (3, 0, 1)], p)


def test_class_patterns_cap():
    with pytest.raises(Undecided):
        list(class_patterns([(1, -1), (1, -1 - 3**20)], 3, max_level=5))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_conic_solubility_matches_hilbert(p):
    for a in (-6, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 14):
        for b in (-5, -2, -1, 3, 7, 11):
            ok, x, cert = diagonal_soluble([[a, b, -1]], p)
            assert ok == (hilbert(a, b, p) == 1) == (brute_hilbert(a, b, p) == 1)
            if ok:
                assert hensel_certificate([[a, b, -1]], x, p) == cert


def test_real_soluble_both_ways():
    ok, y = real_soluble([[1, -1, 0], [0, 1, -2]])
    assert ok and all(v >= 0 for v in y) and any(y)
    ok, y = real_soluble([[1, -1, 1, -1], [1, 1, -1, -1]])
    assert ok and all(v >= 0 for v in y)
    ok, mu = real_soluble([[1, 1, 1, 1], [1, -1, 2, -3]])
    assert not ok and mu[0] > 0
    ok, mu = real_soluble([[1, 2, 1], [-3, 1, 1]])
    combo = [mu[0] * a + mu[1] * b for a, b in zip([1, 2, 1], [-3, 1, 1])]
    assert not ok and all(c > 0 for c in combo)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=2, max_size=2))
def test_real_soluble_certificates(rows):
    if any(all(c == 0 for c in col) for col in zip(*rows)):
        return
    try:
        ok, vec = real_soluble(rows)
    except Undecided:
        pytest.fail("real decision left undecided")
    if ok:
        assert any(vec) and all(v >= 0 for v in vec)
        assert all(sum(c * v for c, v in zip(r, vec)) == 0 for r in rows)
    else:
        combo = [sum(m * r[i] for m, r in zip(vec, rows)) for i in range(4)]
        assert all(c > 0 for c in combo)
