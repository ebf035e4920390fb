import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kummerlab.errors import DomainError
from kummerlab.kummer.equations import (KummerSpec, build_equations, coefficient_matrix,
                                        count_points_mod_p, fprime, kernel_basis, minors,
                                        is_smooth_mod_p, moment_sums, on_surface,
                                        singular_points_mod_p)
from kummerlab.kummer.hypotheses import check_hypotheses
from kummerlab.kummer.search import search_point, search_points
from kummerlab.kummer.solubility import (GOOD_CUTOFF, bad_primes, els_places, is_els,
                                         local_solubility, verify_verdict)
from kummerlab.padic import diagonal_soluble
from kummerlab.qfield import INF, is_prime

A0 = (0, 1, 2, 3, 4, 5)
ONES = (1,) * 6
SIGNS = (-1, 1, -1, 1, -1, 1)
ACCEPTED = KummerSpec((0, 7, 11, 13, 17, 19), (1, 2, 3, 5, 23, 690), (7, 11, 13, 17, 19))

root_sets = st.lists(st.integers(-40, 40), min_size=6, max_size=6, unique=True)


def test_builder_example():
    forms = build_equations(KummerSpec(A0, ONES))
    assert fprime(A0) == [-120, 24, -12, 12, -24, 120]
    assert [f.coeffs for f in forms] == [(1, -5, 10, -10, 5, -1), (0, 1, -4, 6, -4, 1),
                                         (0, 1, -8, 18, -16, 5)]
    assert all(f(ONES) == 0 for f in forms)


def test_builder_matches_direct_arithmetic():
    # -120 * (1/f'(a_i)) and its a_i, a_i^2 multiples, reduced by content
    raw = [[Fraction(a**k, f) for a, f in zip(A0, fprime(A0))] for k in range(3)]
    want = [(-1, 5, -10, 10, -5, 1), (0, 5, -20, 30, -20, 5), (0, 5, -40, 90, -80, 25)]
    for r, w, f in zip(raw, want, build_equations(KummerSpec(A0, ONES))):
        ratio = {Fraction(x) / y for x, y in zip(r, w) if y}
        assert len(ratio) == 1
        g = math.gcd(*w)
        assert tuple(abs(c) for c in f.coeffs) == tuple(abs(c) // g for c in w)


@given(root_sets)
def test_moment_identities(a):
    assert moment_sums(a, 4) == [0] * 5
    assert moment_sums(a, 5)[5] == 1


@given(root_sets, st.integers(1, 30))
def test_square_scaling_invariant(a, s):
    b = (1, 2, 3, 5, 7, 11)
    f1 = build_equations(KummerSpec(a, b))
    f2 = build_equations(KummerSpec(a, tuple(s * s * x for x in b)))
    assert f1 == f2


@given(root_sets)
def test_square_b_gives_point(a):
    rng = random.Random(sum(a))
    r = [rng.randint(1, 9) for _ in range(6)]
    forms = build_equations(KummerSpec(a, tuple(x * x for x in r)))
    L = math.lcm(*r)
    assert on_surface(forms, tuple(L // x for x in r))


def test_kernel_basis_spans_solutions():
    for b in (ONES, SIGNS, ACCEPTED.b):
        forms = build_equations(KummerSpec(A0 if b != ACCEPTED.b else ACCEPTED.a, b))
        K = kernel_basis(forms)
        assert len(K) == 6 and len(K[0]) == 3
        for j in range(3):
            col = [K[i][j] for i in range(6)]
            assert all(sum(c * y for c, y in zip(f.coeffs, col)) == 0 for f in forms)


def brute_count(forms, p):
    count = 0
    for x in itertools.product(range(p), repeat=6):
        if any(x) and all(f(x) % p == 0 for f in forms):
            count += 1
    return count // (p - 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_point_count_matches_brute_force(p):
    a = (0, 1, 3, 4, 9, 10) if p != 3 else (0, 1, 2, 4, 5, 7)
    forms = build_equations(KummerSpec(a, (1, 2, 1, 1, 2, 1)))
    assert count_points_mod_p(forms, p) == brute_count(forms, p)


def test_point_counts_golden():
    forms = build_equations(KummerSpec(A0, ONES))
    assert [count_points_mod_p(forms, p) for p in (7, 11, 13)] == [160, 304, 392]


def _good_primes(specs, count, start=7):
    out = []
    p = start
    while len(out) < count:
        p += 1
        if not is_prime(p):
            continue
        if all(p not in bad_primes(s) for s in specs):
            out.append(p)
    return out


@pytest.mark.parametrize("u, t", [(1, 3), (-1, 0), (2, 5), (3, -7)])
def test_affine_substitution_preserves_point_counts(u, t):
    b = (1, 2, 3, 5, 23, 690)
    s1 = KummerSpec(A0, b)
    s2 = KummerSpec(tuple(u * x + t for x in A0), b)
    for p in _good_primes([s1, s2], 5):
        assert count_points_mod_p(build_equations(s1), p) == \
            count_points_mod_p(build_equations(s2), p), p


# ------------------------------------------------------------- hypotheses

def test_hypotheses_accept():
    rep = check_hypotheses(ACCEPTED)
    assert rep.accept and rep.failed == []


@pytest.mark.parametrize("spec, failed", [
    (KummerSpec(ACCEPTED.a, (1, 2, 3, 5, 30, 1), ACCEPTED.M), ["nondegenerate"]),
    (KummerSpec(ACCEPTED.a, (1, 2, 3, 5, 161, 4830), ACCEPTED.M), ["unit", "local-image"]),
    (KummerSpec(A0, (1, 2, 3, 5, 23, 690), (3, 5, 7, 11, 13)),
     ["valuation", "unit", "local-image"]),
])
def test_hypotheses_perturbations(spec, failed):
    rep = check_hypotheses(spec)
    assert not rep.accept and rep.failed == failed


def test_hypotheses_non_square_product():
    rep = check_hypotheses(KummerSpec(ACCEPTED.a, SIGNS, ACCEPTED.M))
    assert "square-product" in rep.failed


def test_hypotheses_need_m():
    with pytest.raises(DomainError):
        check_hypotheses(KummerSpec(A0, ONES))


def test_accepted_spec_is_extended_two_structure():
    from kummerlab.descent.structure import check_two_structure

    s = check_two_structure(ACCEPTED.a, ACCEPTED.M, extended=True)
    assert set(s.places) == set(ACCEPTED.M)


# ----------------------------------------------------------- solubility

def test_local_solubility_global_point():
    forms = build_equations(KummerSpec(A0, ONES))
    for v in (INF, 2, 3, 5, 101):
        verdict = local_solubility(forms, v)
        assert verdict.soluble and verdict.witness == ONES
        assert verify_verdict(forms, verdict)


def test_sign_spec_real_insoluble():
    forms = build_equations(KummerSpec(A0, SIGNS))
    verdict = local_solubility(forms, INF)
    assert not verdict.soluble
    assert all(c > 0 for c in verdict.certificate["combination"])
    # b_i and f'(a_i) have matching signs, so the first form is definite
    assert all(c > 0 for c in forms[0].coeffs)
    assert verify_verdict(forms, verdict)


@pytest.mark.parametrize("p, want", [(3, False), (5, True), (7, True), (11, True), (101, True)])
def test_sign_spec_padic(p, want):
    forms = build_equations(KummerSpec(A0, SIGNS))
    verdict = local_solubility(forms, p, try_global=False)
    assert verdict.soluble is want
    assert verify_verdict(forms, verdict)
    if p <= 5:
        assert diagonal_soluble(coefficient_matrix(forms), p)[0] is want


def test_els_places():
    places = els_places(ACCEPTED)
    assert places[0] == INF
    assert [p for p in places[1:] if p < GOOD_CUTOFF] == [2, 3, 5, 7, 11, 13, 17, 19]
    nums = [abs(m) for m in minors(build_equations(ACCEPTED)).values() if m]
    for p in places[1:]:
        assert p < GOOD_CUTOFF or any(n % p == 0 for n in nums) or ACCEPTED.d % p == 0


def test_is_els_examples():
    cert = is_els(KummerSpec(A0, ONES))
    assert cert.status == "els"
    assert all(v.certificate["kind"] == "global" for v in cert.verdicts)
    cert = is_els(KummerSpec(A0, SIGNS))
    assert cert.status == "not-els" and INF in cert.failing
    assert all(verify_verdict(cert.forms, v) for v in cert.verdicts)


@pytest.mark.slow
def test_is_els_accepted_spec_golden():
    cert = is_els(ACCEPTED)
    assert cert.status == "not-els"
    assert cert.bad_primes == [2, 3, 5, 7, 11, 13, 17, 19, 23]
    assert cert.failing == [2, 3, 5, 13, 17, 23]
    assert [v.place for v in cert.verdicts if v.soluble] == [INF, 7, 11, 19]
    assert all(verify_verdict(cert.forms, v) for v in cert.verdicts)
    rows = coefficient_matrix(cert.forms)
    assert diagonal_soluble(rows, 3)[0] is False
    assert diagonal_soluble(rows, 7)[0] is True


# ----------------------------------------------------------------- search

def planted_spec(a, x, h):
    """b_i = h(a_i) / x_i^2 scaled to integers, so x lies on the surface."""
    vals = [sum(c * ai**k for k, c in enumerate(h)) for ai in a]
    L = math.lcm(*[xi * xi for xi in x])
    return KummerSpec(a, tuple(v * L // (xi * xi) for v, xi in zip(vals, x)))


@pytest.mark.parametrize("x, h", [((1, 2, 1, 3, 1, 2), (1, 0, 1)), ((2, 1, 1, 1, 3, 1), (3, 1, 2)),
                                  ((1, 1, 2, 2, 1, 1), (5, -1, 1))])
def test_search_recovers_planted_point(x, h):
    spec = planted_spec((0, 1, 3, 4, 6, 9), x, h)
    forms = build_equations(spec)
    assert on_surface(forms, x)
    pts = search_points(forms, max(x))
    assert x in pts
    assert search_point(forms, max(x)) == pts[0]
    assert all(on_surface(forms, p) and math.gcd(*p) == 1 for p in pts)


def test_search_examples():
    assert search_point(build_equations(KummerSpec(A0, ONES)), 1) == ONES
    assert search_point(build_equations(KummerSpec(A0, SIGNS)), 6) is None
    with pytest.raises(DomainError):
        search_point(build_equations(KummerSpec(A0, ONES)), 0)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=6, max_size=6))
def test_search_matches_brute_force(x):
    spec = planted_spec((0, 1, 3, 4, 6, 9), tuple(x), (1, 1, 1))
    forms = build_equations(spec)
    brute = sorted(p for p in itertools.product(range(4), repeat=6)
                   if any(p) and math.gcd(*p) == 1 and all(f(p) == 0 for f in forms))
    assert search_points(forms, 3) == brute


def test_smooth_at_sampled_good_primes():
    for a, b in [((0, 1, 2, 3, 4, 5), (1,) * 6), ((0, 7, 11, 13, 17, 19), (1, 2, 3, 5, 23, 690))]:
        spec = KummerSpec(a, b)
        forms = build_equations(spec)
        good = [p for p in (7, 29, 31, 37) if p not in bad_primes(spec)]
        assert good
        for p in good:
            assert is_smooth_mod_p(forms, p)


def test_singular_points_match_brute_force_jacobian():
    forms = build_equations(KummerSpec((0, 1, 2, 3, 4, 5), (1,) * 6))
    for p in (3, 5, 7):
        found = set(singular_points_mod_p(forms, p))
        brute = set()
        for x in itertools.product(range(p), repeat=6):
            if not any(x) or any(f(x) % p for f in forms):
                continue
            jac = [[2 * c * xi % p for c, xi in zip(f.coeffs, x)] for f in forms]
            if _rank(jac, p) < 3:
                y = [xi * xi % p for xi in x]
                inv = pow(next(v for v in y if v), -1, p)
                brute.add(tuple(v * inv % p for v in y))
        assert found == brute


def _rank(m, p):
    m = [r[:] for r in m]
    rank = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(rank, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        for i in range(len(m)):
            if i != rank:
                f = m[i][c] * inv
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank
