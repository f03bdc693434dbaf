"""Property suites; runnable on their own with ``pytest tests/test_properties.py``."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from points import C17, P17, combos
from twodescent.arith import class_mul, is_perfect_square, is_square_Ql, val
from twodescent.classnum import h_by_ideals, h_quadratic, is_fundamental
from twodescent.curve import INFINITY, RationalPoint, two_torsion, add, double_point, duplication_x, make_curve, mul, neg, on_curve
from twodescent.descent import SelmerPair, enumerate_QS2, pair_mul, phi, torsion_image
from twodescent.localsolve import HomSpace, check_witness, decide_local, pattern_admissible, places

PRIMES = [17, 113, 137, 53, 173]
classes17 = st.sampled_from(enumerate_QS2(C17))
pairs17 = st.builds(SelmerPair, classes17, classes17)


# ---------------------------------------------------------------- square classes


@given(classes17, classes17, classes17)
def test_class_mul_group_laws(a, b, c):
    assert class_mul(a, b) == class_mul(b, a)
    assert class_mul(class_mul(a, b), c) == class_mul(a, class_mul(b, c))
    assert class_mul(a, 1) == a
    assert class_mul(a, a) == 1
    assert class_mul(a, b) in enumerate_QS2(C17)


@given(st.integers(-10**6, 10**6).filter(bool), st.integers(-10**6, 10**6).filter(bool))
def test_class_mul_is_product_mod_squares(a, b):
    # ab / class_mul(a, b) is a positive rational square
    q = Fraction(a * b, class_mul(a, b))
    assert q > 0
    assert is_perfect_square(q.numerator) and is_perfect_square(q.denominator)


@given(pairs17, pairs17)
def test_torsion_image_is_a_subgroup(u, v):
    A = torsion_image(C17)
    for a in A:
        for b in A:
            assert pair_mul(a, b) in A
    assert pair_mul(pair_mul(u, v), v) == u


# ---------------------------------------------------------------- group law

pts = combos(C17, P17, n_max=2)


@given(pts, pts)
def test_commutative(P, Q):
    assert add(P, Q, C17) == add(Q, P, C17)


@given(pts, pts, pts)
def test_associative(P, Q, R):
    assert add(add(P, Q, C17), R, C17) == add(P, add(Q, R, C17), C17)


@given(pts)
def test_identity_and_inverse(P):
    assert add(P, INFINITY, C17) == P
    assert add(P, neg(P), C17) == INFINITY
    assert on_curve(P, C17)


@given(pts, pts)
def test_phi_homomorphism(P, Q):
    assert phi(add(P, Q, C17), C17) == pair_mul(phi(P, C17), phi(Q, C17))


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_scalar_mult_additive(m, n):
    assert add(mul(m, P17, C17), mul(n, P17, C17), C17) == mul(m + n, P17, C17)


# ---------------------------------------------------------------- duplication


@given(pts)
def test_duplication_formula(P):
    D = double_point(P, C17)
    assert D == add(P, P, C17)
    if not P.inf and P.s != 0:
        assert D.x == duplication_x(P, C17)


@pytest.mark.parametrize("p", PRIMES)
def test_duplication_on_each_curve(p):
    C = make_curve(p)
    for T in two_torsion(C):
        assert double_point(T, C) == INFINITY
    for a in C.roots:
        for b in C.roots:
            if a != b:
                # T1 + T2 = T3 in E[2]
                S = add(RationalPoint(a, 1, 0), RationalPoint(b, 1, 0), C)
                assert S.s == 0 and S.r not in (a, b)


# ---------------------------------------------------------------- witnesses


def _witness_cases():
    out = []
    for p in (17, 53):
        C = make_curve(p)
        for pr in [(1, 1), (3, p), (1, 3 * p), (10, -15 * p), (34, 1) if p == 17 else (2, 1), (5, 1), (6, p)]:
            out.append((p, SelmerPair(*pr)))
    return out


@pytest.mark.parametrize("p,pair", _witness_cases())
def test_witness_valuation_patterns(p, pair):
    H = HomSpace(pair, p)
    for l in places(p)[1:]:
        v = decide_local(H, l)
        if v.solvable:
            w = v.witness
            assert check_witness(H, l, w)
            assert pattern_admissible(H, l, w.pattern(l))
            z1, z2, z3 = w.z
            # the equations define z2^2 and z3^2 from z1 exactly, and those are l-adic squares
            t2 = (H.b1 * z1 * z1 - H.rhs1) / H.b2
            t3 = (H.b1 * z1 * z1 - H.rhs2) / (H.b1 * H.b2)
            assert t2 == 0 or is_square_Ql(t2, l)
            assert t3 == 0 or is_square_Ql(t3, l)
            if z2:
                assert 2 * val(z2, l) == val(t2, l)


@given(pairs17, st.sampled_from([2, 3, 5, 17]))
def test_random_witness_patterns(pair, l):
    H = HomSpace(pair, 17)
    v = decide_local(H, l)
    assert v.solvable is not None
    if v.solvable:
        assert check_witness(H, l, v.witness)
        assert pattern_admissible(H, l, v.witness.pattern(l))


# ---------------------------------------------------------------- class numbers


def test_class_numbers_forms_vs_ideals():
    ds = [d for d in range(-500, 501) if is_fundamental(d)]
    assert [d for d in ds if h_quadratic(d).h != h_by_ideals(d)] == []
