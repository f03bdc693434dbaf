import pytest
from hypothesis import given
from hypothesis import strategies as st

from twodescent.arith import DomainError
from twodescent.classnum import (
    MAX_ABS_DISC,
    ClassMethod,
    biquad_estimate,
    fundamental_discriminant,
    fundamental_unit,
    h_by_ideals,
    h_quadratic,
    is_fundamental,
    reduced_definite_forms,
)
from twodescent.fieldcraft import BiquadField


@pytest.mark.parametrize("d", [-3, -4, -7, -8, -11, -19, -43, -67, -163])
def test_heegner_discriminants(d):
    # [DERIVED] the nine imaginary quadratic fields of class number one
    assert h_quadratic(d).h == 1


@pytest.mark.parametrize(
    "d,h",
    [
        (-4, 1),
        (-20, 2),
        (-23, 3),
        (-455, 20),  # [DERIVED] forms count, cross-checked by h_by_ideals
        (-92820, 128),  # [DERIVED] sympy-free form count; 4 * -23205
        (5, 1),
        (12, 1),
        (40, 2),
        (136, 2),  # [DERIVED] Q(sqrt 34): narrow 4, fundamental unit of norm +1
    ],
)
def test_known_class_numbers(d, h):
    assert h_quadratic(d).h == h


def test_real_subfield_51():
    data = h_quadratic(51, from_squarefree=True)
    # [DERIVED] Q(sqrt 51): d = 204, h = 2, narrow class number 4
    assert (data.d, data.h, data.narrow_h, data.method) == (204, 2, 4, ClassMethod.INDEFINITE)


def test_fundamental_discriminants():
    assert [d for d in range(-30, 30) if is_fundamental(d)] == [
        -24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17, 21, 24, 28, 29,
    ]
    assert fundamental_discriminant(-455) == -455
    assert fundamental_discriminant(51) == 204
    with pytest.raises(DomainError):
        fundamental_discriminant(12)
    with pytest.raises(DomainError):
        h_quadratic(-12)
    with pytest.raises(DomainError):
        h_quadratic(-4 * 2_500_003)  # beyond the enumeration limit
    assert MAX_ABS_DISC == 10**7


def test_definite_forms_shape():
    for a, b, c in reduced_definite_forms(-455):
        assert b * b - 4 * a * c == -455
        assert abs(b) <= a <= c


@pytest.mark.parametrize("d,unit", [(5, (0, 1)), (8, (1, 1)), (12, (2, 1)), (13, (1, 1))])
def test_fundamental_unit(d, unit):
    # eps = x + y w; w = (1 + sqrt d)/2 or sqrt(d/4)
    assert fundamental_unit(d) == unit


def test_ideals_agree_with_forms_up_to_500():
    # [DERIVED] two independent routes for every fundamental |d| <= 500
    ds = [d for d in range(-500, 501) if is_fundamental(d)]
    assert len(ds) == 306
    bad = [(d, h_quadratic(d).h, h_by_ideals(d)) for d in ds if h_quadratic(d).h != h_by_ideals(d)]
    assert bad == []


@given(st.integers(-20000, -3).filter(is_fundamental))
def test_ideals_agree_random_imaginary(d):
    # real fields beyond 500 are left out: the generator search grows with the regulator
    assert h_quadratic(d).h == h_by_ideals(d)


def test_biquad_candidates_p17():
    K = BiquadField(51, -455, -23205, False)
    est = biquad_estimate(K)
    assert (est.h1, est.h2, est.h3) == (2, 20, 128)
    # [PAPER] h(K) = 2560 for the p = 17 field
    assert est.candidates == (2560, 5120)
    assert 2560 in est.candidates and est.parity_even_certain


def test_biquad_real_and_partial():
    est = biquad_estimate(BiquadField(51, 5, 255, True))
    assert all(c % 1 == 0 for c in est.candidates) and len(est.candidates) >= 1
    with pytest.raises(DomainError):
        biquad_estimate(BiquadField(51, -455, -23205, False, factorization_complete=False))
