import cmath

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import cyclo_numbers
from zhcount.cyclo import CycloNumber


def close(a: complex, b: complex) -> bool:
    return abs(a - b) < 1e-9 * max(1.0, abs(a), abs(b))


def test_common_factor_two_cancels():
    x = CycloNumber([2, 0, 0, 0], 1, 2)
    assert x.coeffs == (1,) and x.denom_exp == 0 and x.ring_k == 0


def test_ring_relation_folds_high_powers():
    # omega**(2**K) written before reduction is -1
    assert CycloNumber([0, 0, 0, 0, 1], 0, 2) == CycloNumber.from_int(-1)


def test_sqrt2_squared_is_two():
    w = CycloNumber.root_of_unity(1, 2)
    winv = CycloNumber.root_of_unity(-1, 2)
    assert (w + winv) * (w + winv) == 2
    assert CycloNumber.sqrt2() == w + winv


def test_minimal_ring():
    i = CycloNumber.root_of_unity(4, 3)
    assert i.ring_k == 1
    assert (i * i).ring_k == 0


def test_root_of_unity_order():
    w = CycloNumber.root_of_unity(1, 3)
    assert w**16 == 1
    assert w**8 == -1


@pytest.mark.parametrize("e", range(-5, 6))
def test_pow_sqrt2(e):
    assert close(CycloNumber.pow_sqrt2(e).to_complex(), 2 ** (e / 2))


def test_negative_power_rejected():
    with pytest.raises(ValueError):
        CycloNumber.sqrt2() ** -1


def test_int_conversion():
    assert int(CycloNumber.from_int(-7)) == -7
    with pytest.raises(ValueError):
        int(CycloNumber.sqrt2())


def test_json_round_trip_at_wider_ring():
    x = CycloNumber([1, -2], 3, 1)
    obj = x.to_json(ring_k=3)
    assert len(obj["coeffs"]) == 8
    assert CycloNumber.from_json(obj) == x


@given(cyclo_numbers(), cyclo_numbers())
def test_add_mul_match_complex(a, b):
    assert close((a + b).to_complex(), a.to_complex() + b.to_complex())
    assert close((a * b).to_complex(), a.to_complex() * b.to_complex())
    assert close((a - b).to_complex(), a.to_complex() - b.to_complex())


@given(cyclo_numbers(), cyclo_numbers(), cyclo_numbers())
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(cyclo_numbers())
def test_divisions_invert(a):
    assert a.div_pow2(3) * 8 == a
    assert a.div_sqrt2() * CycloNumber.sqrt2() == a


@given(cyclo_numbers())
def test_canonical_form(a):
    # at most one representation: numerators not all even when a denominator is left
    if a.denom_exp:
        assert any(c % 2 for c in a.coeffs)
    if a.ring_k:
        assert any(a.coeffs[1::2])
    assert CycloNumber(a.coeffs_at(a.ring_k + 2), a.denom_exp, a.ring_k + 2) == a


@given(st.integers(-40, 40), st.integers(0, 4))
def test_roots_on_unit_circle(n, k):
    z = CycloNumber.root_of_unity(n, k).to_complex()
    assert close(z, cmath.exp(1j * cmath.pi * n / 2**k))
