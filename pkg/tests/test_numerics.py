from fractions import Fraction as Q
import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import iv

from dslab import numerics
from dslab.numerics import Unresolved, certified_floor, exp_le, floor_ln, lt_ln


def mp_floor_ln(q):
    with mpmath.workdps(120):
        return int(mpmath.floor(mpmath.log(mpmath.mpf(q.numerator) / q.denominator)))


@pytest.mark.parametrize("q,j", [(Q(5, 16), -2), (Q(1), 0), (Q(3), 1), (Q(1, 3), -2), (Q(7, 1), 1), (Q(8), 2)])
def test_floor_ln_examples(q, j):
    assert floor_ln(q) == j


@given(st.integers(1, 10**30), st.integers(1, 10**30))
def test_floor_ln_matches_high_precision(a, b):
    assert floor_ln(Q(a, b)) == mp_floor_ln(Q(a, b))


def test_floor_ln_near_powers_of_e():
    for j in range(-30, 31):
        with mpmath.workdps(80):
            e = mpmath.exp(j)
            for bump in (-1, 0, 1):
                q = Q(int(mpmath.floor(e * 10**60)) + bump, 10**60)
                assert floor_ln(q) == mp_floor_ln(q)


def test_floor_ln_domain():
    with pytest.raises(ValueError):
        floor_ln(0)


def test_exp_le():
    assert exp_le(0, Q(1)) and not exp_le(0, Q(99, 100))
    assert exp_le(1, Q(272, 100)) and not exp_le(1, Q(271, 100))
    assert exp_le(-1, Q(37, 100)) and not exp_le(-1, Q(36, 100))


def test_lt_ln():
    assert lt_ln(Q(69, 100), 2) and not lt_ln(Q(70, 100), 2)
    assert not lt_ln(2, 7) and lt_ln(1, 3)


def test_certified_floor_needs_hint_for_exact_integers():
    fn = lambda: iv.log(iv.exp(iv.mpf(2)))
    with pytest.raises(Unresolved):
        certified_floor(fn)
    assert certified_floor(fn, exact_hint=lambda: Q(2)) == 2
    assert certified_floor(lambda: iv.log(iv.log(iv.mpf(256)))) == 1


def test_decimal():
    assert numerics.decimal(lambda: iv.mpf(1) / 3, 10) == "0.3333333333"
    assert numerics.decimal(lambda: iv.log(iv.log(iv.mpf(16))), 12).startswith("1.0197814")
    lo, hi = numerics.enclose(lambda: iv.exp(1), 200)
    with mpmath.workdps(100):
        e = mpmath.e
        assert mpmath.mpf(lo.numerator) / lo.denominator < e < mpmath.mpf(hi.numerator) / hi.denominator
    assert 0 < hi - lo < Q(1, 2**190)
