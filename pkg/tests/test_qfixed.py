import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qalign import qfixed as qf


def test_positional_construction():
    assert qf.qfixed(8, 0, 65).as_fraction() == 65
    assert qf.qfixed(2, 3, 4).as_fraction() == Fraction(1, 2)
    assert qf.qfixed(10, 2, -125).as_fraction() == Fraction(-5, 4)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        qf.qfixed(1, 0, 3)
    with pytest.raises(ValueError):
        qf.qfixed(8, -1, 3)


def test_quantize_exact_cases():
    assert qf.quantize_real(0.5, 2, 3).mantissa == 4
    assert qf.quantize_real(1 / 3, 3, 2).mantissa == 3
    assert qf.quantize_real(1 / 3, 3, 2).as_fraction() == Fraction(1, 3)
    assert qf.quantize_real(0.3, 10, 1).mantissa == 3


def test_quantize_ties_away_from_zero():
    assert qf.quantize_real(Fraction(1, 2), 10, 0).mantissa == 1
    assert qf.quantize_real(Fraction(-1, 2), 10, 0).mantissa == -1


def test_quantize_rejects_non_finite():
    for bad in (math.inf, -math.inf, math.nan):
        with pytest.raises(ValueError):
            qf.quantize_real(bad, 8, 4)


def test_add_reconciles_precision():
    a = qf.qfixed(8, 0, 8)  # [1 0]_8
    b = qf.qfixed(8, 1, 1)  # [0.1]_8
    s = qf.add(a, b)
    assert s.as_fraction() == Fraction(65, 8)
    assert s.frac_digits == 1


def test_add_carry_across_positions():
    s = qf.add(qf.qfixed(8, 0, 7), qf.qfixed(8, 0, 1))
    assert qf.digit_at(s, 1) == 1
    assert qf.digit_at(s, 0) == 0


def test_base_mismatch_rejected():
    with pytest.raises(ValueError):
        qf.add(qf.qfixed(8, 0, 1), qf.qfixed(9, 0, 1))


def test_scale_by_power_shifts_digits():
    a = qf.qfixed(8, 0, 65)  # [1 0 1]_8
    shifted = qf.scale_by_power(a, -1)
    assert qf.render(shifted) == "[1 0.1]_8"
    assert qf.scale_by_power(a, 0) == a
    assert qf.scale_by_power(qf.scale_by_power(a, 3), -3) == a


def test_scale_by_int():
    assert qf.scale_by_int(qf.qfixed(9, 0, 2), 3).as_fraction() == 6
    a = qf.qfixed(8, 2, 37)
    assert qf.scale_by_int(a, 1) == a
    doubled = qf.scale_by_int(qf.qfixed(8, 0, 5), 2)
    assert qf.digit_at(doubled, 1) == 1
    assert qf.digit_at(doubled, 0) == 2


def test_digit_at_examples():
    a = qf.qfixed(8, 2, 3786)  # [7 3.1 2]_8
    assert qf.digit_at(a, 1) == 7
    assert qf.digit_at(a, 0) == 3
    assert qf.digit_at(a, -1) == 1
    assert all(qf.digit_at(qf.zero(8), i) == 0 for i in range(-4, 5))
    b = qf.qfixed(8, 0, 65)
    assert [qf.digit_at(b, i) for i in (2, 1, 0)] == [1, 0, 1]


def test_digit_at_rejects_negative():
    with pytest.raises(ValueError):
        qf.digit_at(qf.qfixed(8, 0, -1), 0)


def test_render_and_decimal():
    assert qf.render(qf.qfixed(8, 0, 65)) == "[1 0 1]_8"
    assert qf.render(qf.zero(8, 2)) == "[0.0 0]_8"
    assert qf.decimal_str(qf.qfixed(10, 2, -125)) == "-1.25"
    assert qf.decimal_str(qf.qfixed(2, 3, 4)) == "0.5"
    assert qf.decimal_str(qf.qfixed(3, 2, 3)) == "1/3"


qvals = st.integers(2, 16)
fvals = st.integers(0, 6)
mants = st.integers(-(10**12), 10**12)


@given(qvals, fvals, mants)
def test_digit_round_trip(Q, F, m):
    a = qf.qfixed(Q, F, abs(m))
    lo, hi = -F, abs(m).bit_length() + 1
    total = sum(
        Fraction(qf.digit_at(a, i)) * Fraction(Q) ** i for i in range(lo, hi + 1)
    )
    assert total == a.as_fraction()


@given(qvals, fvals, mants, st.integers(-5, 5), st.integers(-8, 8))
def test_shift_digit_commutation(Q, F, m, shift, i):
    a = qf.qfixed(Q, F, abs(m))
    assert qf.digit_at(qf.scale_by_power(a, shift), i) == qf.digit_at(a, i - shift)


@given(qvals, fvals, fvals, mants, mants)
def test_add_sub_round_trip(Q, Fa, Fb, ma, mb):
    a = qf.qfixed(Q, Fa, ma)
    b = qf.qfixed(Q, Fb, mb)
    assert qf.sub(qf.add(a, b), b) == a
    assert qf.add(a, -a).mantissa == 0
    assert qf.add(a, b).as_fraction() == a.as_fraction() + b.as_fraction()


@settings(max_examples=200)
@given(st.floats(-1e6, 1e6), qvals, fvals)
def test_quantize_error_bound(x, Q, F):
    got = qf.quantize_real(x, Q, F)
    assert abs(got.as_fraction() - Fraction(x)) <= Fraction(1, 2 * Q**F)
