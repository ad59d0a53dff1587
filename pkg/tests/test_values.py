"""Exact-arithmetic layer: Root values, comparisons, sums."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp

from clfmeasures.values import (
    DEFAULT_EPS,
    Root,
    as_float,
    exact_cmp,
    is_exact,
    root_value,
    scale,
    to_mpf,
    value_cmp,
    value_str,
    value_sum,
    values_equal,
    working_precision,
)


class TestRootValue:
    def test_perfect_square_collapses(self):
        assert root_value(1, 4, 2) == Fraction(2)
        assert root_value(Fraction(1, 2), Fraction(9, 16), 2) == Fraction(3, 8)

    def test_perfect_cube_collapses(self):
        assert root_value(2, 27, 3) == Fraction(6)

    def test_non_perfect_power_stays_root(self):
        v = root_value(Fraction(1, 3), 2, 2)
        assert isinstance(v, Root)
        assert v.coeff == Fraction(1, 3)
        assert v.radicand == Fraction(2)
        assert v.index == 2

    def test_zero_coeff_collapses(self):
        assert root_value(0, 5, 2) == Fraction(0)
        assert root_value(3, 0, 2) == Fraction(0)

    def test_index_one_multiplies_out(self):
        assert root_value(Fraction(2, 3), Fraction(5, 7), 1) == Fraction(10, 21)

    def test_negative_radicand_rejected(self):
        with pytest.raises(ValueError):
            root_value(1, -2, 2)

    def test_bad_index_rejected(self):
        with pytest.raises(ValueError):
            root_value(1, 2, 0)


class TestExactCmp:
    def test_sqrt2_vs_rational(self):
        r = root_value(1, 2, 2)
        assert exact_cmp(r, Fraction(7, 5)) > 0     # sqrt(2) > 1.4
        assert exact_cmp(r, Fraction(3, 2)) < 0     # sqrt(2) < 1.5
        assert exact_cmp(r, r) == 0

    def test_equal_across_representations(self):
        # (1/120)*sqrt(2400) == (1/6)*sqrt(6) == sqrt(1/6)
        a = root_value(Fraction(1, 120), 2400, 2)
        b = root_value(Fraction(1, 6), 6, 2)
        c = root_value(1, Fraction(1, 6), 2)
        assert exact_cmp(a, b) == 0
        assert exact_cmp(b, c) == 0

    def test_mixed_indices(self):
        # 2**(1/2) vs 2**(1/3): compare through lcm of indices
        sq = root_value(1, 2, 2)
        cb = root_value(1, 2, 3)
        assert exact_cmp(sq, cb) > 0

    def test_signs(self):
        neg = root_value(-1, 2, 2)
        pos = root_value(1, 2, 2)
        assert exact_cmp(neg, pos) < 0
        assert exact_cmp(neg, Fraction(0)) < 0
        assert exact_cmp(Fraction(0), pos) < 0

    @given(
        st.fractions(min_value=-3, max_value=3),
        st.fractions(min_value=-3, max_value=3),
    )
    def test_agrees_with_float_on_rationals(self, p, q):
        c = exact_cmp(p, q)
        f = (float(p) > float(q)) - (float(p) < float(q))
        # float comparison can only disagree by mapping to 0 on ties it
        # cannot resolve; these magnitudes are all exactly representable
        assert c == f


class TestValueCmp:
    def test_exact_path_ignores_eps(self):
        a = Fraction(1, 10**30)
        assert value_cmp(a, Fraction(0), eps=1.0) > 0

    def test_float_path_uses_eps(self):
        assert value_cmp(0.5, 0.5 + 1e-15) == 0
        assert value_cmp(0.5, 0.5 + 1e-9) < 0

    def test_root_vs_mpf(self):
        r = root_value(1, 2, 2)
        with mp.workdps(30):
            x = mpmath.sqrt(2)
        assert value_cmp(r, x) == 0

    def test_values_equal_default_eps(self):
        assert values_equal(Fraction(1, 3), Fraction(1, 3))
        assert not values_equal(Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10**13))
        assert values_equal(1 / 3, Fraction(1, 3), eps=1e-9)


class TestValueSum:
    def test_rationals_sum_exactly(self):
        terms = [Fraction(1, 3), Fraction(1, 6), 1]
        assert value_sum(terms) == Fraction(3, 2)

    def test_like_radicals_combine(self):
        a = root_value(Fraction(1, 2), 5, 2)
        b = root_value(Fraction(1, 3), 5, 2)
        s = value_sum([a, b])
        assert isinstance(s, Root)
        assert s.coeff == Fraction(5, 6)
        assert s.radicand == Fraction(5)

    def test_cancelling_roots_leave_rational(self):
        a = root_value(1, 7, 2)
        b = root_value(-1, 7, 2)
        s = value_sum([a, b, Fraction(2, 3)])
        assert s == Fraction(2, 3)

    def test_unlike_radicals_fall_back_to_float(self):
        s = value_sum([root_value(1, 2, 2), root_value(1, 3, 2)])
        assert not is_exact(s)
        with mp.workdps(30):
            expect = mpmath.sqrt(2) + mpmath.sqrt(3)
        assert values_equal(s, expect, eps=1e-25)

    def test_root_plus_rational_falls_back(self):
        s = value_sum([root_value(1, 2, 2), Fraction(1)])
        assert not is_exact(s)
        assert values_equal(s, 1 + 2**0.5, eps=1e-12)

    def test_empty_sum(self):
        assert value_sum([]) == Fraction(0)


class TestScale:
    def test_fraction(self):
        assert scale(Fraction(3, 4), Fraction(2, 3)) == Fraction(1, 2)

    def test_root(self):
        v = scale(root_value(1, 2, 2), Fraction(-1, 2))
        assert isinstance(v, Root)
        assert v.coeff == Fraction(-1, 2)

    def test_float(self):
        assert values_equal(scale(0.5, 2), 1.0)


class TestRenderings:
    def test_value_str_fraction(self):
        assert value_str(Fraction(7, 10)) == "7/10"
        assert value_str(Fraction(3)) == "3"

    def test_value_str_root(self):
        assert value_str(root_value(Fraction(1, 6), 6, 2)) == "(1/6)*sqrt(6)"
        assert "^(1/3)" in value_str(root_value(1, 2, 3))

    def test_as_float_avoids_intermediate_overflow(self):
        big = Fraction(10**400, 2 * 10**400)
        assert as_float(big) == 0.5

    def test_to_mpf_root(self):
        with mp.workdps(40):
            x = to_mpf(root_value(Fraction(1, 6), 6, 2))
            assert abs(x - 1 / mpmath.sqrt(6)) < mpmath.mpf(10) ** -38


class TestWorkingPrecision:
    def test_raises_low_ambient(self):
        with mp.workdps(10):
            with working_precision():
                assert mp.dps == 30

    def test_keeps_high_ambient(self):
        with mp.workdps(50):
            with working_precision():
                assert mp.dps == 50


@given(
    st.fractions(min_value=-2, max_value=2),
    st.integers(min_value=0, max_value=50),
    st.sampled_from([2, 3]),
)
def test_root_value_float_consistency(coeff, radicand, index):
    v = root_value(coeff, radicand, index)
    expect = float(coeff) * float(radicand) ** (1.0 / index)
    assert as_float(v) == pytest.approx(expect, abs=1e-12)
