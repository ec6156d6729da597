from fractions import Fraction as F
from math import comb, factorial

import pytest
from hypothesis import given, settings

from conftest import CATALOG, rationals
from probderange import probfamily as pf
from probderange.combinatorics import (
    derangement_deg_poly,
    derangement_poly,
    falling_deg,
    fubini_deg,
    stirling2,
    stirling2_deg,
)
from probderange.moments import MomentProfile, deg_rising_moment, raw_moment, shifted_deg_moment
from probderange.oracles import EvalPoint, oracle_value

ONE = MomentProfile.constant(1)
GAMMA23 = MomentProfile.gamma(2, 3)


def ctx(y=ONE, lam=F(1, 3), n_max=12):
    return pf.ProbContext(y, lam, n_max)


class TestContext:
    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            pf.ProbContext(ONE, 1, -1)

    def test_order_and_range(self):
        c = ctx(n_max=4)
        assert c.order == 5
        with pytest.raises(ValueError):
            pf.derange_prob(c, 5, 0)

    def test_rejects_float_lambda(self):
        with pytest.raises(TypeError):
            pf.ProbContext(ONE, 0.5)


class TestStirlingBellFubini:
    def test_constant_one_reduces(self):
        for lam in (F(1, 3), F(-3, 4)):
            c = ctx(lam=lam)
            for n in range(11):
                assert [pf.stirling2_prob(c, n, k) for k in range(n + 1)] == [
                    stirling2_deg(n, k, lam) for k in range(n + 1)
                ]

    def test_low_order(self):
        lam = F(2, 5)
        for y in CATALOG:
            c = ctx(y, lam)
            assert pf.stirling2_prob(c, 1, 1) == raw_moment(y, 1)
            assert pf.stirling2_prob(c, 2, 1) == raw_moment(y, 2) - lam * raw_moment(y, 1)
            assert pf.bell_prob(c, 0, F(5)) == 1
            assert pf.bell_prob(c, 1, F(3, 2)) == F(3, 2) * raw_moment(y, 1)
            assert pf.fubini_prob(c, 1, F(3, 2)) == F(3, 2) * raw_moment(y, 1)
            assert [pf.fubini_prob(c, n, 0) for n in range(5)] == [1, 0, 0, 0, 0]

    def test_classical_bell(self):
        c = ctx(lam=0)
        assert pf.bell_prob(c, 3, 1) == 5
        assert [pf.bell_prob(c, n, 1) for n in range(8)] == [sum(stirling2(n, k) for k in range(n + 1)) for n in range(8)]

    @settings(max_examples=10, deadline=None)
    @given(rationals(), rationals(-1, 1, nonzero=True))
    def test_fubini_reduction(self, x, lam):
        c = ctx(lam=lam)
        for n in range(11):
            assert pf.fubini_prob(c, n, x) == fubini_deg(n, x, lam)

    def test_stirling_bad_k(self):
        with pytest.raises(ValueError):
            pf.stirling2_prob(ctx(), 2, 3)


class TestEuler:
    def test_low_order(self):
        for y in CATALOG:
            c = ctx(y, F(3, 5))
            assert pf.euler_prob(c, 0) == 1
            assert pf.euler_prob(c, 1) == -raw_moment(y, 1) / 2

    def test_carlitz_lambda_one(self):
        c = ctx(lam=1)
        # 2/(2+t) = 1 - t/2 + t^2/4 - ...
        assert [pf.euler_prob(c, n) for n in range(4)] == [1, F(-1, 2), F(1, 2), F(-3, 4)]


class TestDerangements:
    def test_first_order(self):
        for y in CATALOG:
            assert pf.derange_prob(ctx(y), 1, F(2, 9)) == 1 + F(2, 9) - raw_moment(y, 1)
            assert pf.derange2_prob(ctx(y), 1, F(2, 9)) == F(2, 9) - raw_moment(y, 1)

    @settings(max_examples=10, deadline=None)
    @given(rationals(), rationals(-1, 1))
    def test_constant_one_reduces(self, x, lam):
        c = ctx(lam=lam)
        for n in range(13):
            assert pf.derange_prob(c, n, x) == derangement_deg_poly(n, x, lam)

    def test_constant_shift(self):
        x, lam = F(5, 6), F(-1, 4)
        for c_ in (F(3, 2), F(-2)):
            c = ctx(MomentProfile.constant(c_), lam)
            for n in range(11):
                assert pf.derange_prob(c, n, x) == derangement_deg_poly(n, x - c_ + 1, lam)

    def test_classical_limit(self):
        c = ctx(lam=0)
        for n in range(10):
            assert pf.derange_prob(c, n, F(1, 4)) == derangement_poly(n, F(1, 4))

    def test_recurrence_with_lambda(self):
        for y in CATALOG:
            c = ctx(y, F(2, 7))
            for n in range(1, 13):
                lhs = shifted_deg_moment(F(-4, 3), y, n, F(2, 7))
                assert lhs == pf.derange_prob(c, n, F(-4, 3)) - n * pf.derange_prob(c, n - 1, F(-4, 3))

    def test_dual_form(self):
        for y in CATALOG:
            c = ctx(y, F(-3, 8))
            for n in range(11):
                assert pf.derange_prob_dual(c, n, F(7, 5)) == pf.derange_prob(c, n, F(7, 5))


class TestRDerangements:
    def test_r_zero(self):
        for y in CATALOG:
            c = ctx(y, F(1, 6))
            for n in range(11):
                assert pf.derange_prob_r(c, 0, n) == pf.derange_prob(c, n, 0)

    def test_vanishing_and_unit(self):
        for y in CATALOG:
            c = ctx(y, F(1, 6))
            assert all(pf.derange_prob_r(c, 3, n) == 0 for n in range(3))
            assert pf.derange_prob_r(c, 1, 1) == 1

    def test_convolution_with_ordinary(self):
        lam = F(-1, 3)
        for y in CATALOG:
            c = ctx(y, lam)
            for r in (1, 2, 3):
                for n in range(r, 11):
                    rhs = factorial(n) * sum(
                        comb(l - 1, r - 1) * pf.derange_prob(c, n - l, 0) / factorial(n - l) for l in range(r, n + 1)
                    )
                    assert pf.derange_prob_r(c, r, n) == rhs

    def test_inversion(self):
        lam = F(3, 7)
        for y in CATALOG:
            c = ctx(y, lam, 14)
            for r in (0, 1, 2):
                for n in range(11):
                    rhs = factorial(n) * sum(
                        pf.derange_prob_r(c, r, k + r) / factorial(k + r) * (-1) ** k * comb(r + 1, n - k)
                        for k in range(n + 1)
                    )
                    assert deg_rising_moment(y, n, lam) == rhs

    def test_negative_r(self):
        with pytest.raises(ValueError):
            pf.derange_prob_r(ctx(), -1, 2)


class TestSecondKind:
    def test_at_one(self):
        for y in CATALOG:
            c = ctx(y, F(4, 5))
            for n in range(13):
                assert pf.derange2_prob(c, n, 1) == pf.derange_prob(c, n, 0)

    def test_recurrence(self):
        for y in CATALOG:
            c = ctx(y, F(-5, 6))
            for n in range(13):
                assert pf.derange2_prob_recurrence(c, n, F(3, 2)) == pf.derange2_prob(c, n, F(3, 2))


class TestClosedFormsAgainstOracles:
    CASES = [
        ("d_prob", lambda c, n, p: pf.derange_prob(c, n, p.x)),
        ("D_prob", lambda c, n, p: pf.derange2_prob(c, n, p.x)),
        ("fubini_prob", lambda c, n, p: pf.fubini_prob(c, n, p.x)),
        ("bell_prob", lambda c, n, p: pf.bell_prob(c, n, p.x)),
        ("euler_prob", lambda c, n, p: pf.euler_prob(c, n)),
        ("d_prob_r", lambda c, n, p: pf.derange_prob_r(c, p.r, n)),
    ]

    @pytest.mark.parametrize("def_id,closed", CASES, ids=[c[0] for c in CASES])
    def test_agree(self, def_id, closed):
        for i, y in enumerate(CATALOG):
            p = EvalPoint(F(-2, 3) + F(i, 5), F(7, 4) - F(i, 3), y, i % 4)
            c = pf.ProbContext(y, p.lam, 10)
            for n in range(11):
                assert closed(c, n, p) == oracle_value(def_id, p, n)

    def test_stirling_columns(self):
        for y in CATALOG[:6]:
            p = EvalPoint(F(5, 7), 0, y)
            c = pf.ProbContext(y, p.lam, 8)
            for n in range(9):
                for k in range(n + 1):
                    assert pf.stirling2_prob(c, n, k) == oracle_value("stirling2_prob", p, n, k)


def test_falling_helper_consistency():
    # E[(S_j)_{n,lam}] for Y = 1 is (j)_{n,lam}, which drives the reduction above
    c = ctx(lam=F(1, 2))
    row = [pf.stirling2_prob(c, 4, k) for k in range(5)]
    assert sum(row[k] * falling_deg(3, k, 1) for k in range(5)) == falling_deg(3, 4, F(1, 2))
