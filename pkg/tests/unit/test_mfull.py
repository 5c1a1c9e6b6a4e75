"""Tests for m-full integers, their constants and identities."""

from fractions import Fraction

import mpmath
import pytest

from campana_cli.core.rationals import to_mpf
from campana_cli.errors import BoundTooLargeError, NonSquarefreeError, PreconditionError
from campana_cli.mfull.constants import (
    G_m_eval,
    G_m_series,
    a_m_coefficients,
    c_md,
    constant_C_m,
    constant_K_m,
    euler_factor,
    m_full_constants,
    normalised_error,
    rho,
    zeta_quotient_C2,
)
from campana_cli.mfull.identities import (
    box_sum_f,
    verify_forced_prime_identity,
    verify_forced_prime_identity_with_divisor,
)
from campana_cli.mfull.numbers import (
    MFullQuery,
    count_F,
    count_F_naive,
    is_m_full,
    iter_m_full,
)

CUTOFF = 10**4
IDENTITY_BOUNDS = (10**3, 10**4, 10**5)
# Frozen cap on |F_2(B, d) - c_{2,d} B^(1/2)| / B^(1/3)
ERROR_CAP = 5


class TestNumbers:
    @pytest.mark.parametrize("y, m, expected", [(8, 2, True), (12, 2, False), (1, 3, True), (72, 2, True)])
    def test_is_m_full(self, y, m, expected):
        assert is_m_full(y, m) is expected

    def test_stream_matches_scan(self):
        for m in (2, 3):
            for d in (1, 2, 6):
                stream = sorted(iter_m_full(2000, m, d))
                assert stream == [y for y in range(1, 2001) if is_m_full(y, m) and y % d == 0]

    def test_m1_is_progression(self):
        assert sorted(iter_m_full(20, 1, 3)) == [3, 6, 9, 12, 15, 18]

    @pytest.mark.parametrize(
        "m, bound, d, expected", [(2, 100, 1, 14), (2, 100, 2, 8), (1, 100, 3, 33), (2, 0, 1, 0)]
    )
    def test_count_F(self, m, bound, d, expected):
        query = MFullQuery(m, bound, d)
        assert count_F(query) == expected
        assert count_F_naive(query) == expected

    @pytest.mark.slow
    @pytest.mark.parametrize("m, d", [(2, 1), (2, 6), (3, 1)])
    def test_count_matches_scan_at_largest_bound(self, m, d):
        query = MFullQuery(m, 10**5, d)
        assert count_F(query) == count_F_naive(query)

    def test_monotone_in_bound_and_divisor(self):
        counts = [count_F(MFullQuery(2, B)) for B in range(0, 3001, 100)]
        assert counts == sorted(counts)
        for B in (10**3, 10**4):
            assert count_F(MFullQuery(2, B, 1)) >= count_F(MFullQuery(2, B, 2)) >= count_F(MFullQuery(2, B, 6))
            assert count_F(MFullQuery(2, B, 3)) >= count_F(MFullQuery(2, B, 6))

    def test_query_rejects_non_squarefree(self):
        with pytest.raises(NonSquarefreeError):
            MFullQuery(2, 100, 4)

    def test_query_rejects_bad_m(self):
        with pytest.raises(PreconditionError):
            MFullQuery(0, 100)

    def test_stream_cap(self):
        from campana_cli.core._cache import get_stream_cap, set_stream_cap

        old = get_stream_cap()
        set_stream_cap(10)
        try:
            with pytest.raises(BoundTooLargeError):
                count_F(MFullQuery(2, 10**6))
        finally:
            set_stream_cap(old)


class TestConstants:
    def test_C1(self):
        assert constant_C_m(1, CUTOFF).value == 1

    def test_C2_against_zeta_quotient(self):
        C = constant_C_m(2, 10**5)
        assert abs(C.value / zeta_quotient_C2() - 1) <= C.relative_tail
        assert float(zeta_quotient_C2()) == pytest.approx(2.17325, abs=1e-5)

    def test_C3_stable(self):
        low = constant_C_m(3, 10**4).value
        high = constant_C_m(3, 10**5).value
        assert float(high) == pytest.approx(float(low), rel=0.05)

    def test_a2_coefficients(self):
        assert a_m_coefficients(2, 9) == [1, 0, -1, -1, 0, 1, 1]

    def test_a3_first(self):
        assert a_m_coefficients(3, 4) == [1]

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_coefficients_match_generating_function(self, m):
        series = G_m_series(m, 40)
        assert a_m_coefficients(m, 40) == series[m + 1 :]
        assert all(v == 0 for v in series[: m + 1])

    def test_rho(self):
        assert rho(3, 3, 2) == 2
        assert rho(2, 2, 2) == 1
        assert rho(2, 3, 2) == 0

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_local_density_identity(self, m):
        for p in (2, 3, 5, 7, 11, 97):
            x = mpmath.power(p, -mpmath.mpf(1) / m)
            assert abs(mpmath.mpf(1) / p + G_m_eval(m, x) - euler_factor(m, p)) < 1e-12

    def test_to_mpf_accepts_fractions(self):
        assert to_mpf(Fraction(1, 3)) == mpmath.mpf(1) / 3
        assert to_mpf(Fraction(-7, 2)) == mpmath.mpf("-3.5")
        assert to_mpf(5) == 5

    def test_G_m_eval_at_a_fraction(self):
        assert G_m_eval(2, Fraction(1, 2)) == G_m_eval(2, mpmath.mpf("0.5"))
        with pytest.raises(PreconditionError):
            G_m_eval(2, Fraction(3, 2))

    def test_euler_factor_value(self):
        assert float(euler_factor(2, 2)) == pytest.approx(0.6306019, abs=1e-7)

    def test_c_md(self):
        assert float(c_md(1, 6, CUTOFF).value) == pytest.approx(1 / 6)
        assert float(c_md(2, 2, 10**5).value) == pytest.approx(1.37046, rel=0.01)
        assert c_md(2, 6, CUTOFF).warnings == []

    def test_c_md_rejects_non_squarefree(self):
        with pytest.raises(NonSquarefreeError):
            c_md(2, 12, CUTOFF)

    def test_K_m(self):
        assert constant_K_m(1) == 1
        assert constant_K_m(2) > 1

    def test_bundle(self):
        consts = m_full_constants(2, CUTOFF, mu_max=9)
        assert consts.a_coeffs == [1, 0, -1, -1, 0, 1, 1]
        assert consts.kappa_m == Fraction(1, 3)

    @pytest.mark.parametrize("d", [1, 2, 6])
    def test_normalised_error_bounded(self, d):
        for B in (10**3, 10**4, 10**5):
            assert normalised_error(2, d, B, 10**5) < ERROR_CAP

    @pytest.mark.slow
    @pytest.mark.parametrize("d", [1, 2, 6])
    def test_normalised_error_bounded_large(self, d):
        for B in (10**6, 10**7, 10**8):
            assert normalised_error(2, d, B, 10**5) < ERROR_CAP


class TestIdentities:
    @pytest.mark.parametrize("m", [2, 3, 4])
    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_forced_prime(self, m, p):
        for B in IDENTITY_BOUNDS:
            assert verify_forced_prime_identity(m, p, B)

    @pytest.mark.parametrize("m", [2, 3, 4])
    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    @pytest.mark.parametrize("factor", [1, 2])
    def test_forced_prime_with_divisor(self, m, p, factor):
        if p == 2 and factor == 2:
            pytest.skip("4 is not squarefree")
        for B in IDENTITY_BOUNDS:
            assert verify_forced_prime_identity_with_divisor(m, factor * p, p, B)

    def test_divisor_four_is_rejected(self):
        with pytest.raises(NonSquarefreeError):
            verify_forced_prime_identity_with_divisor(2, 4, 2, 10**3)

    def test_divisor_must_contain_prime(self):
        with pytest.raises(PreconditionError):
            verify_forced_prime_identity_with_divisor(2, 3, 2, 100)

    @pytest.mark.parametrize(
        "m, d, bounds, expected",
        [((1, 1), (1, 1), (10, 10), 100), ((2, 1), (1, 3), (100, 100), 462), ((2, 2), (2, 1), (100, 100), 112)],
    )
    def test_box_sum(self, m, d, bounds, expected):
        assert box_sum_f(m, d, bounds) == expected
