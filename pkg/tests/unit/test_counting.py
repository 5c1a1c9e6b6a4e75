"""Tests for heights, the local Moebius function and the point counts."""

import itertools
import math

import mpmath
import numpy as np
import pytest
from sympy import divisors, factorint

from campana_cli.counting.constant import (
    cone_sum,
    leading_constant,
    leading_constant_dsum,
    tamagawa_factor,
)
from campana_cli.counting.height import HeightEvaluator, height
from campana_cli.counting.moebius import coprime_indicator, moebius_local
from campana_cli.counting.points import count_A, count_N, moebius_inversion_check
from campana_cli.counting.report import COLUMNS, asymptotic_report
from campana_cli.errors import (
    BoundTooLargeError,
    NonSquarefreeError,
    PreconditionError,
    ZeroCoordinateError,
)


INVERSION_RANGE = 200
# Values sharing small primes in every pattern, plus the range ends
STRUCTURED_VALUES = (1, 2, 6, 30, 199, 200)


def _squarefree_divisors(n):
    return [d for d in divisors(n) if all(e == 1 for e in factorint(d).values())]


def _inversion_sum(ml, y, divs, cache):
    """``sum_{d_i | y_i} mu(d)`` with ``mu`` memoised across calls."""
    total = 0
    for d in itertools.product(*(divs[v] for v in y)):
        if d not in cache:
            cache[d] = ml.mu(d)
        total += cache[d]
    return total


def _gcd_count(instance, bound):
    """Signed torsor points of height at most ``bound``, primitive by ``math.gcd``, over ``2^r``."""
    fan = instance.fan
    ev = HeightEvaluator(instance)
    complements = [[i for i in range(fan.s) if i not in sigma] for sigma in fan.max_cones]
    ranges = [[v for v in range(-c, c + 1) if v] for c in ev.search_bounds(bound)]
    signed = 0
    for y in itertools.product(*ranges):
        if not ev.within(y, bound):
            continue
        g = 0
        for comp in complements:
            g = math.gcd(g, math.prod(abs(y[i]) for i in comp))
        signed += g == 1
    assert signed % 2**fan.r == 0
    return signed // 2**fan.r


class TestHeight:
    def test_p2_values(self, p2):
        assert height(p2, (5, 1, 1)) == (125, 1)
        assert height(p2, (1, -2, 1)) == (8, 1)
        assert height(p2, (1, 1, 1)) == (1, 1)

    @pytest.mark.parametrize("name", ["p1", "p2", "p1xp1", "bl1p2", "bl2p2", "p1_squarefull"])
    def test_sign_invariant(self, name, request):
        instance = request.getfixturevalue(name)
        s = instance.fan.s
        y = (12, 5, 7, 9, 10)[:s]
        expected = height(instance, y)
        for signs in itertools.product((1, -1), repeat=s):
            assert height(instance, tuple(v * e for v, e in zip(y, signs))) == expected

    def test_zero_coordinate(self, p2):
        with pytest.raises(ZeroCoordinateError):
            height(p2, (0, 1, 1))

    def test_within_is_exact(self, p1):
        ev = HeightEvaluator(p1)
        assert ev.within((10, 3), 100)
        assert not ev.within((11, 3), 100)

    def test_search_bounds(self, p1, p2):
        assert HeightEvaluator(p1).search_bounds(100) == (10, 10)
        assert HeightEvaluator(p2).search_bounds(27) == (3, 3, 3)


class TestMoebius:
    def test_coprime(self, p2):
        assert coprime_indicator(p2, (2, 3, 4))
        assert not coprime_indicator(p2, (2, 4, 6))

    def test_p2_table(self, p2):
        ml = moebius_local(p2.fan)
        assert ml.support() == [frozenset({0, 1, 2})]
        assert ml.table[frozenset({0, 1, 2})] == -1

    def test_mu_values(self, p2):
        ml = moebius_local(p2.fan)
        assert ml.mu((1, 1, 1)) == 1
        assert ml.mu((6, 6, 6)) == 1
        assert ml.mu((2, 2, 2)) == -1
        assert ml.mu((2, 2, 1)) == 0

    def test_mu_rejects_squares(self, p2):
        with pytest.raises(NonSquarefreeError):
            moebius_local(p2.fan).mu((4, 1, 1))

    @pytest.mark.parametrize("name", ["p1", "p2", "bl1p2"])
    def test_inverts_coprimality(self, name, request):
        instance = request.getfixturevalue(name)
        ml = moebius_local(instance.fan)
        s = instance.fan.s
        for y in itertools.product(range(1, 7), repeat=s):
            total = sum(
                ml.mu(d) for d in itertools.product(*(_squarefree_divisors(v) for v in y))
            )
            assert total == int(coprime_indicator(instance, y)), y

    def test_inverts_coprimality_full_range_p1(self, p1):
        ml = moebius_local(p1.fan)
        divs = {v: _squarefree_divisors(v) for v in range(1, INVERSION_RANGE + 1)}
        cache = {}
        for y in itertools.product(range(1, INVERSION_RANGE + 1), repeat=2):
            assert _inversion_sum(ml, y, divs, cache) == int(coprime_indicator(p1, y)), y

    @pytest.mark.parametrize("name", ["p2", "p1xp1", "bl1p2"])
    def test_inverts_coprimality_sampled_range(self, name, request):
        instance = request.getfixturevalue(name)
        ml = moebius_local(instance.fan)
        s = instance.fan.s
        divs = {v: _squarefree_divisors(v) for v in range(1, INVERSION_RANGE + 1)}
        rng = np.random.default_rng(0)
        points = list(itertools.product(STRUCTURED_VALUES, repeat=s))
        points += [
            tuple(int(v) for v in rng.integers(1, INVERSION_RANGE + 1, size=s)) for _ in range(300)
        ]
        cache = {}
        for y in points:
            assert _inversion_sum(ml, y, divs, cache) == int(coprime_indicator(instance, y)), y


class TestCounts:
    def test_p1(self, p1):
        assert count_N(p1, 100) == 126

    def test_p2_smallest_bound(self, p2):
        assert count_N(p2, 1) == 4

    def test_below_one(self, p1):
        assert count_N(p1, 0) == 0

    def test_matches_brute_force(self, bl1p2):
        ev = HeightEvaluator(bl1p2)
        B = 40
        caps = ev.search_bounds(B)
        brute = sum(
            1
            for y in itertools.product(*(range(1, c + 1) for c in caps))
            if ev.within(y, B) and coprime_indicator(bl1p2, y)
        )
        fan = bl1p2.fan
        assert count_N(bl1p2, B) == 2 ** (fan.s - fan.r) * brute

    def test_workers_agree(self, p2):
        assert count_N(p2, 2000, workers=2) == count_N(p2, 2000)

    def test_work_cap(self, p1):
        with pytest.raises(BoundTooLargeError):
            count_N(p1, 10**6, work_cap=10)

    def test_count_A(self, p1):
        assert count_A(p1, 100, (2, 3)) == 60

    def test_count_A_needs_squarefree(self, p1):
        with pytest.raises(NonSquarefreeError):
            count_A(p1, 100, (4, 1))

    @pytest.mark.parametrize("name", ["p1", "p2", "p1_squarefull"])
    def test_inversion(self, name, request):
        check = moebius_inversion_check(request.getfixturevalue(name), 200)
        assert check.holds
        assert check.terms > 0

    @pytest.mark.parametrize("name, bound", [("p1", 2000), ("p2", 3000), ("p1xp1", 50), ("bl1p2", 100)])
    def test_matches_gcd_counter(self, name, bound, request):
        instance = request.getfixturevalue(name)
        assert count_N(instance, bound) == _gcd_count(instance, bound)

    @pytest.mark.parametrize("name", ["p1", "p2"])
    def test_inversion_at_thousand(self, name, request):
        instance = request.getfixturevalue(name)
        check = moebius_inversion_check(instance, 10**3)
        assert check.holds
        assert check.rhs == 2**instance.fan.r * count_N(instance, 10**3)


class TestLeadingConstant:
    @pytest.mark.parametrize(
        "name, expected",
        [
            ("p1", 12 / math.pi**2),
            ("p2", 4 / float(mpmath.zeta(3))),
            ("p1xp1", 144 / math.pi**4),
        ],
    )
    def test_closed_forms(self, name, expected, request):
        lc = leading_constant(request.getfixturevalue(name), prime_cutoff=10**4)
        assert float(lc.c) == pytest.approx(expected, rel=5e-3)
        assert lc.tail_bound >= 0

    def test_cone_sum(self, p1_squarefull, p2):
        assert cone_sum(p2) == 3
        assert cone_sum(p1_squarefull) == 1

    def test_needs_log_anticanonical(self, bl1p2_d3):
        with pytest.raises(PreconditionError):
            leading_constant(bl1p2_d3)

    def test_tamagawa(self, p1_squarefull):
        check = tamagawa_factor(p1_squarefull, prime_cutoff=10**4)
        assert check.relative_difference < 1e-12

    def test_divisor_sum(self, p1):
        direct = leading_constant_dsum(p1, d_cap=200, prime_cutoff=10**4)
        assert float(direct) == pytest.approx(12 / math.pi**2, rel=2e-2)


class TestAsymptoticReport:
    def test_p1_rows(self, p1):
        report = asymptotic_report(p1, [100, 10**4], prime_cutoff=10**4)
        assert [row["N"] for row in report.rows] == [126, 12174]
        assert all(list(row) == COLUMNS for row in report.rows)
        assert abs(report.rows[-1]["ratio"] - 1) < 0.01
        assert report.to_dict()["b"] == 1

    def test_bounds_must_increase(self, p1):
        with pytest.raises(PreconditionError):
            asymptotic_report(p1, [100, 100])


class TestDensities:
    @pytest.mark.parametrize(
        "name, expected", [("p1", 12 / math.pi**2), ("p2", 4 / float(mpmath.zeta(3)))]
    )
    def test_leading_constant_at_full_cutoff(self, name, expected, request):
        lc = leading_constant(request.getfixturevalue(name), prime_cutoff=10**5)
        assert float(lc.c) == pytest.approx(expected, rel=5e-3)

    @pytest.mark.parametrize("name", ["p1", "p2", "p1xp1", "bl1p2", "bl2p2", "p1_squarefull"])
    def test_leading_constant_positive(self, name, request):
        assert leading_constant(request.getfixturevalue(name), prime_cutoff=10**3).c > 0

    @pytest.mark.slow
    def test_p1_density(self, p1):
        assert count_N(p1, 10**6) / (12 / math.pi**2 * 10**6) == pytest.approx(1, abs=0.02)

    @pytest.mark.slow
    def test_p2_density(self, p2):
        c = 4 / float(mpmath.zeta(3))
        assert count_N(p2, 10**6) / (c * 10**6) == pytest.approx(1, abs=0.05)

    @pytest.mark.slow
    def test_p1xp1_log_power(self, p1xp1):
        report = asymptotic_report(p1xp1, [10**2, 10**3, 10**4, 10**5], prime_cutoff=10**5)
        assert report.to_dict()["b"] == 2
        deviations = [abs(row["ratio"] - 1) for row in report.rows]
        assert deviations == sorted(deviations, reverse=True)
        assert deviations[-1] <= 0.25

    @pytest.mark.slow
    def test_p1_squarefull_density(self, p1_squarefull):
        c = float(leading_constant(p1_squarefull, prime_cutoff=10**5).c)
        assert count_N(p1_squarefull, 10**8) / 10**8 == pytest.approx(c, rel=0.05)
