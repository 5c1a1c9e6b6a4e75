"""Tests for slice volumes and the assumption checker."""

from fractions import Fraction

import pytest

from campana_cli.core.fanfile import load_instance
from campana_cli.errors import DegenerateProjectionError
from campana_cli.polytope import assumption
from campana_cli.polytope.assumption import (
    SATISFIED,
    UNRESOLVED,
    _label,
    check_assumption_polytopes,
)
from campana_cli.polytope.toric import build_tilde_P, build_tilde_P_sigma
from campana_cli.polytope.volume import (
    monte_carlo_slice_volume,
    polytope_volume,
    slice_volume,
    slice_volume_series,
)


class TestSliceVolume:
    def test_square_corner(self, unit_square):
        assert slice_volume(unit_square, (1, 1), Fraction(7, 4), measure_axis=0) == Fraction(1, 4)

    def test_simplex_slice(self, simplex3):
        assert slice_volume(simplex3, (1, 1, 1), Fraction(9, 10), measure_axis=0) == Fraction(81, 200)

    def test_empty_slice(self, unit_square):
        assert slice_volume(unit_square, (1, 1), 3, measure_axis=0) == 0

    def test_degenerate_projection(self, unit_square):
        with pytest.raises(DegenerateProjectionError):
            slice_volume(unit_square, (1, 0), Fraction(1, 2), measure_axis=1)

    def test_weights(self, simplex3):
        plain = slice_volume(simplex3, (1, 1, 1), Fraction(1, 2), measure_axis=0)
        weighted = slice_volume(
            simplex3, (1, 1, 1), Fraction(1, 2), measure_axis=0, weights=(5, 2, 3)
        )
        assert weighted == 6 * plain

    def test_scaling(self, simplex3):
        base = slice_volume(simplex3, (1, 1, 1), Fraction(1, 2), measure_axis=0)
        scaled = slice_volume(simplex3.scaled(3), (1, 1, 1), Fraction(3, 2), measure_axis=0)
        assert scaled == 9 * base

    def test_polytope_volume(self, simplex3):
        assert polytope_volume(simplex3) == Fraction(1, 6)

    def test_monte_carlo_agrees(self, simplex3):
        exact = float(slice_volume(simplex3, (1, 1, 1), Fraction(9, 10), measure_axis=0))
        mc = monte_carlo_slice_volume(simplex3, (1, 1, 1), Fraction(9, 10), 0, samples=20_000, seed=1)
        assert abs(mc.estimate - exact) <= 3 * mc.std_error


class TestSliceSeries:
    def test_square_corner(self, unit_square):
        series = slice_volume_series(unit_square, (1, 1))
        assert series.fitted_exponent == pytest.approx(1, rel=0.05)
        assert series.leading_coefficient == 1
        assert all(v == d for d, v in zip(series.deltas, series.volumes))

    def test_p1xp1(self, p1xp1):
        series = slice_volume_series(build_tilde_P(p1xp1), p1xp1.varpi, k_expected=1)
        assert series.fitted_exponent == pytest.approx(2, rel=0.05)

    def test_p2_closed_form(self, p2):
        series = slice_volume_series(
            build_tilde_P(p2), p2.varpi, k_expected=0, weights=p2.varpi, instance=p2
        )
        assert series.fitted_exponent == pytest.approx(2, rel=0.05)
        assert series.closed_form == Fraction(1, 2)
        assert series.leading_coefficient == Fraction(1, 2)

    def test_face_dimension_mismatch_warns(self, p2):
        series = slice_volume_series(build_tilde_P(p2), p2.varpi, k_expected=1)
        assert any("expected 1" in w for w in series.warnings)

    def test_chart_volumes_add_up(self, p2):
        level = 1 - Fraction(1, 16)
        total = slice_volume(build_tilde_P(p2), p2.varpi, level, measure_axis=0)
        pieces = sum(
            slice_volume(build_tilde_P_sigma(p2, sigma), p2.varpi, level, measure_axis=0)
            for sigma in p2.fan.max_cones
        )
        assert pieces == total


class TestAssumption:
    @pytest.mark.parametrize("name", ["p2", "p1xp1", "bl1p2", "bl2p2"])
    def test_satisfied(self, name):
        verdict = check_assumption_polytopes(load_instance(name))
        assert verdict.status == SATISFIED
        assert verdict.unresolved == []

    def test_every_subset_has_a_reason(self, bl2p2):
        verdict = check_assumption_polytopes(bl2p2)
        s = bl2p2.fan.s
        assert len(verdict.reasons) == 2**s - 2
        assert "unresolved" not in verdict.reasons.values()

    @pytest.mark.parametrize("name", ["p2", "p1xp1", "bl1p2", "bl2p2"])
    def test_satisfied_only_from_exact_criteria(self, name):
        inst = load_instance(name)
        verdict = check_assumption_polytopes(inst)
        assert verdict.satisfied
        assert len(verdict.reasons) == 2**inst.fan.s - 2
        for reason in verdict.reasons.values():
            assert not reason.startswith(UNRESOLVED)
            assert "sampled" not in reason

    @pytest.mark.parametrize("name, labels", [("p1xp1", ["{1,2}", "{3,4}"]), ("bl1p2", ["{3,4}"])])
    def test_dual_face_certificate(self, name, labels):
        verdict = check_assumption_polytopes(load_instance(name))
        for label in labels:
            assert verdict.reasons[label].startswith("dual optimal face")

    def test_samples_never_settle_a_subset(self, p1xp1, monkeypatch):
        monkeypatch.setattr(assumption, "_dual_face_certificate", lambda *args: False)
        verdict = check_assumption_polytopes(p1xp1)
        assert verdict.status == UNRESOLVED
        assert [_label(J) for J in verdict.unresolved] == ["{1,2}", "{3,4}"]
        for J in verdict.unresolved:
            assert verdict.reasons[_label(J)].startswith(f"{UNRESOLVED}: 0 of")
        assert any("unresolved subsets" in w for w in verdict.warnings)
