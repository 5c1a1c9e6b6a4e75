"""Tests for cone combinatorics."""

from fractions import Fraction
from itertools import product

import pytest

from campana_cli.core.fanfile import load_instance
from campana_cli.errors import FanFormatError, NonSmoothConeError
from campana_cli.core.models import Fan
from campana_cli.toric.cones import (
    all_cone_data,
    check_assumption_L,
    check_beta_relation,
    cone_data,
    divisor_class,
    dual_basis,
    is_ample,
    is_effective,
    picard_rank,
)


class TestConeData:
    def test_p2_alpha_and_beta(self, p2):
        cd = cone_data(p2, (0, 1))
        assert cd.alpha == (0, 0, 3)
        assert cd.beta[2][0] == 1
        assert cd.complement == (2,)

    def test_p1_squarefull_alpha(self, p1_squarefull):
        assert cone_data(p1_squarefull, (0,)).alpha == (0, 1)

    @pytest.mark.parametrize("name", ["p1", "p2", "p1xp1", "bl1p2", "bl2p2"])
    def test_beta_invariants(self, name):
        inst = load_instance(name)
        for cd in all_cone_data(inst):
            for j in cd.sigma:
                assert cd.beta[j][j] == -1
                for i in cd.sigma:
                    if i != j:
                        assert cd.beta[i][j] == 0
            for i in range(inst.fan.s):
                for j in cd.complement:
                    assert cd.beta[i][j] == 0
            for i in cd.sigma:
                assert cd.alpha[i] == 0
            assert len(cd.complement) == inst.fan.r

    @pytest.mark.parametrize("m", [[1], [2], [1, 2, 3, 1]])
    def test_alpha_from_beta(self, m):
        inst = load_instance("bl1p2", m=m)
        varpi = inst.coeffs
        for cd in all_cone_data(inst):
            for i in range(inst.fan.s):
                expected = varpi[i] + sum(varpi[j] * cd.beta[i][j] for j in cd.sigma)
                assert cd.alpha[i] == expected

    def test_dual_basis_is_inverse(self, bl2p2):
        fan = bl2p2.fan
        for sigma in fan.max_cones:
            basis = dual_basis(fan, sigma)
            for k, j in enumerate(sigma):
                for l in sigma:  # noqa: E741
                    pairing = sum(a * b for a, b in zip(basis[k], fan.rays[l]))
                    assert pairing == int(j == l)

    def test_non_smooth_cone_rejected(self):
        fan = Fan(dim=2, rays=((1, 0), (1, 2)), max_cones=((0, 1),))
        with pytest.raises(NonSmoothConeError):
            dual_basis(fan, (0, 1))


class TestBetaRelation:
    @pytest.mark.parametrize("name", ["p2", "bl1p2"])
    def test_all_pairs(self, name):
        inst = load_instance(name)
        cones = inst.fan.max_cones
        for a, b in product(cones, cones):
            assert check_beta_relation(inst, a, b)

    def test_same_cone(self, p1xp1):
        sigma = p1xp1.fan.max_cones[0]
        assert check_beta_relation(p1xp1, sigma, sigma)


class TestAmpleness:
    def test_p2(self, p2):
        assert check_assumption_L(p2)
        assert is_ample(p2)

    def test_p1xp1_squarefull(self):
        assert is_ample(load_instance("p1xp1", m=[2]))

    def test_blowup_exceptional_divisor(self, bl1p2_d3):
        assert check_assumption_L(bl1p2_d3)
        assert not is_ample(bl1p2_d3)

    def test_effective(self, p2):
        assert is_effective(p2)
        negative = load_instance("p2", L=[-1, 0, 0])
        assert not is_effective(negative)


def test_picard_rank(p2, bl2p2):
    assert picard_rank(p2.fan) == 1
    assert picard_rank(bl2p2.fan) == 3


def test_divisor_class_p2(p2):
    sigma = (0, 1)
    assert divisor_class(p2, sigma, p2.coeffs) == {2: Fraction(3)}


def test_weights_length_checked():
    with pytest.raises(FanFormatError):
        load_instance("p2", m=[1, 2])
