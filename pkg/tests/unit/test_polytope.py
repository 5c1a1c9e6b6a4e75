"""Tests for exact polytopes, linear programming and toric polytopes."""

from fractions import Fraction

import pytest

from campana_cli.core.fanfile import load_instance
from campana_cli.errors import (
    InfeasibleError,
    NotAmpleError,
    UnboundedLPError,
    UnboundedPolytopeError,
)
from campana_cli.polytope.linalg import det, independent_rows, nullspace_vector, rank, solve
from campana_cli.polytope.rational import RationalPolytope
from campana_cli.polytope.simplex import lp_maximize, lp_minimize
from campana_cli.polytope.toric import (
    alpha_L,
    alpha_L_per_cone,
    build_tilde_P,
    build_tilde_P_sigma,
    closed_form_constant,
    dual_exponent_a,
    exponents_a_b,
    local_dual_exponent_a,
)
from campana_cli.polytope.vertices import vertex_enumeration

MIXED = [1, 2, 3]


class TestRationalPolytope:
    def test_rows_deduplicated(self):
        P = RationalPolytope(2, [((1, 0), 1), ((2, 0), 2), ((0, 0), 5)])
        assert len(P.inequalities) == 1

    def test_contains(self, unit_square):
        assert unit_square.contains((Fraction(1, 2), 1))
        assert not unit_square.contains((2, 0))

    def test_bounded_and_dimension(self, unit_square, simplex3):
        assert unit_square.is_bounded()
        assert unit_square.dimension() == 2
        assert simplex3.dimension() == 3
        half_plane = RationalPolytope(2, [((-1, 0), 0)])
        assert not half_plane.is_bounded()

    def test_infeasible(self):
        P = RationalPolytope(1, [((1,), -1), ((-1,), 0)])
        assert not P.is_feasible()


class TestVertices:
    def test_square(self, unit_square):
        assert vertex_enumeration(unit_square) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_simplex(self, simplex3):
        assert len(vertex_enumeration(simplex3)) == 4

    def test_tilde_P_p2(self, p2):
        assert len(vertex_enumeration(build_tilde_P(p2))) == 8

    def test_degenerate_vertex_found_once(self):
        # x + y + z <= 3 is tight only at (1, 1, 1), where four rows meet
        rows = RationalPolytope.nonnegative_orthant(3) + [
            ((1, 0, 0), 1),
            ((0, 1, 0), 1),
            ((0, 0, 1), 1),
            ((1, 1, 1), 3),
        ]
        vertices = vertex_enumeration(RationalPolytope(3, rows))
        assert len(vertices) == 8
        assert vertices == sorted(vertices)
        assert vertices[-1] == (1, 1, 1)

    def test_unbounded(self):
        with pytest.raises(UnboundedPolytopeError):
            vertex_enumeration(RationalPolytope(2, [((-1, 0), 0), ((0, -1), 0)]))


class TestLinearProgramming:
    def test_square_edge(self, unit_square):
        sol = lp_maximize(unit_square, (1, 0))
        assert sol.optimum == 1
        assert sol.optimal_face_dim == 1
        assert len(sol.face_vertices) == 2

    def test_tilde_P_p2(self, p2):
        sol = lp_maximize(build_tilde_P(p2), p2.varpi)
        assert sol.optimum == 1
        assert sol.witness_vertex == (Fraction(1, 3),) * 3
        assert sol.optimal_face_dim == 0

    def test_tilde_P_p1xp1(self, p1xp1):
        sol = lp_maximize(build_tilde_P(p1xp1), p1xp1.varpi)
        assert sol.optimum == 1
        assert sol.optimal_face_dim == 1

    def test_minimize(self, unit_square):
        assert lp_minimize(unit_square, (1, 1)) == 0

    def test_infeasible(self):
        P = RationalPolytope(1, [((1,), -1), ((-1,), 0)])
        with pytest.raises(InfeasibleError):
            lp_maximize(P, (1,))

    def test_unbounded(self):
        P = RationalPolytope(2, [((-1, 0), 0), ((0, -1), 0)])
        with pytest.raises(UnboundedLPError):
            lp_maximize(P, (1, 1))


class TestToricPolytopes:
    def test_tilde_P_p2_rows(self, p2):
        P = build_tilde_P(p2)
        assert P.contains((Fraction(1, 3),) * 3)
        assert not P.contains((Fraction(1, 2), 0, 0))

    def test_tilde_P_p1_squarefull(self, p1_squarefull):
        P = build_tilde_P(p1_squarefull)
        assert P.contains((1, 1))
        assert not P.contains((Fraction(11, 10), 0))

    def test_unbounded_without_assumption(self):
        inst = load_instance("p2", L=[0, 0, 0])
        with pytest.raises(UnboundedPolytopeError):
            build_tilde_P(inst)

    @pytest.mark.parametrize(
        "name, m, expected",
        [("p2", [2], (1, 1)), ("p1xp1", [1], (1, 2)), ("bl1p2", [1], (1, 2))],
    )
    def test_exponents(self, name, m, expected):
        exps = exponents_a_b(load_instance(name, m=m))
        assert (exps.a, exps.b) == expected

    def test_exponents_need_ample(self, bl1p2_d3):
        with pytest.raises(NotAmpleError):
            exponents_a_b(bl1p2_d3)

    @pytest.mark.parametrize("name", ["p1", "p2", "p1xp1", "bl1p2"])
    @pytest.mark.parametrize("m", [[1], [2], "mixed"])
    def test_strong_duality(self, name, m):
        inst = load_instance(name)
        weights = (MIXED * inst.fan.s)[: inst.fan.s] if m == "mixed" else m
        inst = load_instance(name, m=weights)
        dual = dual_exponent_a(inst)
        assert dual.a == exponents_a_b(inst).a == 1

    def test_dual_multipliers_p2(self, p2):
        dual = dual_exponent_a(p2)
        assert set(dual.multipliers.values()) == {Fraction(1, 3)}

    def test_local_dual_program(self, bl1p2):
        for sigma in bl1p2.fan.max_cones:
            assert local_dual_exponent_a(bl1p2, sigma).a == 1

    def test_tilde_P_sigma_inside_tilde_P(self, p2):
        P = build_tilde_P(p2)
        for sigma in p2.fan.max_cones:
            for v in vertex_enumeration(build_tilde_P_sigma(p2, sigma)):
                assert P.contains(v)


class TestAlpha:
    @pytest.mark.parametrize(
        "name, expected",
        [("p2", Fraction(1, 3)), ("p1", Fraction(1, 2)), ("p1xp1", Fraction(1, 4))],
    )
    def test_values(self, name, expected):
        assert alpha_L(load_instance(name)) == expected

    def test_independent_of_cone(self, bl1p2):
        assert len(set(alpha_L_per_cone(bl1p2).values())) == 1

    def test_needs_ample(self, bl1p2_d3):
        with pytest.raises(NotAmpleError):
            alpha_L(bl1p2_d3)

    def test_closed_form_p2(self, p2):
        assert closed_form_constant(p2) == Fraction(1, 2)

    def test_closed_form_absent_for_other_L(self, bl1p2_d3):
        assert closed_form_constant(bl1p2_d3) is None


class TestLinalg:
    def test_rank_and_independent_rows(self):
        rows = [(1, 2, 3), (2, 4, 6), (0, 1, 1)]
        assert rank(rows) == 2
        assert independent_rows(rows) == [0, 2]

    def test_solve(self):
        assert solve([(2, 0), (0, 3)], (1, 1)) == (Fraction(1, 2), Fraction(1, 3))
        assert solve([(1, 1), (2, 2)], (1, 2)) is None

    def test_det(self):
        assert det([(Fraction(1, 2), 1), (1, 4)]) == 1
        assert det([]) == 1

    def test_nullspace(self):
        v = nullspace_vector([(1, 1, 0)], 3)
        assert v is not None and v[0] + v[1] == 0 and any(v)
        assert nullspace_vector([(1, 0), (0, 1)], 2) is None
