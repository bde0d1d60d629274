from __future__ import annotations

import random

import pytest

from torlog.bundles import is_compatible
from torlog.cocycles import validate_transitions
from torlog.corpus import (
    chart_monomial,
    diagonal_transitions,
    line_bundle_data,
    random_dressing,
    random_equivariant_data,
    solve_cone_weight,
    surface_fans,
    weights_from_ray_values,
)
from torlog.fans import build_fan, projective_fan, validate_fan
from torlog.laurent import LaurentPoly, chart_member, matrix_det


class TestWeightSolving:
    def test_basis_cone(self):
        fan = projective_fan(2)
        assert solve_cone_weight(fan, 4, {0: -1, 1: 0, 2: 0}) == (1, 0)
        assert solve_cone_weight(fan, 4, {0: 0, 1: -2, 2: 0}) == (0, 2)

    def test_all_cones_covered(self):
        fan = projective_fan(2)
        ws = weights_from_ray_values(fan, {0: 1, 1: -1, 2: 2})
        assert sorted(ws) == fan.maximal_cone_indices()

    def test_solution_solves_the_defining_equations(self):
        rng = random.Random(5)
        for fan in surface_fans():
            values = {k: rng.randint(-4, 4) for k in range(len(fan.rays))}
            for ci, m in weights_from_ray_values(fan, values).items():
                for k in fan.cones[ci].ray_indices:
                    assert sum(a * b for a, b in zip(m, fan.rays[k])) == -values[k]

    def test_non_full_dimensional_cone_rejected(self):
        fan, _ = build_fan([(1, 0)], [(), (0,)], dim=2)
        with pytest.raises(ValueError):
            solve_cone_weight(fan, 1, {0: 1})

    def test_non_smooth_cone_rejected(self):
        fan, _ = build_fan([(1, 0), (1, 2)], [(), (0,), (1,), (0, 1)])
        with pytest.raises(ValueError):
            solve_cone_weight(fan, 3, {0: 1, 1: 0})


class TestGenerators:
    def test_random_data_is_compatible(self):
        rng = random.Random(1)
        for fan in surface_fans():
            for rank in (1, 2, 3):
                data = random_equivariant_data(fan, rank, rng)
                assert data.rank == rank
                assert is_compatible(data)

    def test_line_bundle_ray_selection(self):
        fan = projective_fan(1)
        on_last = line_bundle_data(fan, 2)
        on_first = line_bundle_data(fan, 2, ray=0)
        assert on_last.weights == {1: ((0,),), 2: ((2,),)}
        assert on_first.weights == {1: ((-2,),), 2: ((0,),)}

    def test_diagonal_transitions_cover_ordered_pairs(self):
        data = line_bundle_data(projective_fan(2), 1)
        td = diagonal_transitions(data)
        assert sorted(td.matrices) == [
            (4, 5), (4, 6), (5, 4), (5, 6), (6, 4), (6, 5)]
        assert all(c.ok for c in validate_transitions(td))

    def test_chart_monomials_stay_in_chart(self):
        rng = random.Random(2)
        for fan in surface_fans():
            for ci in fan.maximal_cone_indices():
                for _ in range(20):
                    m = chart_monomial(fan, ci, rng)
                    assert chart_member(
                        LaurentPoly.monomial(m), fan.cones[ci], fan)

    def test_dressings_are_unimodular_over_their_chart(self):
        rng = random.Random(3)
        for fan in surface_fans():
            dressing = random_dressing(fan, 3, rng)
            for ci, H in dressing.items():
                det = matrix_det(H)
                assert det == LaurentPoly.const(1, fan.dim)
                assert all(
                    chart_member(f, fan.cones[ci], fan)
                    for row in H.entries for f in row)

    def test_surface_fans_are_smooth_and_complete(self):
        fans = surface_fans()
        assert len(fans) == 3
        for fan in fans:
            assert fan.declared_complete
            assert all(c.ok for c in validate_fan(fan))
