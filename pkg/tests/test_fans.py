from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from torlog.fans import (
    Cone,
    DimensionError,
    build_fan,
    cone_is_smooth,
    hirzebruch_fan,
    is_face,
    pairing,
    primitivize,
    product_p1_fan,
    projective_fan,
    smith_invariants,
    validate_fan,
)


def checks_by_name(checks):
    return {c.name: c for c in checks}


class TestPairing:
    def test_orthogonal_basis(self):
        assert pairing((1, 0), (0, 1)) == 0

    def test_coordinate_projection(self):
        assert pairing((2, 3), (1, 0)) == 2

    def test_dot_product(self):
        assert pairing((1, 1), (-1, -1)) == -2

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            pairing((1, 0), (1,))

    @given(
        st.lists(st.integers(-50, 50), min_size=3, max_size=3),
        st.lists(st.integers(-50, 50), min_size=3, max_size=3),
        st.lists(st.integers(-50, 50), min_size=3, max_size=3),
    )
    def test_bilinear(self, m1, m2, v):
        m1, m2, v = tuple(m1), tuple(m2), tuple(v)
        s = tuple(a + b for a, b in zip(m1, m2))
        assert pairing(s, v) == pairing(m1, v) + pairing(m2, v)


class TestPrimitivize:
    def test_gcd_division(self):
        assert primitivize((2, 4)) == (1, 2)

    def test_already_primitive(self):
        assert primitivize((1, 0)) == (1, 0)

    def test_sign_preserved(self):
        assert primitivize((-3, 6)) == (-1, 2)

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            primitivize((0, 0))

    @given(st.lists(st.integers(-30, 30), min_size=1, max_size=4).filter(lambda v: any(v)))
    def test_idempotent(self, v):
        p = primitivize(tuple(v))
        assert primitivize(p) == p


class TestFaces:
    def setup_method(self):
        self.fan = projective_fan(2)

    def test_zero_cone_is_face_of_all(self):
        zero = self.fan.cones[0]
        for c in self.fan.cones:
            assert is_face(zero, c, self.fan)

    def test_subset(self):
        tau = self.fan.cones[self.fan.cone_index((0,))]
        sigma = self.fan.cones[self.fan.cone_index((0, 1))]
        assert is_face(tau, sigma, self.fan)

    def test_disjoint(self):
        tau = self.fan.cones[self.fan.cone_index((2,))]
        sigma = self.fan.cones[self.fan.cone_index((0, 1))]
        assert not is_face(tau, sigma, self.fan)

    def test_unknown_cone(self):
        with pytest.raises(ValueError):
            is_face(Cone((0, 1, 2)), self.fan.cones[0], self.fan)

    def test_reflexive_and_transitive(self):
        fan = self.fan
        for c in fan.cones:
            assert is_face(c, c, fan)
        for a in fan.cones:
            for b in fan.cones:
                for c in fan.cones:
                    if is_face(a, b, fan) and is_face(b, c, fan):
                        assert is_face(a, c, fan)


class TestValidateFan:
    def test_p1_all_pass(self):
        fan, warnings = build_fan([(1,), (-1,)], [(), (0,), (1,)], declared_complete=True)
        assert warnings == []
        assert all(c.ok for c in validate_fan(fan))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_projective_spaces_pass(self, n):
        assert all(c.ok for c in validate_fan(projective_fan(n)))

    def test_stock_surfaces_pass(self):
        for fan in (product_p1_fan(), hirzebruch_fan(1), hirzebruch_fan(3)):
            assert all(c.ok for c in validate_fan(fan))

    def test_non_smooth_cone(self):
        fan, _ = build_fan([(1, 0), (1, 2)], [(), (0,), (1,), (0, 1)])
        by = checks_by_name(validate_fan(fan))
        assert by["smooth"].status == "fail"
        assert by["simplicial"].status == "pass"
        assert not cone_is_smooth(fan, fan.cones[3])

    def test_non_simplicial(self):
        fan, _ = build_fan([(1, 0), (-1, 0)], [(), (0,), (1,), (0, 1)])
        by = checks_by_name(validate_fan(fan))
        assert by["simplicial"].status == "fail"
        assert by["complete"].status == "undetermined"

    def test_duplicate_cones(self):
        fan, _ = build_fan([(1,), (-1,)], [(), (0,), (1,), (0,)])
        assert checks_by_name(validate_fan(fan))["distinct_cones"].status == "fail"

    def test_face_closure_missing(self):
        fan, _ = build_fan([(1, 0), (0, 1)], [(), (0, 1)])
        by = checks_by_name(validate_fan(fan))
        assert by["face_closure"].status == "fail"

    def test_half_open_fan_passes_without_claim(self):
        rays = [(1, 0), (-1, 0), (0, 1)]
        cones = [(), (0,), (1,), (2,), (0, 2), (1, 2)]
        fan, _ = build_fan(rays, cones)
        by = checks_by_name(validate_fan(fan))
        assert by["complete"].status == "pass"
        assert "not complete" in by["complete"].detail

    def test_half_open_fan_contradicts_declaration(self):
        rays = [(1, 0), (-1, 0), (0, 1)]
        cones = [(), (0,), (1,), (2,), (0, 2), (1, 2)]
        fan, _ = build_fan(rays, cones, declared_complete=True)
        assert checks_by_name(validate_fan(fan))["complete"].status == "fail"

    def test_lower_dimensional_maximal_cone_undetermined(self):
        fan, _ = build_fan([(1, 0)], [(), (0,)], dim=2)
        assert checks_by_name(validate_fan(fan))["complete"].status == "undetermined"


class TestBuildFan:
    def test_normalization_warning(self):
        fan, warnings = build_fan([(2, 4), (0, 1)], [(), (0,), (1,)])
        assert fan.rays[0] == (1, 2)
        assert len(warnings) == 1 and "ray 0" in warnings[0]

    def test_missing_ray_reference(self):
        with pytest.raises(ValueError):
            build_fan([(1, 0)], [(0, 5)])

    def test_ray_length_mismatch(self):
        with pytest.raises(DimensionError):
            build_fan([(1, 0), (1,)], [(0,)])


class TestLattice:
    def test_smith_invariants(self):
        assert smith_invariants([[1, 0], [1, 2]]) == [1, 2]
        assert smith_invariants([[2, 0], [0, 3]]) == [1, 6]
        assert smith_invariants([[1, 0, 0], [0, 1, 0]]) == [1, 1]

    def test_smooth_lower_dimensional_cone(self):
        fan, _ = build_fan([(3, 5)], [(), (0,)], dim=2)
        assert cone_is_smooth(fan, fan.cones[1])
        # (1,0,0) and (1,2,0) span a saturated sublattice only of index 2
        fan2, _ = build_fan(
            [(1, 0, 0), (1, 2, 0)], [(), (0,), (1,), (0, 1)], dim=3)
        assert not cone_is_smooth(fan2, fan2.cones[3])

    def test_maximal_and_overlap(self):
        fan = product_p1_fan()
        maximal = fan.maximal_cone_indices()
        assert [fan.cones[i].ray_indices for i in maximal] == [
            (0, 2), (0, 3), (1, 2), (1, 3)]
        shared = fan.cones[fan.overlap_index(maximal[0], maximal[2])]
        assert shared.ray_indices == (2,)
        # opposite charts meet only at the origin
        assert fan.cones[fan.overlap_index(maximal[0], maximal[3])].ray_indices == ()


def test_random_fans_have_consistent_maximal_sets():
    rng = random.Random(404)
    for _ in range(25):
        n = rng.choice([1, 2, 3])
        fan = projective_fan(n)
        maximal = fan.maximal_cone_indices()
        assert len(maximal) == n + 1
        for i in maximal:
            assert fan.cones[i].dim == n
