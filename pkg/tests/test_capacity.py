"""Tests for covering sums, the capacity dynamic program and its verifiers.

The exactness tests compare the Pareto-frontier optimum against a brute-force
enumeration of every dyadic antichain covering.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fflab.capacity import (
    CapacityParams,
    DyadicCovering,
    FrostmanResult,
    GaugeFunction,
    GridMeasure,
    HlpInstance,
    HlpItem,
    PointCloud,
    ResourceLimitError,
    bump_pairing,
    capacity_bracket,
    check_hlp_item,
    enumerate_antichain_coverings,
    frostman_ratio,
    hausdorff_gauge_sum,
    nh_capacity_delta,
    nh_covering_sum,
    packing_net_count,
    tent_profile,
)
from fflab.lorentz import INFINITY


def brute_capacity(cloud, params, delta, depth):
    return min(
        nh_covering_sum(DyadicCovering(diams), params)
        for diams in enumerate_antichain_coverings(cloud, delta, depth)
    )


unit_coord = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


class TestCoveringSum:
    def test_single_diameter(self):
        cov = DyadicCovering((0.3,))
        assert nh_covering_sum(cov, CapacityParams(0.5, 2.0)) == pytest.approx(0.3, rel=1e-12)

    def test_equal_diameters_one_block(self):
        cov = DyadicCovering((2.0**-5,) * 64)
        p = CapacityParams(1.0, 3.0)
        assert nh_covering_sum(cov, p) == pytest.approx(8.0, rel=1e-12)

    def test_sup_aggregation(self):
        cov = DyadicCovering((0.5, 0.5, 0.126))
        p = CapacityParams(1.0, INFINITY)
        assert nh_covering_sum(cov, p) == pytest.approx(1.0, rel=1e-12)

    def test_custom_phi_matches_power(self):
        cov = DyadicCovering((0.4, 0.3, 0.05, 0.01))
        q = 1.7
        power = nh_covering_sum(cov, CapacityParams(0.8, q))
        custom = nh_covering_sum(cov, CapacityParams(0.8, q, phi=lambda s: s**q))
        assert custom == pytest.approx(power, rel=1e-12)

    def test_empty_covering(self):
        assert nh_covering_sum(DyadicCovering(()), CapacityParams(1.0, 1.0)) == 0.0

    def test_gauge_sum(self):
        g = GaugeFunction(lambda t: t**2)
        cov = DyadicCovering((0.5, 0.25))
        assert hausdorff_gauge_sum(cov, g) == pytest.approx(0.3125, rel=1e-12)

    def test_scale_bound_enforced(self):
        with pytest.raises(ValueError):
            DyadicCovering((0.5,), delta=0.5)

    def test_geometry_consistency(self):
        DyadicCovering(
            (0.25 * math.sqrt(2),),
            geometry=(("box", (0.0, 0.0), 0.25),),
        )
        with pytest.raises(ValueError):
            DyadicCovering((0.3,), geometry=(("box", (0.0, 0.0), 0.25),))


class TestValidation:
    def test_cloud_outside_cube(self):
        with pytest.raises(ValueError):
            PointCloud(((1.5,),), 1)

    def test_cloud_dimension(self):
        with pytest.raises(ValueError):
            PointCloud(((0.5, 0.5),), 1)

    def test_phi_with_sup_rejected(self):
        with pytest.raises(ValueError):
            CapacityParams(1.0, INFINITY, phi=lambda s: s)

    def test_nonmonotone_gauge_rejected(self):
        with pytest.raises(ValueError):
            GaugeFunction(lambda t: t * (2.0**-12 - t))

    def test_log_gauge_accepted(self):
        GaugeFunction(lambda t: 0.0 if t == 0 else t * math.log(1.0 / t))

    def test_depth_budget(self):
        cloud = PointCloud(((0.5,),), 1)
        with pytest.raises(ResourceLimitError):
            nh_capacity_delta(cloud, CapacityParams(1.0, 1.0), 0.5, 17)


class TestCapacityExactness:
    @pytest.mark.parametrize("q", [0.5, 1.0, 2.0, INFINITY])
    def test_structured_cloud(self, q):
        cloud = PointCloud(tuple((j / 7.0,) for j in range(8)), 1)
        params = CapacityParams(0.6, q)
        dp = nh_capacity_delta(cloud, params, 0.6, 6)
        assert dp == pytest.approx(brute_capacity(cloud, params, 0.6, 6), rel=1e-12)

    @pytest.mark.parametrize("q", [0.5, 1.0, 2.0, INFINITY])
    def test_random_clouds(self, q):
        rng = np.random.default_rng(11)
        for _ in range(4):
            cloud = PointCloud(tuple((x,) for x in rng.random(4)), 1)
            params = CapacityParams(1.0, q)
            dp = nh_capacity_delta(cloud, params, 0.9, 6)
            assert dp == pytest.approx(brute_capacity(cloud, params, 0.9, 6), rel=1e-12)

    def test_two_dimensional(self):
        rng = np.random.default_rng(3)
        cloud = PointCloud(tuple(map(tuple, rng.random((3, 2)))), 2)
        params = CapacityParams(1.0, 2.0)
        dp = nh_capacity_delta(cloud, params, 0.9, 4)
        assert dp == pytest.approx(brute_capacity(cloud, params, 0.9, 4), rel=1e-12)

    def test_singleton_value(self):
        cloud = PointCloud(((0.3,),), 1)
        params = CapacityParams(0.7, 2.0)
        # deepest box is cheapest for an increasing block gauge
        expect = (2.0**-8) ** (0.7 * 2.0)
        assert nh_capacity_delta(cloud, params, 0.9, 8) == pytest.approx(expect, rel=1e-12)

    def test_depth_monotone(self):
        cloud = PointCloud(((0.1,), (0.4,), (0.8,)), 1)
        params = CapacityParams(0.5, 0.7)
        vals = [nh_capacity_delta(cloud, params, 0.9, depth) for depth in range(2, 9)]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:]))

    def test_delta_monotone(self):
        cloud = PointCloud(((0.1,), (0.45,), (0.8,)), 1)
        params = CapacityParams(0.5, 1.0)
        coarse = nh_capacity_delta(cloud, params, 1.0, 8)
        fine = nh_capacity_delta(cloud, params, 2.0**-3, 8)
        assert coarse <= fine * (1 + 1e-12)

    def test_bracket(self):
        params = CapacityParams(0.5, 2.0)
        lo, hi = capacity_bracket(1.0, params, 2)
        assert hi == 1.0
        assert lo == pytest.approx((2.0 * math.sqrt(2)) ** (-1.0), rel=1e-12)

    def test_bracket_rejects_custom_phi(self):
        with pytest.raises(ValueError):
            capacity_bracket(1.0, CapacityParams(0.5, 2.0, phi=lambda s: s**2), 1)


class TestPackingNet:
    def test_grid(self):
        cloud = PointCloud(tuple((j / 10.0,) for j in range(11)), 1)
        assert packing_net_count(cloud, 0.25) == 4
        assert packing_net_count(cloud, 1e-6) == 11
        assert packing_net_count(cloud, 5.0) == 1

    @settings(max_examples=40, deadline=None)
    @given(st.lists(unit_coord, min_size=1, max_size=12), st.floats(min_value=1e-3, max_value=1.0))
    def test_separated_and_maximal(self, xs, eps):
        cloud = PointCloud(tuple((x,) for x in xs), 1)
        count = packing_net_count(cloud, eps)
        # reproduce the greedy pass to recover the kept set
        kept = []
        for p in cloud.points:
            if all(math.dist(p, k) >= eps for k in kept):
                kept.append(p)
        assert len(kept) == count
        for i, a in enumerate(kept):
            for b in kept[i + 1:]:
                assert math.dist(a, b) >= eps
        for p in cloud.points:
            assert min(math.dist(p, k) for k in kept) < eps or p in kept


class TestPropertyChecks:
    def _clouds(self):
        a = PointCloud(((0.05,), (0.15,), (0.3,)), 1)
        b = PointCloud(((0.55,), (0.7,), (0.95,)), 1)
        return a, b

    @pytest.mark.parametrize("q", [0.5, 1.0, 2.0, INFINITY])
    def test_subadditivity(self, q):
        a, b = self._clouds()
        inst = HlpInstance(cloud_a=a, cloud_b=b, params=CapacityParams(0.5, q), delta=0.5, depth=6)
        v = check_hlp_item(HlpItem.SUBADDITIVITY, inst)
        assert v.ok

    def test_separated_additivity_exact_for_additive_gauge(self):
        a, b = self._clouds()
        inst = HlpInstance(
            cloud_a=a, cloud_b=b, params=CapacityParams(0.5, 1.0), delta=0.125, depth=7
        )
        v = check_hlp_item(HlpItem.SEPARATED_ADDITIVITY, inst)
        assert v.ok
        assert v.lhs == pytest.approx(v.rhs, abs=1e-9)

    def test_separated_additivity_two_sided(self):
        a, b = self._clouds()
        inst = HlpInstance(
            cloud_a=a, cloud_b=b, params=CapacityParams(0.5, 2.0), delta=0.125, depth=7
        )
        assert check_hlp_item(HlpItem.SEPARATED_ADDITIVITY, inst).ok

    def test_unseparated_is_vacuous(self):
        a, b = self._clouds()
        inst = HlpInstance(cloud_a=a, cloud_b=b, params=CapacityParams(0.5, 1.0), delta=0.9)
        v = check_hlp_item(HlpItem.SEPARATED_ADDITIVITY, inst)
        assert v.ok and "vacuous" in v.note

    def test_q_monotone(self):
        inst = HlpInstance(profile=(2, 4, 8, 16), alpha=0.5, q=1.0, q2=2.0)
        assert check_hlp_item(HlpItem.Q_MONOTONE, inst).ok
        inst = HlpInstance(profile=(3, 1, 9, 2), alpha=1.0, q=2.0, q2=INFINITY)
        assert check_hlp_item(HlpItem.Q_MONOTONE, inst).ok

    def test_alpha_jump_tight_profile(self):
        # doubling counts keep the alpha = 1 sup at exactly 1, so the
        # alpha2 = 2 tail meets the geometric bound with equality
        inst = HlpInstance(profile=(2, 4, 8, 16), alpha=1.0, alpha2=2.0)
        v = check_hlp_item(HlpItem.ALPHA_JUMP, inst)
        assert v.ok
        assert v.lhs == pytest.approx(v.rhs, rel=1e-12)

    def test_gauge_lower_chain(self):
        inst = HlpInstance(
            profile=(1, 3, 9, 27), alpha=1.0, q=0.5, gauge=GaugeFunction(lambda t: t**0.7)
        )
        assert check_hlp_item(HlpItem.GAUGE_LOWER, inst).ok

    @pytest.mark.parametrize("q", [2.0, INFINITY])
    def test_gauge_upper_chain(self, q):
        inst = HlpInstance(
            profile=(1, 3, 9, 27), alpha=1.0, q=q, gauge=GaugeFunction(lambda t: t**1.3)
        )
        assert check_hlp_item(HlpItem.GAUGE_UPPER, inst).ok

    def test_gauge_lower_requires_concave_q(self):
        inst = HlpInstance(profile=(1, 2), alpha=1.0, q=2.0, gauge=GaugeFunction(lambda t: t))
        with pytest.raises(ValueError):
            check_hlp_item(HlpItem.GAUGE_LOWER, inst)


class TestFrostman:
    def test_tent_profile(self):
        assert tent_profile(0.0) == 1.0
        assert tent_profile(3.0) == 0.0
        assert tent_profile(1.5) == pytest.approx(0.5, rel=1e-12)

    def test_bump_pairing_point_mass(self):
        mu = GridMeasure(1, ((0.5,),), (2.0,))
        assert bump_pairing(mu, (0.5,), 0.25) == pytest.approx(2.0, rel=1e-12)
        assert bump_pairing(mu, (0.5,), 1e-3) == pytest.approx(2.0, rel=1e-12)

    def test_point_mass_ratio(self):
        mu = GridMeasure(1, ((0.5,),), (1.0,))
        res = frostman_ratio(mu, 0.5, 1.0, 1.0, random_families=5)
        assert isinstance(res, FrostmanResult)
        assert res.hypothesis_constant > 0
        assert res.conclusion_constant > 0
        # the smallest candidate radius 2^-4 dominates the singleton families
        assert res.hypothesis_constant >= (2.0**4) ** 0.5 - 1e-9

    def test_empty_measure(self):
        res = frostman_ratio(GridMeasure(1, (), ()), 0.5, 1.0, 1.0)
        assert res.hypothesis_constant == 0.0 and res.conclusion_constant == 0.0
