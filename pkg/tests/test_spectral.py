"""Tests for the analytic transforms, moment estimators, bump norms and the
threshold series.

Transforms are checked against direct quadrature of the defining integral at
a handful of frequencies, so the sinc product formulas never certify
themselves.
"""

import math

import numpy as np
import pytest

from fflab.lorentz import LorentzExponents
from fflab.measures import CubeMeasure, ShiftSample
from fflab.spectral import (
    BumpFamily,
    FreqGrid,
    SeriesVerdict,
    SpectrumField,
    TruncationWarning,
    _profile_transform,
    _profile_transform_direct,
    bump_sum_norms,
    cube_measure_transform,
    expected_transform,
    lorentz_spectrum_norm,
    np_moment_estimate,
    np_variance_oracle,
    ooo_deviation,
    random_transform,
    read_spectrum,
    resl_series,
    sinc_tail_bound,
    smooth_bump_profile,
    write_spectrum,
)


def quad_transform(mu: CubeMeasure, xi: float, n: int = 200_001) -> complex:
    """Direct quadrature of int exp(-2 pi i x xi) dmu(x) in one dimension."""
    total = 0.0j
    for (corner,), side, mass in mu.atoms:
        x = np.linspace(corner, corner + side, n)
        f = np.exp(-2j * math.pi * x * xi)
        total += mass / side * np.trapezoid(f, x)
    return total


class TestGrid:
    def test_axis_and_zero(self):
        g = FreqGrid(1, 4.0, 8)
        assert np.allclose(g.axis(), np.arange(-4, 4))
        assert g.axis()[g.zero_index[0]] == 0.0
        assert g.cell_volume == pytest.approx(1.0)

    def test_odd_samples_rejected(self):
        with pytest.raises(ValueError):
            FreqGrid(1, 4.0, 7)

    def test_field_shape_checked(self):
        with pytest.raises(ValueError):
            SpectrumField(FreqGrid(1, 1.0, 4), np.zeros(6))


class TestCubeTransform:
    def test_value_at_zero_is_total_mass(self):
        mu = CubeMeasure(1, (((0.2,), 0.3, 0.4), ((0.6,), 0.1, 0.6)))
        field = cube_measure_transform(mu, FreqGrid(1, 4.0, 8))
        assert field.at_zero == pytest.approx(1.0)

    def test_unit_cube_vanishes_at_integers(self):
        mu = CubeMeasure(1, (((0.0,), 1.0, 1.0),))
        field = cube_measure_transform(mu, FreqGrid(1, 4.0, 8))
        vals = dict(zip(field.grid.axis(), field.values))
        for xi in (-3.0, -1.0, 1.0, 3.0):
            assert abs(vals[xi]) < 1e-12

    def test_against_quadrature(self):
        rng = np.random.default_rng(2)
        atoms = tuple(
            ((c,), s, m)
            for c, s, m in zip(rng.random(3) * 0.5, rng.uniform(0.05, 0.3, 3), (0.2, 0.3, 0.5))
        )
        mu = CubeMeasure(1, atoms)
        field = cube_measure_transform(mu, FreqGrid(1, 4.0, 8))
        for j, xi in enumerate(field.grid.axis()):
            assert field.values[j] == pytest.approx(quad_transform(mu, xi), abs=1e-8)

    def test_hermitian_symmetry(self):
        mu = CubeMeasure(1, (((0.2,), 0.3, 1.0),))
        field = cube_measure_transform(mu, FreqGrid(1, 4.0, 16))
        v = field.values
        n = field.grid.samples
        for j in range(1, n):
            assert v[n - j] == pytest.approx(np.conj(v[j]), abs=1e-12)

    def test_two_dimensional_product(self):
        mu = CubeMeasure(2, (((0.1, 0.3), 0.2, 1.0),))
        field = cube_measure_transform(mu, FreqGrid(2, 2.0, 4))
        mu_x = CubeMeasure(1, (((0.1,), 0.2, 1.0),))
        mu_y = CubeMeasure(1, (((0.3,), 0.2, 1.0),))
        fx = cube_measure_transform(mu_x, FreqGrid(1, 2.0, 4)).values
        fy = cube_measure_transform(mu_y, FreqGrid(1, 2.0, 4)).values
        assert np.allclose(field.values, np.outer(fx, fy))


class TestRandomAndExpected:
    def test_random_matches_cube_measure_form(self):
        rng = np.random.default_rng(3)
        draws = rng.random((6, 1)) * 0.8
        s = ShiftSample(6, 0.2, tuple(map(tuple, draws)), 1)
        grid = FreqGrid(1, 8.0, 32)
        direct = random_transform(s, grid).values
        via_atoms = cube_measure_transform(s.as_cube_measure(), grid).values
        assert np.allclose(direct, via_atoms, atol=1e-12)

    def test_magnitude_bounded_by_mass(self):
        rng = np.random.default_rng(4)
        draws = rng.random((10, 1)) * 0.9
        s = ShiftSample(10, 0.1, tuple(map(tuple, draws)), 1)
        field = random_transform(s, FreqGrid(1, 32.0, 256))
        assert np.all(np.abs(field.values) <= 1.0 + 1e-12)
        assert field.at_zero == pytest.approx(1.0)

    def test_expected_against_density_quadrature(self):
        r = 0.2
        grid = FreqGrid(1, 8.0, 16)
        field = expected_transform(5, r, grid)
        # density of the convolution of uniform laws on [0,r] and [0,1-r]
        x = np.linspace(0.0, 1.0, 400_001)
        dens = (np.minimum(np.minimum(x, r), np.minimum(1.0 - x, 1.0 - r))) / (r * (1.0 - r))
        dens = np.clip(dens, 0.0, None)
        for j, xi in enumerate(grid.axis()):
            quad = np.trapezoid(dens * np.exp(-2j * math.pi * x * xi), x)
            assert field.values[j] == pytest.approx(quad, abs=1e-6)

    def test_expected_free_of_m(self):
        grid = FreqGrid(1, 4.0, 16)
        a = expected_transform(2, 0.1, grid).values
        b = expected_transform(500, 0.1, grid).values
        assert np.array_equal(a, b)

    def test_monte_carlo_matches_variance_oracle(self):
        M, r = 16, 0.25
        grid = FreqGrid(1, 8.0, 64)
        est, se = np_moment_estimate(M, r, 2.0, grid, trials=60, rng=np.random.default_rng(5))
        oracle = np_variance_oracle(M, r, grid)
        assert abs(est - oracle) <= 3.0 * se

    def test_variance_scales_inversely_with_m(self):
        grid = FreqGrid(1, 8.0, 64)
        v1 = np_variance_oracle(10, 0.25, grid)
        v2 = np_variance_oracle(40, 0.25, grid)
        assert v1 == pytest.approx(4.0 * v2, rel=1e-12)

    def test_truncation_warning(self):
        grid = FreqGrid(1, 2.0, 32)
        with pytest.warns(TruncationWarning):
            np_moment_estimate(4, 0.1, 4.0, grid, trials=30, rng=np.random.default_rng(0))

    def test_tail_bound_positive_and_decreasing(self):
        b1 = sinc_tail_bound(0.1, 4.0, 16.0, 1)
        b2 = sinc_tail_bound(0.1, 4.0, 64.0, 1)
        assert 0 < b2 < b1


class TestOooDeviation:
    def test_against_quadrature(self):
        for r, p_exp in ((0.1, 4.0), (0.3, 3.0), (0.49, 6.0)):
            pp = p_exp / (p_exp - 1.0)
            x = np.linspace(0.0, 1.0, 400_001)
            dens = np.clip(
                np.minimum(np.minimum(x, r), np.minimum(1.0 - x, 1.0 - r)) / (r * (1.0 - r)),
                0.0,
                None,
            )
            quad = np.trapezoid(np.abs(1.0 - dens) ** pp, x) ** (1.0 / pp)
            assert ooo_deviation(7, r, p_exp) == pytest.approx(quad, rel=1e-6)

    def test_free_of_m(self):
        assert ooo_deviation(2, 0.1, 4.0) == ooo_deviation(2000, 0.1, 4.0)

    def test_small_r_power_law(self):
        # the deviation scales like r^{1/p'} as r -> 0
        p_exp = 4.0
        rs = [2.0**-k for k in range(10, 21)]
        vals = [ooo_deviation(1, r, p_exp) for r in rs]
        slope = float(np.polyfit(np.log(rs), np.log(vals), 1)[0])
        assert slope == pytest.approx(0.75, abs=0.02)

    def test_rejects_small_p(self):
        with pytest.raises(ValueError):
            ooo_deviation(1, 0.1, 2.0)


class TestBumps:
    def test_profile_support(self):
        assert smooth_bump_profile(0.0) == 1.0
        assert smooth_bump_profile(3.0) == 0.0
        assert smooth_bump_profile(5.0) == 0.0

    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            BumpFamily((((0.3,), 0.2), ((0.5,), 0.2)), 1)

    def test_table_matches_direct(self):
        s = np.random.default_rng(6).uniform(0.0, 10.0, 50)
        table = _profile_transform(s, 1)
        direct = _profile_transform_direct(s, 1)
        assert np.allclose(table, direct, atol=1e-6)

    def test_single_bump_l2(self):
        r = 0.25
        fam = BumpFamily((((0.5,), r),), 1)
        grid = FreqGrid(1, 64.0, 1024)
        l2, sob, l2_bound, sob_bound = bump_sum_norms(fam, grid)
        t = np.linspace(0.0, 3.0, 100_001)
        expect = math.sqrt(2.0 * r * np.trapezoid(smooth_bump_profile(t) ** 2, t))
        assert l2 == pytest.approx(expect, rel=1e-3)
        assert l2_bound == pytest.approx(math.sqrt(r))
        assert sob_bound == pytest.approx(math.sqrt(1.0 / r))
        assert sob > 0

    def test_far_bumps_add_orthogonally(self):
        r = 0.1
        grid = FreqGrid(1, 64.0, 1024)
        one = bump_sum_norms(BumpFamily((((0.5,), r),), 1), grid)
        two = bump_sum_norms(BumpFamily((((0.5,), r), ((10.0,), r)), 1), grid)
        assert two[0] == pytest.approx(math.sqrt(2.0) * one[0], rel=1e-4)


class TestLorentzSpectrumNorm:
    def test_constant_field(self):
        grid = FreqGrid(1, 2.0, 16)
        field = SpectrumField(grid, np.full(16, 3.0, dtype=complex))
        e = LorentzExponents(4.0, 2.0)
        # one plateau of height 3 and mass equal to the window length 4
        assert lorentz_spectrum_norm(field, e) == pytest.approx(3.0 * 4.0**0.25, rel=1e-12)

    def test_zero_field(self):
        grid = FreqGrid(1, 2.0, 16)
        field = SpectrumField(grid, np.zeros(16, dtype=complex))
        assert lorentz_spectrum_norm(field, LorentzExponents(2.0, 2.0)) == 0.0


class TestSeries:
    def test_boundary_diverges(self):
        _, verdict = resl_series(4.0, 2.0, 1, 1.0, 50)
        assert verdict is SeriesVerdict.DIVERGENT

    def test_below_boundary_diverges(self):
        _, verdict = resl_series(4.0, 2.0, 1, 0.8, 50)
        assert verdict is SeriesVerdict.DIVERGENT

    def test_above_boundary_converges(self):
        sums, verdict = resl_series(4.0, 2.0, 1, 1.6, 50)
        assert verdict is SeriesVerdict.CONVERGENT
        assert len(sums) == 51
        assert np.all(np.diff(sums) > 0)

    def test_partial_sums_prefix_stable(self):
        s10, _ = resl_series(4.0, 3.0, 1, 1.2, 10)
        s40, _ = resl_series(4.0, 3.0, 1, 1.2, 40)
        assert np.allclose(s10, s40[:11])

    def test_rejects_small_q(self):
        with pytest.raises(ValueError):
            resl_series(4.0, 1.0, 1, 2.0, 20)


class TestBinaryFormat:
    def test_round_trip(self, tmp_path):
        mu = CubeMeasure(1, (((0.2,), 0.3, 1.0),))
        field = cube_measure_transform(mu, FreqGrid(1, 4.0, 32))
        path = tmp_path / "field.spec"
        write_spectrum(field, path)
        back = read_spectrum(path)
        assert back.grid == field.grid
        assert np.array_equal(back.values, field.values)

    def test_header(self, tmp_path):
        field = SpectrumField(FreqGrid(1, 2.0, 4), np.zeros(4, dtype=complex))
        path = tmp_path / "field.spec"
        write_spectrum(field, path)
        raw = path.read_bytes()
        assert raw[:5] == b"SPEC1"
        assert len(raw) == 5 + 16 + 4 * 2 * 8

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.spec"
        path.write_bytes(b"NOPE!" + b"\0" * 32)
        with pytest.raises(ValueError, match="magic"):
            read_spectrum(path)
