import numpy as np
import pytest

from cdpr import (
    ConfigurationError,
    GeometryError,
    PlatformPose,
    ScanRegion,
    completeness_gap,
    cost_rigid,
    coverage,
    scan,
    union_scan,
)
from cdpr import _kernels


class TestScan:
    def test_matches_per_pose_classification(self, geom, coarse_region):
        """The vectorized scan agrees with the scalar feasibility check at
        every cell (brute-force oracle)."""
        grid = scan(geom, coarse_region, 3000.0)
        xs, ys = coarse_region.x_values(), coarse_region.y_values()
        for ix in range(0, xs.size, 3):
            for iy in range(ys.size):
                ref = cost_rigid(geom, PlatformPose.planar(xs[ix], ys[iy]), 3000.0)
                assert grid.reachable[ix, iy] == ref.feasible_any
                if ref.feasible_any:
                    assert grid.gamma[ix, iy] == pytest.approx(ref.gamma, rel=1e-9)
                    np.testing.assert_allclose(grid.tensions[ix, iy, :4],
                                               ref.T_opt, rtol=1e-9, atol=1e-6)
                    assert grid.tensions[ix, iy, 4] == 3000.0
                else:
                    assert np.isnan(grid.gamma[ix, iy])

    def test_area_is_count_times_step_squared(self, geom, coarse_region):
        grid = scan(geom, coarse_region, 3000.0)
        assert grid.area_m2 == pytest.approx(
            grid.reachable.sum() * coarse_region.step ** 2)

    def test_x_mirror_symmetry(self, geom, coarse_region):
        grid = scan(geom, coarse_region, 3000.0)
        np.testing.assert_array_equal(grid.reachable, grid.reachable[::-1])

    def test_out_of_bounds_t5_empty(self, geom, coarse_region):
        grid = scan(geom, coarse_region, 1e6)
        assert grid.area_m2 == 0.0
        assert not grid.reachable.any()

    def test_out_of_bounds_t5_lifted(self, geom, coarse_region):
        grid = scan(geom, coarse_region, 17000.0, enforce_t5_bounds=False)
        assert grid.area_m2 > 0.0

    def test_jobs_invariance(self, geom, coarse_region):
        a = scan(geom, coarse_region, 3000.0, jobs=1)
        b = scan(geom, coarse_region, 3000.0, jobs=5)
        np.testing.assert_array_equal(a.reachable, b.reachable)
        np.testing.assert_array_equal(np.nan_to_num(a.gamma), np.nan_to_num(b.gamma))
        np.testing.assert_array_equal(np.nan_to_num(a.tensions),
                                      np.nan_to_num(b.tensions))

    def test_elastic_rigid_limit(self, planar, coarse_region):
        from dataclasses import replace
        from cdpr import ElasticParams, Variant, expand_planar
        wide = ElasticParams(ea=[1e15] * 6, l0_min=[0.0] * 6, l0_max=[100.0] * 6)
        g = expand_planar(replace(planar, elastic=wide), Variant.A)
        rigid = scan(g, coarse_region, 3000.0)
        elastic = scan(g, coarse_region, 3000.0, mode="elastic")
        np.testing.assert_array_equal(rigid.reachable, elastic.reachable)

    def test_elastic_requires_parameters(self, geom, coarse_region):
        with pytest.raises(ConfigurationError):
            scan(geom, coarse_region, 3000.0, mode="elastic")

    def test_unknown_mode(self, geom, coarse_region):
        with pytest.raises(ConfigurationError):
            scan(geom, coarse_region, 3000.0, mode="magic")


class TestBackends:
    @pytest.mark.skipif(not _kernels.numba_available(),
                        reason="compiled backend unavailable")
    def test_backends_agree(self, geom, coarse_region):
        xs, ys = coarse_region.x_values(), coarse_region.y_values()
        kwargs = dict(
            anchors=geom.anchors[:, :2], attachments=geom.attachments[:, :2],
            cb_fixed=geom.cb_pulleys_fixed[:, :2],
            cb_platform=geom.cb_pulleys_platform[:, :2],
            tmin=geom.tension_min, tmax=geom.tension_max,
            t5=3000.0, weight=geom.platform_mass * geom.gravity)
        fa, ga, ta = _kernels.scan_cells(xs, ys, backend="numba", **kwargs)
        fb, gb, tb = _kernels.scan_cells(xs, ys, backend="numpy", **kwargs)
        np.testing.assert_array_equal(fa, fb)
        np.testing.assert_allclose(np.nan_to_num(ga), np.nan_to_num(gb),
                                   rtol=1e-9, atol=1e-6)
        np.testing.assert_allclose(np.nan_to_num(ta), np.nan_to_num(tb),
                                   rtol=1e-9, atol=1e-6)


class TestUnion:
    def test_singleton_union_equals_scan(self, geom, coarse_region):
        single = scan(geom, coarse_region, 3000.0, enforce_t5_bounds=False)
        union = union_scan(geom, coarse_region, [3000.0])
        np.testing.assert_array_equal(single.reachable, union.reachable)
        np.testing.assert_array_equal(np.nan_to_num(single.tensions),
                                      np.nan_to_num(union.tensions))

    def test_union_contains_members(self, geom, coarse_region):
        t5s = [0.0, 2000.0, 4000.0]
        union = union_scan(geom, coarse_region, t5s)
        for t5 in t5s:
            member = scan(geom, coarse_region, t5, enforce_t5_bounds=False)
            assert not (member.reachable & ~union.reachable).any()
        assert union.area_m2 >= max(
            scan(geom, coarse_region, t5, enforce_t5_bounds=False).area_m2
            for t5 in t5s)

    def test_first_tension_wins(self, geom, coarse_region):
        union = union_scan(geom, coarse_region, [2000.0, 3000.0])
        first = scan(geom, coarse_region, 2000.0, enforce_t5_bounds=False)
        cells = first.reachable
        np.testing.assert_array_equal(union.tensions[cells, 4],
                                      np.full(cells.sum(), 2000.0))

    def test_empty_values_rejected(self, geom, coarse_region):
        with pytest.raises(ConfigurationError):
            union_scan(geom, coarse_region, [])


class TestCoverage:
    def test_full_region_fraction(self, geom, coarse_region):
        grid = scan(geom, coarse_region, 3000.0)
        report = coverage(grid, coarse_region)
        assert report.covered_fraction == pytest.approx(
            grid.reachable.sum() / grid.reachable.size)
        assert report.desired_area_m2 == pytest.approx(coarse_region.area_m2)

    def test_corner_flags(self, geom, coarse_region):
        grid = scan(geom, coarse_region, 3000.0)
        report = coverage(grid, coarse_region)
        assert report.corners_covered == (
            bool(grid.reachable[0, 0]), bool(grid.reachable[-1, 0]),
            bool(grid.reachable[0, -1]), bool(grid.reachable[-1, -1]))
        assert report.bottom_corners_covered == (
            report.corners_covered[0] and report.corners_covered[1])

    def test_desired_must_be_contained(self, geom, coarse_region):
        grid = scan(geom, coarse_region, 3000.0)
        too_big = ScanRegion(-50.0, 50.0, -5.0, 5.0, 0.25)
        with pytest.raises(GeometryError):
            coverage(grid, too_big)

    def test_subregion(self, geom, coarse_region):
        grid = scan(geom, coarse_region, 3000.0)
        inner = ScanRegion(-5.0, 5.0, -1.0, 1.0, 0.25)
        report = coverage(grid, inner)
        assert report.covered_fraction == 1.0


class TestCsv:
    def test_format(self, geom, tmp_path):
        region = ScanRegion(-1.0, 1.0, -0.5, 0.5, 0.5)
        grid = scan(geom, region, 3000.0)
        path = tmp_path / "grid.csv"
        grid.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "x_m,y_m,reachable,gamma_N,T1_N,T2_N,T3_N,T4_N,T5_N"
        assert len(lines) == 1 + region.nx * region.ny
        # y-major: the first nx rows share the lowest y
        first = [line.split(",") for line in lines[1:1 + region.nx]]
        assert all(row[1] == "-0.5" for row in first)
        assert [row[0] for row in first] == ["-1", "-0.5", "0", "0.5", "1"]
        for row in first:
            if row[2] == "0":
                assert row[3:] == [""] * 6
            else:
                assert all(cell for cell in row[3:])

    def test_deterministic_bytes(self, geom, coarse_region, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        scan(geom, coarse_region, 3000.0, jobs=1).to_csv(a)
        scan(geom, coarse_region, 3000.0, jobs=4).to_csv(b)
        assert a.read_bytes() == b.read_bytes()


class TestCompletenessGap:
    def test_candidate_method_sound(self, geom):
        """No cell is candidate-feasible yet null-space-infeasible. The
        reverse set (poses only the null-space interval reaches) is reported
        by the audit but carries no assertion."""
        audit = ScanRegion(-12.5, 12.5, -2.85, 2.15, 1.0)
        unsound, incomplete = completeness_gap(geom, audit, 3000.0)
        assert unsound == []
        assert isinstance(incomplete, list)
