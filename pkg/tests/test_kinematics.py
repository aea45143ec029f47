import numpy as np
import pytest

from cdpr import (
    PlatformPose,
    RobotGeometry,
    SingularPoseError,
    cable_rates,
    cable_state,
    jacobians,
)

from conftest import random_poses


def closed_form_structure_matrix(geom, x, y):
    """Independent scalar derivation of the 3 x 4 planar structure matrix.

    Each column is [u_x, u_y, r_x u_y - r_y u_x] for a cable pulling the
    platform from attachment point r toward frame anchor a, written out
    component by component (no shared vector code with the library).
    """
    A = np.empty((3, 4))
    for i in range(4):
        ax, ay = geom.anchors[i, 0], geom.anchors[i, 1]
        rx, ry = geom.attachments[i, 0], geom.attachments[i, 1]
        dx = ax - (x + rx)
        dy = ay - (y + ry)
        length = (dx * dx + dy * dy) ** 0.5
        ux, uy = dx / length, dy / length
        A[0, i] = ux
        A[1, i] = uy
        A[2, i] = rx * uy - ry * ux
    return A


def closed_form_cb_matrix(geom, x, y):
    """Same scalar derivation for the counterbalance cables."""
    A = np.empty((3, geom.m))
    for j in range(geom.m):
        fx, fy = geom.cb_pulleys_fixed[j, 0], geom.cb_pulleys_fixed[j, 1]
        cx, cy = geom.cb_pulleys_platform[j, 0], geom.cb_pulleys_platform[j, 1]
        dx = fx - (x + cx)
        dy = fy - (y + cy)
        length = (dx * dx + dy * dy) ** 0.5
        A[0, j] = dx / length
        A[1, j] = dy / length
        A[2, j] = cx * dy / length - cy * dx / length
    return A


class TestCableState:
    def test_lengths_at_origin(self, geom):
        state = cable_state(geom, PlatformPose.planar(0.0, 0.0))
        # frozen from an independent hand calculation:
        # sqrt((14 - 0.95)^2 + (2.85 - 0.45)^2)
        assert state.l_len[0] == pytest.approx(13.2688545097156, abs=1e-12)
        np.testing.assert_allclose(state.l_len[:2], state.l_len[0])
        # sqrt((13 - 0)^2 + (3.246 - 0.45)^2)
        assert state.d_len[0] == pytest.approx(13.297278518554087, abs=1e-12)

    def test_unit_vectors_point_along_cables(self, geom, rng):
        for x, y in random_poses(rng, 50):
            state = cable_state(geom, PlatformPose.planar(x, y))
            np.testing.assert_allclose(np.linalg.norm(state.u_hat, axis=1), 1.0,
                                       atol=1e-12)
            np.testing.assert_allclose(
                state.u_hat * state.l_len[:, None], -state.l_vec, atol=1e-12)

    def test_singular_pose_raises(self, geom):
        # platform shifted so attachment 1 lands exactly on anchor 1
        x = geom.anchors[0, 0] - geom.attachments[0, 0]
        y = geom.anchors[0, 1] - geom.attachments[0, 1]
        with pytest.raises(SingularPoseError) as err:
            cable_state(geom, PlatformPose.planar(x, y))
        assert err.value.index == 1

    def test_singular_counterbalance(self, geom):
        x = geom.cb_pulleys_fixed[0, 0] - geom.cb_pulleys_platform[0, 0]
        y = geom.cb_pulleys_fixed[0, 1] - geom.cb_pulleys_platform[0, 1]
        with pytest.raises(SingularPoseError) as err:
            cable_state(geom, PlatformPose.planar(x, y))
        assert err.value.kind == "counterbalance"


class TestJacobians:
    def test_shapes(self, geom):
        jac = jacobians(geom, PlatformPose.planar(1.0, 0.5))
        assert jac.J_l.shape == (4, 6)
        assert jac.J_d.shape == (2, 6)
        assert jac.J.shape == (6, 6)
        assert jac.structure_matrix.shape == (3, 4)
        assert jac.cb_structure_matrix.shape == (3, 2)

    def test_structure_matrix_closed_form(self, geom, region):
        """Numeric structure matrix equals the scalar closed form to 1e-12
        everywhere on the scan region (coarse sampling)."""
        for x in region.x_values()[::25]:
            for y in region.y_values()[::10]:
                jac = jacobians(geom, PlatformPose.planar(x, y))
                np.testing.assert_allclose(
                    jac.structure_matrix,
                    closed_form_structure_matrix(geom, x, y), atol=1e-12)
                np.testing.assert_allclose(
                    jac.cb_structure_matrix,
                    closed_form_cb_matrix(geom, x, y), atol=1e-12)

    def test_finite_difference_rates(self, geom, rng):
        """Length rates from the Jacobian match central differences of the
        cable lengths to 1e-6 relative, at 1000 random pose/twist pairs."""
        eps = 1e-6
        poses = random_poses(rng, 1000)
        for x, y in poses:
            v = rng.normal(size=2)
            twist = np.array([v[0], v[1], 0.0, 0.0, 0.0, 0.0])
            dl, dd = cable_rates(geom, PlatformPose.planar(x, y), twist)
            lp = cable_state(geom, PlatformPose.planar(x + eps * v[0], y + eps * v[1]))
            lm = cable_state(geom, PlatformPose.planar(x - eps * v[0], y - eps * v[1]))
            fd_l = (lp.l_len - lm.l_len) / (2 * eps)
            fd_d = (lp.d_len - lm.d_len) / (2 * eps)
            scale = max(1.0, float(np.abs(fd_l).max()))
            np.testing.assert_allclose(dl, fd_l, atol=1e-6 * scale)
            np.testing.assert_allclose(dd, fd_d, atol=1e-6 * scale)

    def test_rate_sign_convention(self, geom):
        """Moving straight up shortens the upper cables (negative rate would
        mean lengthening, given rates = -J @ twist)."""
        up = np.array([0.0, 1.0, 0.0, 0.0, 0.0, 0.0])
        dl, dd = cable_rates(geom, PlatformPose.planar(0.0, 0.0), up)
        assert dl[0] < 0 and dl[1] < 0    # upper cables shorten
        assert dl[2] > 0 and dl[3] > 0    # lower cables lengthen
        assert np.all(dd < 0)             # counterbalance cables shorten

    def test_x_mirror_symmetry(self, geom, rng):
        for x, y in random_poses(rng, 50):
            a = jacobians(geom, PlatformPose.planar(x, y)).structure_matrix
            b = jacobians(geom, PlatformPose.planar(-x, y)).structure_matrix
            # mirroring x swaps cables (1,2) and (3,4) and flips Fx and Mz
            swap = [1, 0, 3, 2]
            np.testing.assert_allclose(a[0], -b[0, swap], atol=1e-12)
            np.testing.assert_allclose(a[1], b[1, swap], atol=1e-12)
            np.testing.assert_allclose(a[2], -b[2, swap], atol=1e-12)

    def test_twist_shape_checked(self, geom):
        with pytest.raises(ValueError):
            cable_rates(geom, PlatformPose.planar(0, 0), np.zeros(3))
