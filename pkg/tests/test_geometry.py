import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from oamswipt import DegenerateOrientation, InvalidGeometry, SystemGeometry, element_layout, orientation_frame
from oamswipt.geometry import deflection_angle

angles = st.floats(0.0, math.pi / 2 - 1e-6)


def test_boresight_frame():
    f = orientation_frame(0.0, 0.0)
    np.testing.assert_allclose(f.n_hat, [0, 0, 1])
    np.testing.assert_allclose(f.a_hat, [0, 1, 0])
    np.testing.assert_allclose(f.b_hat, [-1, 0, 0])


def test_right_angle_limit_is_axis():
    np.testing.assert_allclose(orientation_frame(0.0, math.pi / 2).n_hat, [0, 1, 0])
    np.testing.assert_allclose(orientation_frame(math.pi / 2, 0.0).n_hat, [1, 0, 0])


def test_right_angle_snaps_within_tolerance():
    f = orientation_frame(0.0, math.pi / 2 - 1e-13)
    np.testing.assert_allclose(f.n_hat, [0, 1, 0])


def test_both_right_angles_rejected():
    with pytest.raises(DegenerateOrientation):
        orientation_frame(math.pi / 2, math.pi / 2)
    with pytest.raises(DegenerateOrientation):
        SystemGeometry(theta_x_R=math.pi / 2, theta_y_R=math.pi / 2)


@given(angles, angles)
def test_frame_is_orthonormal(tx, ty):
    f = orientation_frame(tx, ty)
    M = np.vstack([f.a_hat, f.b_hat, f.n_hat])
    np.testing.assert_allclose(M @ M.T, np.eye(3), atol=1e-12)


@given(angles, angles)
def test_frame_matches_oracle(tx, ty):
    f = orientation_frame(tx, ty)
    a, b, n = oracles.frame(tx, ty)
    np.testing.assert_allclose(f.a_hat, a, atol=1e-12)
    np.testing.assert_allclose(f.b_hat, b, atol=1e-12)
    np.testing.assert_allclose(f.n_hat, n, atol=1e-12)


def test_first_tx_element_on_x_axis(geometry):
    np.testing.assert_allclose(element_layout(geometry).tx_positions[0], [0.1, 0, 0], atol=1e-15)


def test_first_rx_element_at_boresight(geometry):
    np.testing.assert_allclose(element_layout(geometry).rx_positions[0], [0.1, 0, 20], atol=1e-15)


def test_single_ris_element_at_centre():
    g = SystemGeometry(N_I_r=1, N_I_c=1, p_x=0.3, p_y=-0.1, p_z=0.7)
    np.testing.assert_allclose(element_layout(g).ris_positions, [[0.3, -0.1, 0.7]])


def test_layout_matches_oracle_at_paper_settings(geometry):
    layout = element_layout(geometry)
    tx, rx, ris = oracles.positions(geometry)
    np.testing.assert_allclose(layout.tx_positions, tx, atol=1e-15)
    np.testing.assert_allclose(layout.rx_positions, rx, atol=1e-15)
    np.testing.assert_allclose(layout.ris_positions, ris, atol=1e-15)


@given(angles, angles, st.integers(1, 5), st.integers(1, 5))
def test_tilted_layout_matches_oracle(tx, ty, rows, cols):
    g = SystemGeometry(theta_x=tx, theta_y=ty, theta_x_R=ty, theta_y_R=tx, N_I_r=rows, N_I_c=cols)
    layout = element_layout(g)
    _, rx, ris = oracles.positions(g)
    np.testing.assert_allclose(layout.rx_positions, rx, atol=1e-12)
    np.testing.assert_allclose(layout.ris_positions, ris, atol=1e-12)


@given(angles, angles)
def test_rx_ring_radius_and_plane(tx, ty):
    g = SystemGeometry(theta_x=tx, theta_y=ty, R_r=0.3)
    layout = element_layout(g)
    rel = layout.rx_positions - g.rx_center
    np.testing.assert_allclose(np.linalg.norm(rel, axis=1), 0.3, rtol=1e-12)
    np.testing.assert_allclose(rel @ layout.rx_frame.n_hat, 0, atol=1e-12)


def test_ris_grid_is_centred_and_spaced(geometry):
    pos = element_layout(geometry).ris_positions
    np.testing.assert_allclose(pos.mean(axis=0), geometry.ris_center, atol=1e-15)
    # row-major order: neighbours along a row are d apart
    np.testing.assert_allclose(np.linalg.norm(pos[1] - pos[0]), geometry.d, rtol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(pos[geometry.N_I_c] - pos[0]), geometry.d, rtol=1e-12)


def test_paper_ris_lies_in_xz_plane(geometry):
    # tilt (0, pi/2) turns the RIS normal to +y
    pos = element_layout(geometry).ris_positions
    np.testing.assert_allclose(pos[:, 1], geometry.p_y, atol=1e-15)


def test_deflection_angles():
    assert deflection_angle(0.0, 0.0) == 0.0
    assert deflection_angle(0.0, math.pi / 2) == pytest.approx(math.pi / 2)
    assert deflection_angle(0.3, 0.0) == pytest.approx(0.3)


def test_empty_ris_allowed():
    layout = element_layout(SystemGeometry(N_I_r=0, N_I_c=0))
    assert layout.ris_positions.shape == (0, 3)


@pytest.mark.parametrize(
    "kw",
    [{"N_t": 0}, {"R_t": 0.0}, {"d": -1.0}, {"D": 0.0}, {"theta_x": -0.1}, {"theta_y_R": 2.0}, {"N_I_r": -1}],
)
def test_invalid_geometry(kw):
    with pytest.raises(InvalidGeometry):
        SystemGeometry(**kw)
