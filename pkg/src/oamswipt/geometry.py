"""Element coordinates for the transmit UCA, the tilted receive UCA and the RIS.

The transmit UCA sits in the z = 0 plane centred on the origin, with its
first element on the +x axis.  The receive UCA and the RIS are planar arrays
whose orientation is given by two tilt angles measured against the transmit
normal along x and y.  All lengths are in meters and all angles in radians.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateOrientation, InvalidGeometry

__all__ = [
    "SystemGeometry",
    "OrientationFrame",
    "ElementLayout",
    "orientation_frame",
    "element_layout",
    "deflection_angle",
]

_HALF_PI = np.pi / 2
_ANGLE_SNAP = 1e-12


@dataclass(frozen=True)
class SystemGeometry:
    N_t: int = 8
    N_r: int = 8
    R_t: float = 0.1
    R_r: float = 0.1
    d_x: float = 0.0
    d_y: float = 0.0
    D: float = 20.0
    theta_x: float = 0.0
    theta_y: float = 0.0
    p_x: float = 0.0
    p_y: float = -0.2
    p_z: float = 0.4
    theta_x_R: float = 0.0
    theta_y_R: float = _HALF_PI
    N_I_r: int = 4
    N_I_c: int = 4
    d: float = 0.025

    def __post_init__(self):
        if self.N_t < 1 or self.N_r < 1:
            raise InvalidGeometry("N_t and N_r must be >= 1")
        if self.N_I_r < 0 or self.N_I_c < 0:
            raise InvalidGeometry("RIS row/column counts must be >= 0")
        if min(self.R_t, self.R_r, self.d) <= 0:
            raise InvalidGeometry("radii and RIS spacing must be strictly positive")
        if self.D <= 0:
            raise InvalidGeometry("D must be strictly positive")
        for name in ("theta_x", "theta_y", "theta_x_R", "theta_y_R"):
            value = getattr(self, name)
            if not (-_ANGLE_SNAP <= value <= _HALF_PI + _ANGLE_SNAP):
                raise InvalidGeometry(f"{name}={value} outside [0, pi/2]")
        for pair in ((self.theta_x, self.theta_y), (self.theta_x_R, self.theta_y_R)):
            if all(_is_right_angle(a) for a in pair):
                raise DegenerateOrientation("both tilt angles equal pi/2")

    @property
    def N_I(self) -> int:
        return self.N_I_r * self.N_I_c

    @property
    def ris_center(self) -> np.ndarray:
        return np.array([self.p_x, self.p_y, self.p_z], dtype=float)

    @property
    def rx_center(self) -> np.ndarray:
        return np.array([self.d_x, self.d_y, self.D], dtype=float)

    def replace(self, **changes) -> "SystemGeometry":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class OrientationFrame:
    a_hat: np.ndarray
    b_hat: np.ndarray
    n_hat: np.ndarray


@dataclass(frozen=True)
class ElementLayout:
    tx_positions: np.ndarray  # (N_t, 3)
    rx_positions: np.ndarray  # (N_r, 3)
    ris_positions: np.ndarray  # (N_I, 3)
    theta: float
    theta_R: float
    rx_frame: OrientationFrame = field(repr=False)
    ris_frame: OrientationFrame = field(repr=False)


def _is_right_angle(angle: float) -> bool:
    return abs(angle - _HALF_PI) <= _ANGLE_SNAP


def _unit(vec: np.ndarray) -> np.ndarray:
    return vec / np.linalg.norm(vec)


def orientation_frame(theta_x: float, theta_y: float) -> OrientationFrame:
    """Orthonormal frame of a planar array tilted by ``(theta_x, theta_y)``.

    The normal is the direction of ``(tan theta_x, tan theta_y, 1)``.  A tilt
    of exactly pi/2 on one axis is taken as the limit, i.e. the normal becomes
    that coordinate axis.  The in-plane axes are ``a = n x e_x`` and
    ``b = n x a``; when ``n`` is parallel to ``e_x``, ``e_y`` replaces ``e_x``.
    """
    right_x, right_y = _is_right_angle(theta_x), _is_right_angle(theta_y)
    if right_x and right_y:
        raise DegenerateOrientation("both tilt angles equal pi/2")
    if right_x:
        n_hat = np.array([1.0, 0.0, 0.0])
    elif right_y:
        n_hat = np.array([0.0, 1.0, 0.0])
    else:
        n_hat = _unit(np.array([np.tan(theta_x), np.tan(theta_y), 1.0]))

    a_raw = np.cross(n_hat, [1.0, 0.0, 0.0])
    if np.linalg.norm(a_raw) < 1e-12:
        a_raw = np.cross(n_hat, [0.0, 1.0, 0.0])
        if np.linalg.norm(a_raw) < 1e-12:
            raise DegenerateOrientation("in-plane axis undefined")
    a_hat = _unit(a_raw)
    b_hat = _unit(np.cross(n_hat, a_hat))
    return OrientationFrame(a_hat=a_hat, b_hat=b_hat, n_hat=n_hat)


def deflection_angle(theta_x: float, theta_y: float) -> float:
    """Angle between the array normal and the z axis."""
    if _is_right_angle(theta_x) or _is_right_angle(theta_y):
        return _HALF_PI
    return float(np.arctan(np.hypot(np.tan(theta_x), np.tan(theta_y))))


def _ring(n: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n) / n


def element_layout(geom: SystemGeometry) -> ElementLayout:
    """Coordinates of every element, one row per element."""
    ang_t = _ring(geom.N_t)
    tx = np.column_stack(
        [geom.R_t * np.cos(ang_t), geom.R_t * np.sin(ang_t), np.zeros(geom.N_t)]
    )

    rx_frame = orientation_frame(geom.theta_x, geom.theta_y)
    ang_r = _ring(geom.N_r)
    rx = (
        geom.rx_center
        - geom.R_r * np.cos(ang_r)[:, None] * rx_frame.b_hat
        + geom.R_r * np.sin(ang_r)[:, None] * rx_frame.a_hat
    )

    ris_frame = orientation_frame(geom.theta_x_R, geom.theta_y_R)
    idx = np.arange(geom.N_I)
    col = idx % geom.N_I_c if geom.N_I_c else idx
    row = idx // geom.N_I_c if geom.N_I_c else idx
    col_off = col * geom.d - geom.d * (geom.N_I_c - 1) / 2
    row_off = row * geom.d - geom.d * (geom.N_I_r - 1) / 2
    ris = (
        geom.ris_center
        - col_off[:, None] * ris_frame.b_hat
        + row_off[:, None] * ris_frame.a_hat
    ).reshape(geom.N_I, 3)

    return ElementLayout(
        tx_positions=tx,
        rx_positions=rx,
        ris_positions=ris,
        theta=deflection_angle(geom.theta_x, geom.theta_y),
        theta_R=deflection_angle(geom.theta_x_R, geom.theta_y_R),
        rx_frame=rx_frame,
        ris_frame=ris_frame,
    )
