"""Free-space LOS channels between the arrays and their composition."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import CoincidentElements, DimensionMismatch
from .geometry import ElementLayout

__all__ = [
    "PropagationParams",
    "ChannelSet",
    "ReflectionState",
    "free_space",
    "build_channels",
    "compose",
    "oam_channel",
    "dump_channels_csv",
]


@dataclass(frozen=True)
class PropagationParams:
    beta: float = 1.0
    wavelength: float = 0.05
    K: float = 1.0

    def __post_init__(self):
        if self.wavelength <= 0 or self.beta <= 0:
            raise ValueError("beta and wavelength must be positive")
        if not 0.0 <= self.K <= 1.0:
            raise ValueError(f"K={self.K} outside [0, 1]")


@dataclass(frozen=True)
class ChannelSet:
    H_in: np.ndarray  # (N_I, N_t)
    H_ref: np.ndarray  # (N_r, N_I)
    H_los: np.ndarray  # (N_r, N_t)
    params: PropagationParams

    @property
    def N_I(self) -> int:
        return self.H_in.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.H_los.shape


@dataclass(frozen=True)
class ReflectionState:
    phi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=complex)
        if phi.ndim != 1:
            raise DimensionMismatch("phi must be a vector")
        if phi.size and np.max(np.abs(np.abs(phi) - 1)) > 1e-9:
            raise ValueError("reflection coefficients must have unit modulus")
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_phases(cls, angles) -> "ReflectionState":
        return cls(np.exp(1j * np.asarray(angles, dtype=float)))

    @classmethod
    def ones(cls, n: int) -> "ReflectionState":
        return cls(np.ones(n, dtype=complex))


def free_space(dst: np.ndarray, src: np.ndarray, params: PropagationParams) -> np.ndarray:
    """Matrix of beta*lambda/(4 pi r) * exp(-j 2 pi r / lambda), rows index ``dst``."""
    dist = np.linalg.norm(dst[:, None, :] - src[None, :, :], axis=-1)
    if dist.size and np.min(dist) <= 0:
        raise CoincidentElements("zero distance between two elements")
    lam = params.wavelength
    return params.beta * lam / (4 * np.pi * dist) * np.exp(-2j * np.pi * dist / lam)


def build_channels(layout: ElementLayout, params: PropagationParams) -> ChannelSet:
    return ChannelSet(
        H_in=free_space(layout.ris_positions, layout.tx_positions, params),
        H_ref=free_space(layout.rx_positions, layout.ris_positions, params),
        H_los=free_space(layout.rx_positions, layout.tx_positions, params),
        params=params,
    )


def compose(channels: ChannelSet, refl: ReflectionState | np.ndarray | None) -> np.ndarray:
    """End-to-end channel sqrt(K) H_los + H_ref diag(phi) H_in.

    ``refl=None`` drops the reflected term entirely (RIS absent).
    """
    H = np.sqrt(channels.params.K) * channels.H_los
    if refl is None:
        return H
    phi = refl.phi if isinstance(refl, ReflectionState) else np.asarray(refl)
    if phi.shape != (channels.N_I,):
        raise DimensionMismatch(f"phi has shape {phi.shape}, expected ({channels.N_I},)")
    return H + (channels.H_ref * phi) @ channels.H_in


def oam_channel(H: np.ndarray, transforms=None) -> np.ndarray:
    """Mode-domain channel W' H W."""
    from .oam import make_transforms

    if transforms is None:
        transforms = make_transforms(H.shape[1], H.shape[0])
    return transforms.W_prime @ H @ transforms.W


def dump_channels_csv(channels: ChannelSet, path) -> None:
    """Write every channel entry as ``matrix,row,col,re,im``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["matrix", "row", "col", "re", "im"])
        for name, mat in (("H_in", channels.H_in), ("H_ref", channels.H_ref), ("H_los", channels.H_los)):
            for (i, j), val in np.ndenumerate(mat):
                writer.writerow([name, i, j, repr(float(val.real)), repr(float(val.imag))])
