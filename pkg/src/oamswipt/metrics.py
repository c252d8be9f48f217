"""Closed-form per-mode SINR, sum rate and harvested power."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidSplit
from .oam import NoiseModel, PowerAllocation, dbm_to_watts

__all__ = [
    "PowerSplit",
    "LinkBudget",
    "LinkMetrics",
    "mode_sinr",
    "sum_capacity",
    "harvested_power",
    "link_metrics",
]


@dataclass(frozen=True)
class PowerSplit:
    """Per-mode fraction of received power routed to the harvester."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        if rho.ndim != 1:
            raise DimensionMismatch("rho must be a vector")
        if np.any(rho < 0) or np.any(rho > 1) or not np.all(np.isfinite(rho)):
            raise InvalidSplit("power splitting ratios must lie in [0, 1]")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def zeros(cls, n: int) -> "PowerSplit":
        return cls(np.zeros(n))


@dataclass(frozen=True)
class LinkBudget:
    P_t_max: float
    Q_min: float
    eta: float
    noise: NoiseModel = field(default_factory=lambda: NoiseModel.from_dbm(-20.0, -33.0))

    def __post_init__(self):
        if self.P_t_max <= 0:
            raise ValueError("P_t_max must be positive")
        if self.Q_min < 0:
            raise ValueError("Q_min must be non-negative")
        if not 0 <= self.eta <= 1:
            raise ValueError("eta must lie in [0, 1]")

    @classmethod
    def from_dbm(cls, P_t_dbm, Q_min_dbm, eta, sigma_n_dbm, sigma_cov_dbm) -> "LinkBudget":
        Q = 0.0 if Q_min_dbm is None else float(dbm_to_watts(Q_min_dbm))
        return cls(
            P_t_max=float(dbm_to_watts(P_t_dbm)),
            Q_min=Q,
            eta=eta,
            noise=NoiseModel.from_dbm(sigma_n_dbm, sigma_cov_dbm),
        )

    def allocation(self, n_modes: int) -> PowerAllocation:
        return PowerAllocation.uniform_split(self.P_t_max, n_modes)


@dataclass(frozen=True)
class LinkMetrics:
    sinr: np.ndarray
    capacity: float
    harvested: float


def _as_rho(rho, n: int) -> np.ndarray:
    rho = rho.rho if isinstance(rho, PowerSplit) else PowerSplit(rho).rho
    if rho.shape != (n,):
        raise DimensionMismatch(f"rho has shape {rho.shape}, expected ({n},)")
    return rho


def _mode_powers(H_oam: np.ndarray, alloc: PowerAllocation):
    n = H_oam.shape[1]
    if H_oam.shape[0] != n:
        raise DimensionMismatch("per-mode metrics need a square mode-domain channel")
    if alloc.per_mode.size != n:
        raise DimensionMismatch("allocation length differs from N_t")
    gains = np.abs(H_oam) ** 2 * alloc.per_mode[None, :]
    signal = np.diag(gains).copy()
    return signal, gains.sum(axis=1) - signal


def mode_sinr(H_oam, rho, alloc: PowerAllocation, noise: NoiseModel) -> np.ndarray:
    """SINR of each OAM mode after power splitting and diagonal detection."""
    signal, interference = _mode_powers(H_oam, alloc)
    u = 1.0 - _as_rho(rho, signal.size)
    num = u * signal
    den = u * (noise.sigma_n_sq + interference) + noise.sigma_cov_sq
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(num > 0, num / den, 0.0)


def sum_capacity(sinr, base: float = 2.0) -> float:
    """Sum of log(1 + sinr); bit/s/Hz by default, nats with ``base=np.e``."""
    sinr = np.asarray(sinr, dtype=float)
    if np.any(sinr < 0):
        raise ValueError("SINR must be non-negative")
    return float(np.sum(np.log1p(sinr)) / np.log(base))


def harvested_power(H_oam, rho, alloc: PowerAllocation, budget: LinkBudget) -> float:
    """eta * sum_l rho_l (sigma_n^2 + sum_l' |H_ll'|^2 P_l'), in watts."""
    signal, interference = _mode_powers(H_oam, alloc)
    rho = _as_rho(rho, signal.size)
    per_mode = budget.noise.sigma_n_sq + signal + interference
    return float(budget.eta * np.dot(rho, per_mode))


def link_metrics(H_oam, rho, budget: LinkBudget, base: float = 2.0) -> LinkMetrics:
    alloc = budget.allocation(H_oam.shape[1])
    sinr = mode_sinr(H_oam, rho, alloc, budget.noise)
    return LinkMetrics(
        sinr=sinr,
        capacity=sum_capacity(sinr, base),
        harvested=harvested_power(H_oam, rho, alloc, budget),
    )
