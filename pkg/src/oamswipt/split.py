"""Power-split optimization for a fixed reflection state.

With u_l = 1 - rho_l the per-mode rate (in nats) is

    f_l(u) = log((B_l + S_l) u + C) - log(B_l u + C),

where S_l is the received signal power, B_l = sigma_n^2 + interference and
C = sigma_cov^2.  Each f_l is concave and non-decreasing, and the harvest
constraint sum_l a_l rho_l >= Q_min couples the modes linearly, so the
problem is solved by bisection on the single multiplier of that constraint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, Infeasible
from .metrics import LinkBudget, PowerSplit

__all__ = [
    "SplitProblem",
    "SplitSolution",
    "split_problem",
    "feasibility",
    "solve_split",
    "solve_split_detailed",
    "split_objective",
]

_FREE_CAP = 1.0 - 1e-12


@dataclass(frozen=True)
class SplitProblem:
    signal: np.ndarray  # S_l
    interference: np.ndarray  # per-mode interference power
    harvest_coefficients: np.ndarray  # a_l
    budget: LinkBudget

    def __post_init__(self):
        a = np.asarray(self.harvest_coefficients, dtype=float)
        if np.any(a < 0) or not np.all(np.isfinite(a)):
            raise ValueError("harvest coefficients must be finite and non-negative")
        if not (np.all(np.isfinite(self.signal)) and np.all(np.isfinite(self.interference))):
            raise ValueError("gains must be finite")

    @property
    def n_modes(self) -> int:
        return self.signal.size

    @property
    def B(self) -> np.ndarray:
        return self.budget.noise.sigma_n_sq + self.interference

    @property
    def C(self) -> float:
        return self.budget.noise.sigma_cov_sq


def split_problem(H_oam: np.ndarray, budget: LinkBudget) -> SplitProblem:
    """Per-mode gains and harvest coefficients under uniform power allocation."""
    n = H_oam.shape[1]
    if H_oam.shape[0] != n:
        raise DimensionMismatch("H_oam must be square")
    powers = np.abs(H_oam) ** 2 * (budget.P_t_max / n)
    signal = np.diag(powers).copy()
    total = powers.sum(axis=1)
    a = budget.eta * (budget.noise.sigma_n_sq + total)
    return SplitProblem(signal=signal, interference=total - signal, harvest_coefficients=a, budget=budget)


def feasibility(problem: SplitProblem) -> tuple[bool, float]:
    q_max = float(np.sum(problem.harvest_coefficients))
    return q_max >= problem.budget.Q_min, q_max


def split_objective(problem: SplitProblem, rho) -> float:
    """Sum rate in nats for the given split."""
    u = 1.0 - np.asarray(rho, dtype=float)
    S, B, C = problem.signal, problem.B, problem.C
    num = u * S
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = np.where(num > 0, num / (u * B + C), 0.0)
    return float(np.sum(np.log1p(gamma)))


def _rate_slope(S, B, C, u):
    return S * C / (((B + S) * u + C) * (B * u + C))


def _stationary_u(S, B, C, lam_a):
    """Root in u of f'(u) = lam_a, clipped to [0, 1]."""
    A = (B + S) * B
    b = C * (2 * B + S)
    with np.errstate(divide="ignore"):
        c0 = C * C - S * C / lam_a
    disc = np.sqrt(np.maximum(b * b - 4 * A * c0, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(c0 < 0, -2 * c0 / (b + disc), 0.0)
    return np.clip(u, 0.0, 1.0)


@dataclass(frozen=True)
class SplitSolution:
    split: PowerSplit
    multiplier: float
    kkt_residual: float
    harvested: float
    method: str


def _kkt_residual(problem, u, lam, active):
    if lam <= 0 or not np.any(active):
        return 0.0
    S, B, C = problem.signal[active], problem.B[active], problem.C
    a = problem.harvest_coefficients[active]
    uu = u[active]
    slope = _rate_slope(S, B, C, uu)
    target = lam * a
    res = np.where(
        (uu > 0) & (uu < 1),
        np.abs(slope - target),
        np.where(uu <= 0, np.maximum(slope - target, 0.0), np.maximum(target - slope, 0.0)),
    )
    scale = np.maximum(np.maximum(slope, target), np.finfo(float).tiny)
    return float(np.max(res / scale))


def _project(z, a, cap):
    """Euclidean projection onto {0 <= u <= 1, a.u <= cap}."""
    u = np.clip(z, 0.0, 1.0)
    if a @ u <= cap:
        return u
    lo, hi = 0.0, np.max(z / np.where(a > 0, a, np.inf)) + 1.0
    for _ in range(200):
        mu = (lo + hi) / 2
        if a @ np.clip(z - mu * a, 0.0, 1.0) > cap:
            lo = mu
        else:
            hi = mu
    return np.clip(z - hi * a, 0.0, 1.0)


def _projected_gradient(problem, active, cap, u0, iterations=10_000):
    S, B, C = problem.signal[active], problem.B[active], problem.C
    a = problem.harvest_coefficients[active]
    curvature = S * (2 * B + S) / C**2
    step = 1.0 / max(float(np.max(curvature)), np.finfo(float).tiny)
    u = _project(u0, a, cap)
    for _ in range(iterations):
        u = _project(u + step * _rate_slope(S, B, C, u), a, cap)
    return u


def _tighten(rho, a, target, slope_at_zero):
    """Make the active constraint hold with equality despite rho = 1 - u rounding.

    ``1 - u`` is only resolved to about machine epsilon, which matters when
    the floor is tiny.  Scale the interior modes onto the constraint (modes
    at a bound stay there), or when everything rounded to zero put the whole
    floor on the mode that loses the least rate per harvested watt (the
    first-order optimum for a vanishing floor).
    """
    interior = (rho > 0) & (rho < 1)
    got = float(a[interior] @ rho[interior])
    if got > 0:
        scaled = rho.copy()
        scaled[interior] *= (target - float(a[~interior] @ rho[~interior])) / got
        return scaled if np.all((scaled >= 0) & (scaled <= 1)) else rho
    if np.any(rho > 0):
        return rho
    out = np.zeros_like(rho)
    k = int(np.argmin(slope_at_zero / a))
    out[k] = min(target / a[k], 1.0)
    return out


def solve_split_detailed(problem: SplitProblem, tol: float = 1e-12) -> SplitSolution:
    feasible, q_max = feasibility(problem)
    Q_min = problem.budget.Q_min
    if not feasible:
        raise Infeasible(f"Q_min={Q_min:.3e} W exceeds the maximum harvestable {q_max:.3e} W")
    n = problem.n_modes
    S, B, C = problem.signal, problem.B, problem.C
    a = problem.harvest_coefficients
    rho = np.zeros(n)

    # Modes whose rate does not depend on rho harvest for free.
    free = (a > 0) & ((S <= 0) | (C <= 0))
    rho[free] = np.where(S[free] <= 0, 1.0, _FREE_CAP)
    remaining = Q_min - float(a @ rho)
    active = (a > 0) & ~free
    if remaining <= 0 or not np.any(active):
        return SplitSolution(PowerSplit(rho), 0.0, 0.0, float(a @ rho), "trivial")

    a_act, S_act, B_act = a[active], S[active], B[active]
    cap = float(a_act.sum()) - remaining  # bound on sum a_l u_l
    if cap <= 0:
        rho[active] = 1.0
        return SplitSolution(PowerSplit(rho), np.inf, 0.0, float(a @ rho), "saturated")

    def harvested_u(lam):
        return _stationary_u(S_act, B_act, C, lam * a_act)

    lo = np.log(np.min(_rate_slope(S_act, B_act, C, 1.0) / a_act)) - 1.0
    hi = np.log(np.max(S_act / C / a_act)) + 1.0
    # a.u(lam) is non-increasing in lam; keep hi on the feasible side.
    for _ in range(400):
        mid = (lo + hi) / 2
        if a_act @ harvested_u(np.exp(mid)) > cap:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    lam = float(np.exp(hi))
    u_act = harvested_u(lam)
    method = "dual-bisection"
    u_full = np.ones(n)
    u_full[active] = u_act
    kkt = _kkt_residual(problem, u_full, lam, active)
    if kkt > 1e-8:
        u_pg = _projected_gradient(problem, active, cap, u_act)
        trial = rho.copy()
        trial[active] = 1.0 - u_pg
        current = rho.copy()
        current[active] = 1.0 - u_act
        if split_objective(problem, trial) > split_objective(problem, current):
            u_act, method = u_pg, "projected-gradient"
    rho_act = _tighten(1.0 - u_act, a_act, remaining, _rate_slope(S_act, B_act, C, 1.0))
    rho[active] = rho_act
    rho = np.clip(rho, 0.0, 1.0)
    u_full[active] = 1.0 - rho_act
    return SplitSolution(
        split=PowerSplit(rho),
        multiplier=lam,
        kkt_residual=_kkt_residual(problem, u_full, lam, active),
        harvested=float(a @ rho),
        method=method,
    )


def solve_split(problem: SplitProblem) -> PowerSplit:
    """Rate-maximizing split subject to the harvested-power floor."""
    return solve_split_detailed(problem).split
