"""RIS phase optimization for a fixed power split.

Pipeline: MSE matrix ``E`` -> WMMSE weight ``F = E^-1`` -> quadratic form in
``phi`` -> homogenized form -> unit-diagonal SDP -> Gaussian randomization ->
unit-modulus phases.

The SDP ``min tr(R_hat X) s.t. X >= 0, diag(X) = 1`` is solved with a
low-rank factorization ``X = V^H V`` (unit-norm columns) and cyclic
closed-form column updates, which is cheap at RIS sizes up to a few hundred
elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSet, ReflectionState, compose
from .errors import (
    DimensionMismatch,
    ShapeMismatch,
    SingularMse,
    SolverDiverged,
    SplitSaturated,
    ZeroDiagonal,
    ZeroHomogenizer,
)
from .oam import NoiseModel, TransformPair

__all__ = [
    "WeightState",
    "QuadraticForm",
    "HomogenizedForm",
    "SdpSolution",
    "ReflectionResult",
    "mse_matrix",
    "optimal_weight",
    "wmmse_objective",
    "p5_objective",
    "quadratic_form",
    "homogenize",
    "solve_sdp",
    "randomize",
    "p7_objective",
    "extract_phases",
    "optimize_reflection",
]


@dataclass(frozen=True)
class WeightState:
    E: np.ndarray
    F: np.ndarray


@dataclass(frozen=True)
class QuadraticForm:
    R_mat: np.ndarray
    v: np.ndarray
    const_term: float = 0.0

    def __call__(self, phi) -> float:
        phi = np.asarray(phi)
        return float(np.real(np.vdot(phi, self.R_mat @ phi)) + np.real(self.v @ phi))


@dataclass(frozen=True)
class HomogenizedForm:
    R_hat: np.ndarray


@dataclass(frozen=True)
class SdpSolution:
    X: np.ndarray
    objective: float
    solver_iterations: int
    R_hat: np.ndarray = field(repr=False)
    converged: bool = True
    trace: np.ndarray = field(default=None, repr=False)


_SATURATION_GAP = 1e-9


def _hermitize(A: np.ndarray) -> np.ndarray:
    return (A + A.conj().T) / 2


def mse_matrix(H_oam: np.ndarray, rho, P_t_max: float, noise: NoiseModel) -> np.ndarray:
    """MSE matrix of per-mode diagonal detection under uniform power.

    The conversion-noise term is applied per mode as
    ``sigma_cov^2 / (1 - rho_l)`` inside a diagonal matrix.
    """
    n = H_oam.shape[0]
    if H_oam.shape != (n, n):
        raise DimensionMismatch("H_oam must be square")
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (n,):
        raise DimensionMismatch("rho length differs from the number of modes")
    if np.any(rho >= 1):
        raise SplitSaturated("rho_l == 1 leaves no power for decoding")
    h = np.diag(H_oam)
    if np.any(np.abs(h) < 1e-15):
        raise ZeroDiagonal("mode-domain channel has a vanishing diagonal entry")

    G = H_oam / h[:, None] - np.eye(n)
    noise_term = (n / P_t_max) * (noise.sigma_n_sq + noise.sigma_cov_sq / (1 - rho)) / np.abs(h) ** 2
    return _hermitize(G @ G.conj().T + np.diag(noise_term))


def _scaled_cond(E: np.ndarray) -> float:
    # Mode gains span many decades, so judge conditioning after Jacobi scaling.
    d = np.sqrt(np.abs(np.real(np.diag(E))))
    if np.any(d == 0):
        return np.inf
    return float(np.linalg.cond(E / np.outer(d, d)))


def optimal_weight(E: np.ndarray) -> np.ndarray:
    """F = E^-1, the maximizer of ``wmmse_objective`` for fixed E."""
    E = _hermitize(np.asarray(E, dtype=complex))
    if _scaled_cond(E) > 1e12:
        E = E + 1e-12 * np.diag(np.real(np.diag(E)))
        if not _scaled_cond(E) <= 1e14:
            raise SingularMse("MSE matrix is numerically singular")
    d = np.sqrt(np.real(np.diag(E)))
    F = np.linalg.inv(E / np.outer(d, d)) / np.outer(d, d)
    return _hermitize(F)


def wmmse_objective(F: np.ndarray, E: np.ndarray) -> float:
    """log|F| - tr(FE) + N, the concave objective maximized by F = E^-1."""
    sign, logdet = np.linalg.slogdet(F)
    if np.real(sign) <= 0:
        return -np.inf
    return float(logdet - np.real(np.trace(F @ E)) + F.shape[0])


def _check_square(channels: ChannelSet):
    N_r, N_t = channels.shape
    if N_r != N_t:
        raise ShapeMismatch(f"reflection subproblem needs N_t == N_r, got {N_t} and {N_r}")


def p5_objective(channels: ChannelSet, transforms: TransformPair, F: np.ndarray, phi) -> float:
    """tr[F H H^H] - tr(F H) - tr(F H^H) with H the mode-domain channel at ``phi``."""
    H = transforms.W_prime @ compose(channels, phi) @ transforms.W
    FH = F @ H
    return float(np.real(np.trace(FH @ H.conj().T)) - 2 * np.real(np.trace(FH)))


def quadratic_form(
    channels: ChannelSet, transforms: TransformPair, F: np.ndarray, K: float | None = None
) -> QuadraticForm:
    """Rewrite ``p5_objective`` as ``phi^H R phi + Re(v^T phi) + const``."""
    _check_square(channels)
    if K is None:
        K = channels.params.K
    Wp, W = transforms.W_prime, transforms.W
    H_in, H_ref, H_los = channels.H_in, channels.H_ref, channels.H_los

    G = Wp.conj().T @ F @ Wp  # F pulled back to the antenna domain
    M = H_ref.conj().T @ G @ H_ref
    R = _hermitize(M * (H_in @ H_in.conj().T).T)
    cross = np.einsum("ij,ji->i", H_in @ H_los.conj().T, G @ H_ref)
    direct = np.einsum("ij,ji->i", H_in @ W @ F, Wp @ H_ref)
    v = 2 * np.sqrt(K) * cross - 2 * direct

    A = np.sqrt(K) * Wp @ H_los @ W
    FA = F @ A
    const = float(np.real(np.trace(FA @ A.conj().T)) - 2 * np.real(np.trace(FA)))
    return QuadraticForm(R_mat=R, v=v, const_term=const)


def homogenize(q: QuadraticForm) -> HomogenizedForm:
    n = q.v.size
    R_hat = np.zeros((n + 1, n + 1), dtype=complex)
    R_hat[:n, :n] = q.R_mat
    R_hat[:n, n] = q.v.conj() / 2
    R_hat[n, :n] = q.v / 2
    return HomogenizedForm(R_hat=R_hat)


def p7_objective(R_hat: np.ndarray, phi_hat) -> np.ndarray:
    """phi_hat^H R_hat phi_hat; ``phi_hat`` may hold one candidate per column."""
    P = np.asarray(phi_hat)
    return np.real(np.sum(P.conj() * (R_hat @ P), axis=0))


def solve_sdp(
    R_hat,
    rank: int | None = None,
    max_sweeps: int = 2000,
    tol: float = 1e-8,
    seed: int = 0,
    strict: bool = False,
) -> SdpSolution:
    """Minimize tr(R_hat X) over Hermitian PSD X with unit diagonal.

    Coordinate descent on the columns of a rank-``rank`` factor ``V``; each
    column update ``v_i <- -g_i / |g_i|`` is the exact minimizer over the unit
    sphere with the others fixed.  Stops once the relative objective change
    of a full sweep drops below ``tol``.
    """
    R = _hermitize(np.asarray(R_hat, dtype=complex))
    n = R.shape[0]
    if rank is None:
        rank = math.ceil(math.sqrt(2 * n)) + 1
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((rank, n)) + 1j * rng.standard_normal((rank, n))
    V /= np.linalg.norm(V, axis=0)

    def objective(V):
        return float(np.real(np.sum((V.conj() @ R.T) * V)))

    obj = objective(V)
    trace = [obj]
    converged = False
    sweeps = 0
    diag = np.real(np.diag(R))
    for sweeps in range(1, max_sweeps + 1):
        for i in range(n):
            g = V @ R[:, i] - diag[i] * V[:, i]
            norm = np.linalg.norm(g)
            if norm > 0:
                V[:, i] = -g / norm
        new = objective(V)
        trace.append(new)
        scale = max(abs(new), abs(obj), np.finfo(float).tiny)
        if abs(obj - new) <= tol * scale:
            obj = new
            converged = True
            break
        obj = new

    X = _hermitize(V.conj().T @ V)
    sol = SdpSolution(
        X=X,
        objective=float(np.real(np.trace(R @ X))),
        solver_iterations=sweeps,
        R_hat=R,
        converged=converged,
        trace=np.asarray(trace),
    )
    if strict and not converged:
        raise SolverDiverged(f"no convergence after {max_sweeps} sweeps", best=sol)
    return sol


def randomize(solution: SdpSolution, draws: int = 10000, seed: int = 0, chunk: int = 2048) -> np.ndarray:
    """Best unit-modulus projection of ``draws`` samples from CN(0, X).

    Samples are generated in column blocks of ``chunk`` from a single
    generator seeded with ``seed``; ties keep the lowest draw index.
    """
    if draws < 1:
        raise ValueError("draws must be >= 1")
    w, U = np.linalg.eigh(solution.X)
    # round-off eigenvalues would otherwise add sqrt(eps)-sized noise
    w = np.where(w > 1e-12 * max(w.max(), 0.0), w, 0.0)
    L = U * np.sqrt(w)
    n = L.shape[0]
    rng = np.random.default_rng(seed)
    best_val, best = np.inf, None
    done = 0
    while done < draws:
        m = min(chunk, draws - done)
        Z = (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)
        P = L @ Z
        mag = np.abs(P)
        P = np.where(mag > 0, P / np.where(mag > 0, mag, 1), 1.0)
        vals = p7_objective(solution.R_hat, P)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val, best = vals[k], P[:, k].copy()
        done += m
    return best


def extract_phases(phi_hat) -> ReflectionState:
    phi_hat = np.asarray(phi_hat, dtype=complex)
    t = phi_hat[-1]
    if abs(t) < 1e-12:
        raise ZeroHomogenizer("homogenizing entry is zero")
    return ReflectionState(np.exp(1j * np.angle(phi_hat[:-1] / t)))


@dataclass(frozen=True)
class ReflectionResult:
    refl: ReflectionState
    weights: WeightState
    form: QuadraticForm
    sdp: SdpSolution
    p6_value: float


def optimize_reflection(
    channels: ChannelSet,
    transforms: TransformPair,
    current: ReflectionState | None,
    rho,
    P_t_max: float,
    noise: NoiseModel,
    draws: int = 10000,
    seed: int = 0,
) -> ReflectionResult:
    """One reflection update: weights at ``current``, then SDR + randomization.

    ``current=None`` evaluates the weights with the reflected path absent.
    Modes with rho_l == 1 carry no information; their split is clipped just
    below 1 so that they receive a vanishing weight instead of an error.
    """
    _check_square(channels)
    H_oam = transforms.W_prime @ compose(channels, current) @ transforms.W
    rho = np.minimum(np.asarray(rho, dtype=float), 1.0 - _SATURATION_GAP)
    E = mse_matrix(H_oam, rho, P_t_max, noise)
    F = optimal_weight(E)
    form = quadratic_form(channels, transforms, F)
    sdp = solve_sdp(homogenize(form).R_hat, seed=seed)
    refl = extract_phases(randomize(sdp, draws=draws, seed=seed))
    return ReflectionResult(
        refl=refl,
        weights=WeightState(E=E, F=F),
        form=form,
        sdp=sdp,
        p6_value=form(refl.phi),
    )
