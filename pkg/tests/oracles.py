"""Independent reference implementations used as test oracles.

Everything here is written with explicit loops over scalars and shares no
code with the package, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import cmath
import itertools
import math

import numpy as np


def frame(theta_x, theta_y):
    """(a, b, n) for a planar array tilted by (theta_x, theta_y)."""
    if abs(theta_x - math.pi / 2) < 1e-12:
        n = (1.0, 0.0, 0.0)
    elif abs(theta_y - math.pi / 2) < 1e-12:
        n = (0.0, 1.0, 0.0)
    else:
        tx, ty = math.tan(theta_x), math.tan(theta_y)
        s = math.sqrt(tx * tx + ty * ty + 1.0)
        n = (tx / s, ty / s, 1.0 / s)

    def cross(u, v):
        return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])

    def unit(u):
        s = math.sqrt(sum(c * c for c in u))
        return tuple(c / s for c in u)

    a = cross(n, (1.0, 0.0, 0.0))
    if math.sqrt(sum(c * c for c in a)) < 1e-12:
        a = cross(n, (0.0, 1.0, 0.0))
    a = unit(a)
    b = unit(cross(n, a))
    return a, b, n


def positions(g):
    """Tx, Rx and RIS element coordinates as lists of 3-tuples."""
    tx = []
    for i in range(g.N_t):
        ang = 2 * math.pi * i / g.N_t
        tx.append((g.R_t * math.cos(ang), g.R_t * math.sin(ang), 0.0))
    a, b, _ = frame(g.theta_x, g.theta_y)
    rx = []
    for i in range(g.N_r):
        ang = 2 * math.pi * i / g.N_r
        c, s = math.cos(ang), math.sin(ang)
        center = (g.d_x, g.d_y, g.D)
        rx.append(tuple(center[k] - g.R_r * c * b[k] + g.R_r * s * a[k] for k in range(3)))
    a, b, _ = frame(g.theta_x_R, g.theta_y_R)
    ris = []
    for r in range(g.N_I_r):
        for c in range(g.N_I_c):
            x_off = (c - (g.N_I_c - 1) / 2) * g.d
            y_off = (r - (g.N_I_r - 1) / 2) * g.d
            center = (g.p_x, g.p_y, g.p_z)
            ris.append(tuple(center[k] - x_off * b[k] + y_off * a[k] for k in range(3)))
    return tx, rx, ris


def link(dst, src, beta, lam):
    out = np.zeros((len(dst), len(src)), dtype=complex)
    for i, p in enumerate(dst):
        for j, q in enumerate(src):
            dist = math.dist(p, q)
            out[i, j] = beta * lam / (4 * math.pi * dist) * cmath.exp(-2j * math.pi * dist / lam)
    return out


def channels(g, beta=1.0, lam=0.05):
    tx, rx, ris = positions(g)
    return link(ris, tx, beta, lam), link(rx, ris, beta, lam), link(rx, tx, beta, lam)


def idft(n):
    W = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            W[a, b] = cmath.exp(2j * math.pi * a * b / n) / math.sqrt(n)
    return W


def oam(g, phi, K=1.0, beta=1.0, lam=0.05):
    H_in, H_ref, H_los = channels(g, beta, lam)
    H = math.sqrt(K) * H_los
    for k in range(len(phi)):
        H = H + phi[k] * np.outer(H_ref[:, k], H_in[k, :])
    W = idft(g.N_t)
    Wp = idft(g.N_r).conj().T
    return Wp @ H @ W


def sinr(H, rho, P, sn, sc):
    n = H.shape[0]
    out = []
    for l in range(n):
        s = abs(H[l, l]) ** 2 * P[l]
        i = sum(abs(H[l, k]) ** 2 * P[k] for k in range(n) if k != l)
        num = (1 - rho[l]) * s
        den = (1 - rho[l]) * (sn + i) + sc
        out.append(num / den if num > 0 else 0.0)
    return np.array(out)


def harvest(H, rho, P, sn, eta):
    n = H.shape[0]
    total = 0.0
    for l in range(n):
        total += rho[l] * (sn + sum(abs(H[l, k]) ** 2 * P[k] for k in range(n)))
    return eta * total


def mse(H, rho, P_total, sn, sc):
    n = H.shape[0]
    E = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            acc = 0j
            for k in range(n):
                gi = H[i, k] / H[i, i] - (1 if i == k else 0)
                gj = H[j, k] / H[j, j] - (1 if j == k else 0)
                acc += gi * np.conj(gj)
            E[i, j] = acc
        E[i, i] += n / P_total * (sn + sc / (1 - rho[i])) / abs(H[i, i]) ** 2
    return E


def _rate2(S, B, C, r0, r1):
    rate = np.zeros_like(np.asarray(r0, dtype=float))
    for l, r in enumerate((r0, r1)):
        u = 1 - r
        with np.errstate(divide="ignore", invalid="ignore"):
            rate = rate + np.log1p(np.where(u > 0, u * S[l] / (u * B[l] + C), 0.0))
    return rate


def split_grid(S, B, C, a, Q_min, step=1e-3, boundary=True):
    """Exhaustive search over rho in [0, 1]^2 on a ``step`` grid.

    With ``boundary`` the line a.rho = Q_min is sampled too, with at most
    ``step`` between neighbours in each coordinate; a square grid alone only
    touches that line at scattered points.
    """
    grid = np.round(np.arange(0, 1 + step / 2, step), 12)
    r0, r1 = np.meshgrid(grid, grid, indexing="ij")
    r0, r1 = r0.ravel(), r1.ravel()
    if boundary and Q_min > 0:
        span = min(1.0, Q_min / a[0])  # rho_0 range on the line with rho_1 >= 0
        lo = max(0.0, (Q_min - a[1]) / a[0])  # rho_1 <= 1
        dr0 = step * min(1.0, a[1] / a[0])
        t = np.append(np.arange(lo, span, dr0), span)
        r0 = np.concatenate([r0, t])
        r1 = np.concatenate([r1, np.clip((Q_min - a[0] * t) / a[1], 0.0, 1.0)])
    rate = _rate2(S, B, C, r0, r1)
    feasible = a[0] * r0 + a[1] * r1 >= Q_min * (1 - 1e-12)
    rate = np.where(feasible, rate, -np.inf)
    k = int(np.argmax(rate))
    return np.array([r0[k], r1[k]]), rate[k]


def phase_grid_min(R_hat, levels=16):
    """min phi_hat^H R_hat phi_hat over ``levels`` phases, last entry fixed to 1."""
    n = R_hat.shape[0] - 1
    alphabet = [cmath.exp(2j * math.pi * k / levels) for k in range(levels)]
    best = math.inf
    for combo in itertools.product(alphabet, repeat=n):
        v = np.array(list(combo) + [1.0])
        best = min(best, float(np.real(np.conj(v) @ R_hat @ v)))
    return best


def sdp_cvxpy(R_hat):
    import cvxpy as cp

    n = R_hat.shape[0]
    X = cp.Variable((n, n), hermitian=True)
    prob = cp.Problem(cp.Minimize(cp.real(cp.trace(R_hat @ X))), [X >> 0, cp.diag(X) == 1])
    prob.solve(solver=cp.SCS, eps=1e-9, max_iters=200000)
    return prob.value
