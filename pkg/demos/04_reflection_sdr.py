"""
RIS phases by semidefinite relaxation
=====================================

For fixed WMMSE weights the phase problem is a quadratic form in the unit
modulus vector phi.  Lift it to an SDP, solve the relaxation, and recover
phases by Gaussian randomization.
"""

import numpy as np

from oamswipt import LinkBudget, PropagationParams, SystemGeometry, build_channels, compose, element_layout, make_transforms
from oamswipt.reflect import (
    extract_phases,
    homogenize,
    mse_matrix,
    optimal_weight,
    p7_objective,
    quadratic_form,
    randomize,
    solve_sdp,
)

geom = SystemGeometry()
ch = build_channels(element_layout(geom), PropagationParams())
T = make_transforms(geom.N_t, geom.N_r)
budget = LinkBudget.from_dbm(30.0, -15.0, 0.8, -20.0, -33.0)

# weights from the link without the reflected path, no power split yet
H = T.W_prime @ compose(ch, None) @ T.W
F = optimal_weight(mse_matrix(H, np.zeros(geom.N_t), budget.P_t_max, budget.noise))

q = quadratic_form(ch, T, F)
R_hat = homogenize(q).R_hat
sol = solve_sdp(R_hat, seed=0)
print("SDP objective %.6e after %d sweeps" % (sol.objective, sol.solver_iterations))
print("rank of X (eigenvalues > 1e-9 * max):", int(np.sum(np.linalg.eigvalsh(sol.X) > 1e-9 * np.abs(sol.X).max())))

phi_hat = randomize(sol, draws=10000, seed=0)
phi = extract_phases(phi_hat).phi
print("randomized objective %.6e" % p7_objective(R_hat, phi_hat))
print("all-ones objective   %.6e" % q(np.ones(geom.N_I)))
print("phases (deg):", np.round(np.degrees(np.angle(phi))).astype(int))
