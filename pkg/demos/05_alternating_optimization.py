"""
Joint optimization and baselines
================================

Alternate between the RIS phases and the power split, then compare with
the links that have no RIS, random RIS phases, or no OAM transform.
"""

from oamswipt import BaselineKind, LinkBudget, OptimizationOptions, PropagationParams, SystemGeometry, evaluate_baseline, optimize

budget = LinkBudget.from_dbm(30.0, -15.0, 0.8, -20.0, -33.0)
params = PropagationParams(K=1.0)
options = OptimizationOptions(seed=0)

for size in (4, 8):
    geom = SystemGeometry(N_I_r=size, N_I_c=size)
    rep = optimize(geom, params, budget, options)
    trace = ", ".join("%.5f" % c for c in rep.capacity_trace)
    print(f"{size}x{size} RIS: {rep.termination} after {len(rep.iterations)} iterations, capacity trace [{trace}]")

geom = SystemGeometry(N_I_r=8, N_I_c=8)
for kind in BaselineKind:
    rep = evaluate_baseline(kind, geom, params, budget, options)
    print("%-11s capacity %.5f bit/s/Hz, harvested %.3e W" % (kind.value, rep.capacity, rep.harvested))
