"""Reference schemes compared against the optimized RIS-assisted OAM link.

``MimoSwipt`` is the same system with identity transforms in place of the
IDFT/DFT pair, i.e. antenna ``l`` carries stream ``l`` and the receiver
detects per antenna.  Everything else (SINR, harvesting, both optimizers)
is shared, so the transform is the only difference.
"""

from __future__ import annotations

import enum
from dataclasses import replace

import numpy as np

from .alternating import OptimizationOptions, OptimizationReport, evaluate, evaluate_fixed, optimize_channels
from .channel import PropagationParams, ReflectionState, build_channels
from .geometry import SystemGeometry, element_layout
from .metrics import LinkBudget
from .oam import identity_transforms
from .split import feasibility, solve_split

__all__ = ["BaselineKind", "evaluate_baseline", "NLOS_K"]

NLOS_K = 0.5


class BaselineKind(enum.Enum):
    LosOamNoRis = "los-oam"
    NlosOamNoRis = "nlos-oam"
    RandomPhaseRis = "random-ris"
    MimoSwipt = "mimo"


def _without_ris(geometry: SystemGeometry) -> SystemGeometry:
    return geometry.replace(N_I_r=0, N_I_c=0)


def evaluate_baseline(
    kind: BaselineKind,
    geometry: SystemGeometry,
    params: PropagationParams,
    budget: LinkBudget,
    options: OptimizationOptions = OptimizationOptions(),
    nlos_K: float = NLOS_K,
) -> OptimizationReport:
    kind = BaselineKind(kind)
    if kind is BaselineKind.LosOamNoRis:
        channels = build_channels(element_layout(_without_ris(geometry)), replace(params, K=1.0))
        report = optimize_channels(channels, budget, options)
    elif kind is BaselineKind.NlosOamNoRis:
        channels = build_channels(element_layout(_without_ris(geometry)), replace(params, K=nlos_K))
        report = optimize_channels(channels, budget, options)
    elif kind is BaselineKind.RandomPhaseRis:
        channels = build_channels(element_layout(geometry), params)
        rng = np.random.default_rng(options.seed)
        refl = ReflectionState.from_phases(rng.uniform(0, 2 * np.pi, channels.N_I))
        report = evaluate_fixed(channels, budget, refl, options)
    else:
        channels = build_channels(element_layout(geometry), params)
        mimo = identity_transforms(*channels.shape[::-1])
        report = optimize_channels(channels, budget, options, transforms=mimo)
        if channels.N_I:
            # Also score the MIMO receiver with the phases optimized for OAM.
            oam = optimize_channels(channels, budget, options)
            _, problem = evaluate(channels, mimo, oam.refl, np.zeros(channels.shape[1]), budget)
            if feasibility(problem)[0]:
                rho = solve_split(problem).rho
                metrics, _ = evaluate(channels, mimo, oam.refl, rho, budget, options.log_base)
                report.extra["capacity_at_oam_phi"] = metrics.capacity
            report.extra["oam_capacity"] = oam.capacity
    report.label = kind.value
    return report
