"""Alternating optimization of RIS phases and power-splitting ratios.

Each outer iteration updates the reflection state for the current split and
then re-solves the split for the new reflection state.  The first reflection
update evaluates its WMMSE weights with the reflected path absent, and the
split starts at zero.

With ``monotone_guard`` on, a reflection candidate is only accepted when it
does not lower the sum rate at the current split and keeps that split
feasible; a new split is only accepted when it does not lower the sum rate.
The capacity trace is then non-decreasing.

Per-iteration seeds are ``SeedSequence([seed, iteration]).generate_state(1)[0]``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import ChannelSet, PropagationParams, ReflectionState, build_channels, compose
from .errors import DimensionMismatch, ShapeMismatch
from .geometry import SystemGeometry, element_layout
from .metrics import LinkBudget, PowerSplit, link_metrics
from .oam import TransformPair, make_transforms
from .reflect import optimize_reflection
from .split import feasibility, solve_split, split_problem

__all__ = [
    "OptimizationOptions",
    "IterationRecord",
    "OptimizationReport",
    "iteration_seed",
    "evaluate",
    "optimize",
    "optimize_channels",
    "report_from_json",
    "evaluate_fixed",
]


@dataclass(frozen=True)
class OptimizationOptions:
    max_iterations: int = 20
    convergence_tolerance: float = 1e-3
    randomization_draws: int = 10000
    seed: int = 0
    monotone_guard: bool = True
    log_base: float = 2.0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.convergence_tolerance <= 0:
            raise ValueError("convergence_tolerance must be positive")
        if self.randomization_draws < 1:
            raise ValueError("randomization_draws must be >= 1")


@dataclass
class IterationRecord:
    iteration: int
    capacity: float
    harvested: float
    p6_objective: float
    sdp_objective: float
    feasible: bool
    phi_accepted: bool
    q_max: float


@dataclass
class OptimizationReport:
    iterations: list[IterationRecord]
    refl: ReflectionState
    split: PowerSplit
    termination: str  # converged | max_iterations | infeasible
    Q_min: float = 0.0
    label: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def capacity(self) -> float:
        return self.iterations[-1].capacity if self.iterations else 0.0

    @property
    def harvested(self) -> float:
        return self.iterations[-1].harvested if self.iterations else 0.0

    @property
    def q_max(self) -> float:
        return self.iterations[-1].q_max if self.iterations else 0.0

    @property
    def capacity_trace(self) -> np.ndarray:
        return np.array([rec.capacity for rec in self.iterations])

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "termination": self.termination,
            "Q_min": self.Q_min,
            "iterations": [asdict(rec) for rec in self.iterations],
            "phi": [[float(z.real), float(z.imag)] for z in self.refl.phi],
            "rho": [float(r) for r in self.split.rho],
            "extra": self.extra,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def report_from_json(text: str) -> OptimizationReport:
    data = json.loads(text)
    return OptimizationReport(
        iterations=[IterationRecord(**rec) for rec in data["iterations"]],
        refl=ReflectionState(np.array([complex(re, im) for re, im in data["phi"]], dtype=complex)),
        split=PowerSplit(np.array(data["rho"], dtype=float)),
        termination=data["termination"],
        Q_min=data["Q_min"],
        label=data.get("label", ""),
        extra=data.get("extra", {}),
    )


def iteration_seed(seed: int, iteration: int) -> int:
    return int(np.random.SeedSequence([seed, iteration]).generate_state(1)[0])


def evaluate(channels, transforms, refl, rho, budget, base=2.0):
    """Link metrics and split problem at a given (phi, rho)."""
    H_oam = transforms.W_prime @ compose(channels, refl) @ transforms.W
    return link_metrics(H_oam, rho, budget, base), split_problem(H_oam, budget)


def optimize(
    geometry: SystemGeometry,
    params: PropagationParams,
    budget: LinkBudget,
    options: OptimizationOptions = OptimizationOptions(),
    transforms: TransformPair | None = None,
    on_reflection=None,
) -> OptimizationReport:
    channels = build_channels(element_layout(geometry), params)
    return optimize_channels(channels, budget, options, transforms, on_reflection)


def optimize_channels(
    channels: ChannelSet,
    budget: LinkBudget,
    options: OptimizationOptions = OptimizationOptions(),
    transforms: TransformPair | None = None,
    on_reflection=None,
) -> OptimizationReport:
    """Alternate reflection and split updates until the sum rate settles.

    ``on_reflection(iteration, result)`` is called with every
    ``ReflectionResult`` produced, accepted or not.
    """
    N_r, N_t = channels.shape
    if N_r != N_t:
        raise ShapeMismatch("alternating optimization needs N_t == N_r")
    if transforms is None:
        transforms = make_transforms(N_t, N_r)
    if transforms.W.shape != (N_t, N_t):
        raise DimensionMismatch("transform sizes do not match the channel")
    base = options.log_base
    guard = options.monotone_guard
    Q_min = budget.Q_min

    refl: ReflectionState | None = None
    rho = np.zeros(N_t)
    records: list[IterationRecord] = []
    termination = "max_iterations"

    for it in range(1, options.max_iterations + 1):
        seed = iteration_seed(options.seed, it)
        p6 = sdp_obj = float("nan")
        accepted = True
        if channels.N_I == 0:
            refl = ReflectionState(np.zeros(0, dtype=complex))
        else:
            result = optimize_reflection(
                channels, transforms, refl, rho, budget.P_t_max, budget.noise,
                draws=options.randomization_draws, seed=seed,
            )
            if on_reflection is not None:
                on_reflection(it, result)
            p6, sdp_obj = result.p6_value, result.sdp.objective
            if refl is not None and guard:
                old, _ = evaluate(channels, transforms, refl, rho, budget, base)
                new, _ = evaluate(channels, transforms, result.refl, rho, budget, base)
                accepted = new.capacity >= old.capacity and new.harvested >= Q_min * (1 - 1e-12)
            if accepted:
                refl = result.refl

        metrics, problem = evaluate(channels, transforms, refl, rho, budget, base)
        feasible, q_max = feasibility(problem)
        if not feasible:
            records.append(IterationRecord(it, metrics.capacity, metrics.harvested, p6, sdp_obj, False, accepted, q_max))
            termination = "infeasible"
            break

        new_rho = solve_split(problem).rho
        new_metrics, _ = evaluate(channels, transforms, refl, new_rho, budget, base)
        keep_old = guard and it > 1 and new_metrics.capacity < metrics.capacity and metrics.harvested >= Q_min
        if not keep_old:
            rho, metrics = new_rho, new_metrics
        records.append(IterationRecord(it, metrics.capacity, metrics.harvested, p6, sdp_obj, True, accepted, q_max))

        if channels.N_I == 0:
            termination = "converged"
            break
        if it > 1:
            prev = records[-2].capacity
            if abs(metrics.capacity - prev) <= options.convergence_tolerance * max(abs(prev), np.finfo(float).tiny):
                termination = "converged"
                break

    if refl is None:
        refl = ReflectionState(np.ones(channels.N_I, dtype=complex))
    return OptimizationReport(
        iterations=records,
        refl=refl,
        split=PowerSplit(rho),
        termination=termination,
        Q_min=Q_min,
    )


def evaluate_fixed(
    channels: ChannelSet,
    budget: LinkBudget,
    refl: ReflectionState | None,
    options: OptimizationOptions = OptimizationOptions(),
    transforms: TransformPair | None = None,
) -> OptimizationReport:
    """Optimize only the split for a fixed reflection state (one iteration)."""
    N_r, N_t = channels.shape
    if transforms is None:
        transforms = make_transforms(N_t, N_r)
    rho = np.zeros(N_t)
    metrics, problem = evaluate(channels, transforms, refl, rho, budget, options.log_base)
    feasible, q_max = feasibility(problem)
    termination = "infeasible"
    if feasible:
        rho = solve_split(problem).rho
        metrics, _ = evaluate(channels, transforms, refl, rho, budget, options.log_base)
        termination = "converged"
    if refl is None:
        refl = ReflectionState(np.zeros(0, dtype=complex))
    record = IterationRecord(1, metrics.capacity, metrics.harvested, float("nan"), float("nan"), feasible, True, q_max)
    return OptimizationReport([record], refl, PowerSplit(rho), termination, Q_min=budget.Q_min)
