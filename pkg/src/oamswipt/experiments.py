"""Experiment drivers: convergence traces, power sweep and distance sweep.

Scheme names used in sweeps:

``ris-RxC``          optimized RIS phases, OAM transforms, K from the config
``nlos-ris-RxC``     same with the NLOS Rician factor
``random-ris-RxC``   random RIS phases, split optimized
``mimo-ris-RxC``     optimized RIS phases, identity transforms
``los-oam``          OAM without RIS, K = 1
``nlos-oam``         OAM without RIS, K = nlos_K
``mimo``             identity transforms without RIS
``ris``              the configured geometry as is

Every run gets its own seed ``SeedSequence([seed, run_index])`` where the
run index is the position of the (sweep value, scheme) pair in sorted
order, so results do not depend on how runs are spread across workers.
"""

from __future__ import annotations

import csv
import io
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .alternating import OptimizationReport, optimize
from .baselines import BaselineKind, evaluate_baseline
from .config import ExperimentConfig, sweep_values, with_value
from .errors import ConfigError
from .oam import watts_to_dbm

__all__ = [
    "Scheme",
    "parse_scheme",
    "run_seed",
    "ResultTable",
    "RunOutcome",
    "run_scheme",
    "run_convergence",
    "run_power_sweep",
    "run_distance_sweep",
    "run_single",
    "SWEEP_COLUMNS",
    "CONVERGENCE_COLUMNS",
]

SWEEP_COLUMNS = (
    "sweep_variable",
    "sweep_value",
    "scheme",
    "capacity_bps_hz",
    "harvested_dbm",
    "q_max_dbm",
    "q_min_dbm",
    "iterations",
    "termination",
    "seed",
)

CONVERGENCE_COLUMNS = (
    "K",
    "ris_size",
    "iteration",
    "capacity_bps_hz",
    "harvested_dbm",
    "q_max_dbm",
    "phi_accepted",
    "termination",
    "seed",
)


@dataclass(frozen=True)
class Scheme:
    name: str
    kind: str  # ris | random | mimo | los-oam | nlos-oam
    size: tuple[int, int] | None = None
    nlos: bool = False


_SIZED = re.compile(r"^(nlos-ris|random-ris|mimo-ris|ris)-(\d+)x(\d+)$")


def parse_scheme(name: str) -> Scheme:
    name = name.strip()
    if name in ("los-oam", "nlos-oam", "mimo", "ris"):
        return Scheme(name, name)
    m = _SIZED.match(name)
    if not m:
        raise ConfigError(f"unknown scheme {name!r}")
    prefix, rows, cols = m.group(1), int(m.group(2)), int(m.group(3))
    if rows < 1 or cols < 1:
        raise ConfigError(f"scheme {name!r} needs a non-empty RIS")
    kind = {"nlos-ris": "ris", "random-ris": "random", "mimo-ris": "mimo", "ris": "ris"}[prefix]
    return Scheme(name, kind, (rows, cols), nlos=prefix == "nlos-ris")


def run_seed(seed: int, run_index: int) -> int:
    return int(np.random.SeedSequence([seed, run_index]).generate_state(1)[0])


def run_scheme(config: ExperimentConfig, scheme: str | Scheme, seed: int) -> OptimizationReport:
    """Run one scheme at the settings in ``config``."""
    s = parse_scheme(scheme) if isinstance(scheme, str) else scheme
    geometry = config.geometry
    params = config.propagation
    if s.size is not None:
        geometry = geometry.replace(N_I_r=s.size[0], N_I_c=s.size[1])
    if s.nlos:
        params = replace(params, K=config.nlos_K)
    budget = config.link_budget()
    options = replace(config.optimization, seed=seed)

    if s.kind == "ris":
        report = optimize(geometry, params, budget, options)
    elif s.kind == "los-oam":
        report = evaluate_baseline(BaselineKind.LosOamNoRis, geometry, params, budget, options, config.nlos_K)
    elif s.kind == "nlos-oam":
        report = evaluate_baseline(BaselineKind.NlosOamNoRis, geometry, params, budget, options, config.nlos_K)
    elif s.kind == "random":
        report = evaluate_baseline(BaselineKind.RandomPhaseRis, geometry, params, budget, options)
    elif s.kind == "mimo":
        if s.size is None:
            geometry = geometry.replace(N_I_r=0, N_I_c=0)
        report = evaluate_baseline(BaselineKind.MimoSwipt, geometry, params, budget, options)
    else:  # pragma: no cover - parse_scheme guards this
        raise ConfigError(f"unknown scheme kind {s.kind!r}")
    report.label = s.name
    return report


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


@dataclass
class ResultTable:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    reports: list[tuple[str, OptimizationReport]] = field(default_factory=list, repr=False)

    def __post_init__(self):
        for row in self.rows:
            self._check(row)

    def _check(self, row):
        if len(row) != len(self.columns) or any(cell is None for cell in row):
            raise ValueError(f"row does not fill the table: {row!r}")

    def append(self, row) -> None:
        row = tuple(row)
        self._check(row)
        self.rows.append(row)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def select(self, **match) -> list[dict]:
        out = []
        for row in self.rows:
            rec = dict(zip(self.columns, row))
            if all(rec[k] == v for k, v in match.items()):
                out.append(rec)
        return out

    @property
    def any_infeasible(self) -> bool:
        return "termination" in self.columns and "infeasible" in self.column("termination")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(cell) for cell in row])
        return buf.getvalue()

    def write(self, path, report_dir=None) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.to_csv().encode("utf-8"))
        if report_dir is not None:
            report_dir = Path(report_dir)
            report_dir.mkdir(parents=True, exist_ok=True)
            for name, report in self.reports:
                (report_dir / f"{name}.json").write_text(report.to_json(indent=2), encoding="utf-8")
        return path


@dataclass(frozen=True)
class RunOutcome:
    index: int
    value: float
    scheme: str
    seed: int
    report: OptimizationReport


def _execute(task) -> RunOutcome:
    index, config, variable, value, scheme, seed = task
    cfg = with_value(config, variable, value) if variable else config
    return RunOutcome(index, value, scheme, seed, run_scheme(cfg, scheme, seed))


def _workers(jobs: int) -> int:
    if jobs <= 0:
        return os.cpu_count() or 1
    return jobs


def _run_all(tasks, jobs: int) -> list[RunOutcome]:
    n = min(_workers(jobs), len(tasks))
    if n <= 1:
        results = [_execute(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(_execute, tasks))
    return sorted(results, key=lambda r: r.index)


def _dbm(watts: float) -> float:
    return float(watts_to_dbm(watts)) if watts > 0 else float("-inf")


def _run_name(prefix: str, value, scheme: str) -> str:
    return f"{prefix}_{_fmt(float(value))}_{scheme}"


def _sweep(config: ExperimentConfig, spec, seed: int, jobs: int | None, prefix: str) -> ResultTable:
    values = sweep_values(spec)
    schemes = [parse_scheme(s).name for s in spec.schemes]
    tasks = []
    for value in values:
        for scheme in schemes:
            index = len(tasks)
            tasks.append((index, config, spec.variable, float(value), scheme, run_seed(seed, index)))
    outcomes = _run_all(tasks, config.jobs if jobs is None else jobs)

    table = ResultTable(SWEEP_COLUMNS)
    q_min_dbm = _dbm(config.link_budget().Q_min)
    for out in outcomes:
        rep = out.report
        table.append((
            spec.variable, out.value, out.scheme, rep.capacity, _dbm(rep.harvested), _dbm(rep.q_max),
            q_min_dbm, len(rep.iterations), rep.termination, out.seed,
        ))
        table.reports.append((_run_name(prefix, out.value, out.scheme), rep))
    return table


def run_power_sweep(config: ExperimentConfig, seed: int = 0, jobs: int | None = None) -> ResultTable:
    """Capacity and harvested power against total transmit power."""
    return _sweep(config, config.power_sweep, seed, jobs, "power")


def run_distance_sweep(config: ExperimentConfig, seed: int = 0, jobs: int | None = None) -> ResultTable:
    """Capacity against Tx-RIS distance; the RIS slides along its lateral offset."""
    return _sweep(config, config.distance_sweep, seed, jobs, "distance")


def run_convergence(config: ExperimentConfig, seed: int = 0, jobs: int | None = None) -> ResultTable:
    """Per-iteration capacity traces for every (K, RIS size) combination."""
    combos = [(K, size) for K in config.convergence.K_values for size in config.convergence.ris_sizes]
    tasks = []
    for index, (K, size) in enumerate(combos):
        cfg = replace(config, propagation=replace(config.propagation, K=float(K)))
        tasks.append((index, cfg, None, float(K), f"ris-{size}", run_seed(seed, index)))
    outcomes = _run_all(tasks, config.jobs if jobs is None else jobs)

    table = ResultTable(CONVERGENCE_COLUMNS)
    for out in outcomes:
        rep = out.report
        size = out.scheme.removeprefix("ris-")
        for rec in rep.iterations:
            table.append((
                out.value, size, rec.iteration, rec.capacity, _dbm(rec.harvested), _dbm(rec.q_max),
                rec.phi_accepted, rep.termination, out.seed,
            ))
        table.reports.append((_run_name("convergence", out.value, out.scheme), rep))
    return table


def run_single(config: ExperimentConfig, scheme: str = "ris", seed: int = 0) -> OptimizationReport:
    """One optimization run; the seed is used directly."""
    return run_scheme(config, scheme, seed)
