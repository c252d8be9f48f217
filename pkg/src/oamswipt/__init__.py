"""RIS-assisted OAM links with simultaneous wireless information and power transfer.

Geometry and channel models, the OAM transform pair, link metrics, the
alternating optimizer over RIS phases and power-splitting ratios, reference
baselines and the experiment drivers.
"""

from .alternating import (
    IterationRecord,
    OptimizationOptions,
    OptimizationReport,
    evaluate,
    evaluate_fixed,
    iteration_seed,
    optimize,
    optimize_channels,
    report_from_json,
)
from .baselines import BaselineKind, evaluate_baseline
from .channel import (
    ChannelSet,
    PropagationParams,
    ReflectionState,
    build_channels,
    compose,
    dump_channels_csv,
    free_space,
    oam_channel,
)
from .config import ExperimentConfig, emit_config, load_config, parse_config
from .errors import (
    CoincidentElements,
    ConfigError,
    DegenerateOrientation,
    DimensionMismatch,
    Infeasible,
    InvalidGeometry,
    InvalidSplit,
    OamSwiptError,
    ShapeMismatch,
    SingularMse,
    SolverDiverged,
    SplitSaturated,
    ZeroDiagonal,
    ZeroHomogenizer,
)
from .experiments import ResultTable, run_convergence, run_distance_sweep, run_power_sweep, run_scheme
from .geometry import ElementLayout, OrientationFrame, SystemGeometry, deflection_angle, element_layout, orientation_frame
from .metrics import LinkBudget, LinkMetrics, PowerSplit, harvested_power, link_metrics, mode_sinr, sum_capacity
from .oam import (
    NoiseModel,
    PowerAllocation,
    TransformPair,
    dbm_to_watts,
    demodulate,
    identity_transforms,
    make_transforms,
    modulate,
    recover,
    simulate_link,
    watts_to_dbm,
)
from .reflect import (
    homogenize,
    mse_matrix,
    optimal_weight,
    optimize_reflection,
    p5_objective,
    p7_objective,
    quadratic_form,
    randomize,
    solve_sdp,
)
from .split import SplitProblem, feasibility, solve_split, solve_split_detailed, split_problem

__version__ = "0.1.0"
