"""Quasi-static simulator for a three-track in-pipe robot with a differential drive."""
from ._kernel import DEFAULT_BACKEND as KERNEL_BACKEND
from .analysis import SummaryReport, ape, phase_report, summarize
from .catalog import elbow_catalog
from .contact import (
    ContactState,
    SpringConfig,
    contact_angle,
    holding_force,
    no_slip_margin,
    normal_force,
    spring_stiffness_rule,
)
from .errors import CatalogKeyError, DomainError, PipeClimbError, ScenarioError, TravelLimitError
from .geometry import (
    BendSegment,
    CenterlinePose,
    PipeNetwork,
    StraightSegment,
    centerline_pose,
    effective_radius,
    segment_at,
    total_length,
)
from .scenario import Scenario, load_scenario, parse_scenario, serialize_scenario
from .telemetry import export_trace, read_trace
from .transmission import (
    DifferentialSolution,
    TransmissionConfig,
    power_balance,
    solve_fixed_outputs,
    solve_unloaded,
    solve_with_ratios,
    torque_split,
)
from .traversal import (
    DriveMode,
    RobotConfig,
    Trace,
    TraceSample,
    TraversalState,
    allocate_speeds,
    initial_state,
    required_speeds,
    run_scenario,
    slip_distance,
    spring_profile,
    step,
)

__version__ = "0.1.0"
