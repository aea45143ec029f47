"""Workspace analysis and counterbalance design optimization for
cable-driven parallel robots."""

from ._kernels import backend_name, numba_available
from .errors import (
    ConfigurationError,
    GeometryError,
    GeometryParseError,
    SingularConfigurationError,
    SingularPoseError,
)
from .geometry import (
    ElasticParams,
    PlanarCaseGeometry,
    PlatformPose,
    RobotGeometry,
    ScanRegion,
    Variant,
    expand_planar,
    load_geometry,
    load_table1_preset,
    save_geometry,
    table1_preset_path,
)
from .kinematics import CableState, Jacobians, cable_rates, cable_state, jacobians
from .optimize import (
    CounterweightSizing,
    SweepResult,
    WpSweepOutcome,
    compare_configs,
    counterweight,
    sweep_t5,
    sweep_wp,
)
from .statics import (
    CostResult,
    EquilibriumInput,
    TensionSolution,
    candidate_tensions,
    cost_elastic,
    cost_rigid,
    dynamics_residual,
    equilibrium_input,
    feasible_alpha_interval,
    gravity_wrench,
    nullspace_oracle,
    nullspace_solver,
)
from .workspace import (
    CoverageReport,
    WorkspaceGrid,
    completeness_gap,
    coverage,
    scan,
    union_scan,
)

__version__ = "0.1.0"
