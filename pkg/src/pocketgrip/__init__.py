"""Friction and grasp modelling for grippers with pressurised silicone pockets."""

from .analysis import (
    SlideTrace,
    TrialRecord,
    RoundnessSample,
    friction_from_trace,
    roundness_ratio,
    roundness_table,
    success_table,
)
from .contact import ContactRegime, ContactSolution, friction_force, resolve_contact
from .errors import (
    ConfigError,
    DegenerateNormal,
    DomainError,
    EmptyWindow,
    ParseError,
    UnknownKey,
    ValidationError,
)
from .grasp import GraspQuery, GraspVerdict, check_grasp, min_normal_force, min_pressure, sweep_grid
from .harness import (
    GraspTranscript,
    Outcome,
    PlantConfig,
    State,
    monte_carlo_success,
    run_grasp_protocol,
    voltage_to_pressure,
)
from .membrane import (
    BulgeState,
    MembraneSpec,
    bulge_height_exact,
    bulge_height_linear,
    bulge_pressure,
    cap_radius,
    reference_spec,
    resolve_bulge,
)

__version__ = "0.1.0"
