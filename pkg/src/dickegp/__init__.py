"""Ground state, geometric phase and critical scaling of the rotating-wave Dicke model."""

from .errors import *  # noqa: F401,F403
from .model import (
    FluctuationCoefficients,
    H2Coefficients,
    MeanFieldSolution,
    ModelParams,
    Phase,
    critical_coupling,
    fluctuation_coefficients,
    gp_per_atom,
    gp_slope_at_critical,
    ground_energy_per_atom,
    h0_energy,
    mean_field,
    validate_params,
)
from .sector_ed import (
    EDGroundState,
    ScanPolicy,
    SectorBasis,
    TridiagonalMatrix,
    build_sector,
    dense_oracle,
    ground_state,
    sector_ground,
)

__version__ = "0.1.0"
