"""Well-block radius sewing for Darcy and Forchheimer near-well flow."""

from .core import (
    PEACEMAN_RATIO,
    ConfigError,
    FluidRockParams,
    GridSpec,
    PressureField,
    SolverError,
    ValidationReport,
    WellblockError,
    WellModelResult,
    WellSpec,
    validate_config,
)
from .radial_flow import Annulus

__version__ = "0.1.0"

__all__ = [
    "PEACEMAN_RATIO",
    "Annulus",
    "ConfigError",
    "FluidRockParams",
    "GridSpec",
    "PressureField",
    "SolverError",
    "ValidationReport",
    "WellModelResult",
    "WellSpec",
    "WellblockError",
    "validate_config",
]
