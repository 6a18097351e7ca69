"""Shared domain types and configuration checks.

All quantities are taken in one consistent unit system chosen by the caller;
nothing here converts units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HALF_PI = 0.5 * math.pi
# Ratio of the Darcy well-block radius to the grid spacing.
PEACEMAN_RATIO = math.exp(-HALF_PI)


class WellblockError(Exception):
    """Base class for library errors."""


class ConfigError(WellblockError, ValueError):
    pass


class SolverError(WellblockError, RuntimeError):
    def __init__(self, message: str, residual: float = math.nan, **state):
        super().__init__(message)
        self.residual = residual
        self.state = state


def _check_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise ConfigError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class FluidRockParams:
    mu: float
    k: float
    h: float
    beta1: float = 0.0

    def __post_init__(self):
        _check_finite(mu=self.mu, k=self.k, h=self.h, beta1=self.beta1)

    @property
    def alpha(self) -> float:
        """Flow resistivity mu/(k h)."""
        return self.mu / (self.k * self.h)

    @property
    def alpha1(self) -> float:
        return self.mu / self.k

    @property
    def beta(self) -> float:
        """Forchheimer coefficient per unit thickness squared, beta1/h**2."""
        return self.beta1 / (self.h * self.h)

    @classmethod
    def from_alpha_beta(cls, alpha: float, beta: float = 0.0) -> "FluidRockParams":
        """Unit-thickness, unit-permeability fluid with the given alpha and beta."""
        return cls(mu=alpha, k=1.0, h=1.0, beta1=beta)


@dataclass(frozen=True)
class GridSpec:
    L: float
    M: int

    def __post_init__(self):
        _check_finite(L=self.L)
        if not isinstance(self.M, (int, np.integer)) or isinstance(self.M, bool):
            raise ConfigError(f"M must be an integer, got {self.M!r}")

    @property
    def delta(self) -> float:
        return self.L / self.M

    @property
    def n_interior(self) -> int:
        return 2 * self.M - 1

    def is_boundary(self, i: int, j: int) -> bool:
        return abs(i) == self.M or abs(j) == self.M


@dataclass(frozen=True)
class WellSpec:
    r_w: float
    q: float
    theta: float | None = None

    def __post_init__(self):
        _check_finite(r_w=self.r_w, q=self.q)
        if self.theta is None:
            object.__setattr__(self, "theta", self.r_w)
        _check_finite(theta=self.theta)


@dataclass(frozen=True)
class PressureField:
    """Node pressures p[i + M, j + M] for i, j in [-M, M]."""

    values: np.ndarray
    residual_norm: float
    grid: GridSpec
    iterations: int = 0

    def __post_init__(self):
        self.values.setflags(write=False)

    def at(self, i: int, j: int) -> float:
        M = self.grid.M
        return float(self.values[i + M, j + M])

    @property
    def p0(self) -> float:
        return self.at(0, 0)


@dataclass(frozen=True)
class WellModelResult:
    r0: float
    delta_factor: float
    d_factor: float
    t_w: float
    p_w: float
    drop_simulator: float
    drop_correct: float


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()
    branch: int = 1

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        return [f"violation: {v}" for v in self.violations] + [
            f"warning: {w}" for w in self.warnings
        ]

    def __str__(self) -> str:
        return "\n".join(self.lines()) or "valid"


def validate_config(
    fluid: FluidRockParams, grid: GridSpec, well: WellSpec
) -> ValidationReport:
    """Check the standing assumptions of the well-block model.

    Domain violations are reported, never raised. Non-finite inputs are
    rejected at construction of the dataclasses themselves.
    """
    violations: list[str] = []
    warnings: list[str] = []

    for name, value in (("mu", fluid.mu), ("k", fluid.k), ("h", fluid.h)):
        if value <= 0:
            violations.append(f"non-positive {name}")
    if fluid.beta1 < 0:
        violations.append("negative beta1")
    if grid.L <= 0:
        violations.append("non-positive L")
    if grid.M < 2:
        violations.append("M < 2")
    if well.r_w <= 0:
        violations.append("non-positive r_w")
    if well.theta <= 0:
        violations.append("non-positive theta")

    branch = 1
    if grid.L > 0 and grid.M >= 1 and well.theta > 0:
        delta = grid.delta
        if well.theta >= delta:
            violations.append("theta >= delta")
        elif delta <= math.exp(HALF_PI) * well.theta:
            branch = 2
            warnings.append(
                "branch 2: r_w <= delta <= exp(pi/2) r_w, strict well-posedness not met"
            )
    return ValidationReport(tuple(violations), tuple(warnings), branch)
