"""Well-block radius, rate-dependent correction and inflow relations.

For Darcy flow the well-block radius is delta * exp(-pi/2). With a
Forchheimer near-well zone and a linear grid balance, it becomes
R0 = delta * exp(-d pi/2), where the factor d in (0, 1] is the root of

    F(d) = d + (beta q / (alpha pi^2)) (exp(d pi/2) - 1) / delta - 1.

d depends on the unit system through beta q / (alpha delta); inputs must
share one consistent set of units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import radial_flow
from .core import (
    HALF_PI,
    PEACEMAN_RATIO,
    ConfigError,
    FluidRockParams,
    SolverError,
    WellModelResult,
    _check_finite,
)
from .radial_flow import FOUR_PI2, TWO_PI, Annulus

PI2 = math.pi**2


def peaceman_radius_darcy(delta_spacing: float) -> float:
    if delta_spacing <= 0:
        raise ConfigError("grid spacing must be positive")
    return delta_spacing * PEACEMAN_RATIO


@dataclass(frozen=True)
class WellposednessReport:
    condition_met: bool
    r0: float
    sewing_residual: float
    u1_theta: float
    u0_theta: float

    @property
    def pressures_match(self) -> bool:
        return math.isclose(self.u1_theta, self.u0_theta, rel_tol=1e-12, abs_tol=1e-15)


def sewing_residual(delta_spacing: float, r0: float) -> float:
    """1/2 - ln(delta/R0)/pi; vanishes only at the Peaceman radius."""
    return 0.5 - math.log(delta_spacing / r0) / math.pi


def check_strict_wellposedness(
    delta_spacing: float,
    theta: float,
    q: float,
    alpha: float,
    r0: float | None = None,
) -> WellposednessReport:
    """Check that the two annular problems sewn at theta share a well pressure.

    With p1 = 0 as the reference, p0 = -alpha q / 4 from the grid balance,
    u1(theta) is the Darcy profile through (delta, p1) and u0(theta) the one
    through (R0, p0). ``r0`` defaults to the Peaceman radius; passing another
    candidate shows the mismatch.
    """
    for name, v in (("delta", delta_spacing), ("theta", theta), ("alpha", alpha)):
        if v <= 0:
            raise ConfigError(f"{name} must be positive")
    if r0 is None:
        r0 = peaceman_radius_darcy(delta_spacing)
    p1 = 0.0
    p0 = p1 - 0.25 * alpha * q
    c = alpha * q / TWO_PI
    # log differences keep the Peaceman case exact: ln(R0/theta) = ln(delta/theta) - pi/2
    u1 = p1 - c * math.log(delta_spacing / theta)
    u0 = p0 - c * (math.log(delta_spacing / theta) - math.log(delta_spacing / r0))
    return WellposednessReport(
        condition_met=delta_spacing > math.exp(HALF_PI) * theta,
        r0=r0,
        sewing_residual=sewing_residual(delta_spacing, r0),
        u1_theta=u1,
        u0_theta=u0,
    )


@dataclass(frozen=True)
class DeltaEquation:
    alpha: float
    beta: float
    q: float
    delta_spacing: float

    def __post_init__(self):
        _check_finite(alpha=self.alpha, beta=self.beta, q=self.q,
                      delta_spacing=self.delta_spacing)
        if self.alpha <= 0 or self.delta_spacing <= 0:
            raise ConfigError("alpha and delta_spacing must be positive")
        if self.beta < 0 or self.q < 0:
            raise ConfigError("beta and q must be nonnegative")

    @classmethod
    def from_fluid(cls, fluid: FluidRockParams, q: float, delta_spacing: float):
        return cls(fluid.alpha, fluid.beta, q, delta_spacing)

    @property
    def strength(self) -> float:
        """beta q / (alpha pi^2 delta)."""
        return self.beta * self.q / (self.alpha * PI2 * self.delta_spacing)

    def __call__(self, d: float) -> float:
        return d + self.strength * math.expm1(d * HALF_PI) - 1.0

    def derivative(self, d: float) -> float:
        return 1.0 + self.strength * HALF_PI * math.exp(d * HALF_PI)


@dataclass(frozen=True)
class DeltaRoot:
    value: float
    iterations: int
    residual: float


def solve_delta_detailed(
    eq: DeltaEquation, tol: float = 1e-13, max_iter: int = 200
) -> DeltaRoot:
    """Newton from d = 1, kept inside the bracket [0, 1] by bisection."""
    if not 1e-15 <= tol <= 1e-6:
        raise ConfigError("tol must lie in [1e-15, 1e-6]")
    if eq.strength == 0.0:
        return DeltaRoot(1.0, 0, 0.0)

    lo, hi = 0.0, 1.0
    d = 1.0
    f = eq(d)
    for it in range(1, max_iter + 1):
        if f > 0:
            hi = d
        else:
            lo = d
        step = d - f / eq.derivative(d)
        d = step if lo < step < hi else 0.5 * (lo + hi)
        f = eq(d)
        if abs(f) <= tol:
            return DeltaRoot(d, it, f)
        if hi - lo <= 4 * math.ulp(hi):
            break
    raise SolverError(
        "delta equation did not converge", residual=abs(f), bracket=(lo, hi), last=d
    )


def solve_delta(eq: DeltaEquation, tol: float = 1e-13) -> float:
    return solve_delta_detailed(eq, tol).value


def bisect_delta(eq: DeltaEquation, iterations: int = 60) -> float:
    """Plain bisection on [0, 1]; reference oracle for solve_delta."""
    lo, hi = 0.0, 1.0
    if eq(hi) <= 0.0:
        return hi
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if eq(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def forchheimer_radius(
    fluid: FluidRockParams, q: float, delta_spacing: float, tol: float = 1e-13
) -> dict[str, float]:
    eq = DeltaEquation.from_fluid(fluid, q, delta_spacing)
    d = solve_delta(eq, tol)
    return {"r0": delta_spacing * math.exp(-d * HALF_PI), "delta_factor": d}


def sewing_balance(
    fluid: FluidRockParams, q: float, delta_spacing: float, r_w: float, r0: float,
    p_w: float = 0.0,
) -> dict[str, float]:
    """Grid pressures implied by Forchheimer flow from the well to delta and R0.

    Returns p1 and p0 built from the two annular drops; the sewing holds when
    p1 - p0 equals alpha q / 4.
    """
    alpha, beta = fluid.alpha, fluid.beta
    p1 = p_w + radial_flow.forchheimer_drop(q, alpha, beta, Annulus(r_w, delta_spacing))
    p0 = p_w + radial_flow.forchheimer_drop(q, alpha, beta, Annulus(r_w, r0))
    return {"p1": p1, "p0": p0, "p1_minus_p0": p1 - p0, "target": 0.25 * alpha * q}


def d_factor(fluid: FluidRockParams, r_w: float) -> float:
    """Rate-dependent skin coefficient (beta/alpha) / (2 pi r_w)."""
    if r_w <= 0:
        raise ConfigError("r_w must be positive")
    return fluid.beta / fluid.alpha / (TWO_PI * r_w)


def _darcy_r0_checked(delta_spacing: float, r_w: float) -> float:
    r0 = peaceman_radius_darcy(delta_spacing)
    if r_w >= r0:
        raise ConfigError("well radius exceeds equivalent radius")
    return r0


def dake_drop_simulator(
    q: float, fluid: FluidRockParams, delta_spacing: float, r_w: float
) -> float:
    """p0 - p_w as simulators apply it: Darcy radius plus a D q skin term."""
    r0 = _darcy_r0_checked(delta_spacing, r_w)
    D = d_factor(fluid, r_w)
    return fluid.alpha / TWO_PI * q * (math.log(r0 / r_w) + D * abs(q))


def dake_drop_correct(
    q: float, fluid: FluidRockParams, delta_spacing: float, r_w: float
) -> float:
    """p0 - p_w consistent with the rate-dependent well-block radius.

    The Darcy logarithm is unchanged; the quadratic term runs to delta
    instead of infinity.
    """
    r0 = _darcy_r0_checked(delta_spacing, r_w)
    return fluid.alpha / TWO_PI * q * math.log(r0 / r_w) + fluid.beta * q * abs(
        q
    ) / FOUR_PI2 * (1.0 / r_w - 1.0 / delta_spacing)


def well_index(q: float, mu: float, p0: float, p_w: float) -> float:
    """Connection transmissibility q mu / (p0 - p_w)."""
    if p0 == p_w:
        raise ConfigError("zero drawdown")
    return q * mu / (p0 - p_w)


def well_index_darcy(fluid: FluidRockParams, delta_spacing: float, r_w: float) -> float:
    """Closed form 2 pi k h / ln(R0/r_w) for the Darcy well-block radius."""
    r0 = _darcy_r0_checked(delta_spacing, r_w)
    return TWO_PI * fluid.k * fluid.h / math.log(r0 / r_w)


def evaluate_well(
    fluid: FluidRockParams, q: float, delta_spacing: float, r_w: float, p0: float,
    tol: float = 1e-13,
) -> WellModelResult:
    """Collect the well-model quantities for one block pressure p0.

    p_w is reconstructed with the corrected Forchheimer inflow relation and
    t_w is the resulting connection transmissibility.
    """
    rad = forchheimer_radius(fluid, q, delta_spacing, tol)
    drop_sim = dake_drop_simulator(q, fluid, delta_spacing, r_w)
    drop_cor = dake_drop_correct(q, fluid, delta_spacing, r_w)
    p_w = p0 - drop_cor
    return WellModelResult(
        r0=rad["r0"],
        delta_factor=rad["delta_factor"],
        d_factor=d_factor(fluid, r_w),
        t_w=well_index(q, fluid.mu, p0, p_w),
        p_w=p_w,
        drop_simulator=drop_sim,
        drop_correct=drop_cor,
    )
