"""Steady radial flow in an annulus under Darcy and two-term Forchheimer laws.

Rates follow the production convention: q > 0 drains the inner contour, so
pressure rises with radius. Quadratic terms use q*|q| so the sign of the
velocity is kept when q < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import HALF_PI, ConfigError, _check_finite

TWO_PI = 2.0 * math.pi
FOUR_PI2 = 4.0 * math.pi**2


@dataclass(frozen=True)
class Annulus:
    r_inner: float
    r_outer: float

    def __post_init__(self):
        _check_finite(r_inner=self.r_inner, r_outer=self.r_outer)
        if self.r_inner == 0:
            raise ConfigError("singular radius: r_inner == 0")
        if not 0 < self.r_inner <= self.r_outer:
            raise ConfigError(
                f"need 0 < r_inner <= r_outer, got ({self.r_inner}, {self.r_outer})"
            )

    @property
    def log_ratio(self) -> float:
        return math.log(self.r_outer / self.r_inner)

    @property
    def inverse_gap(self) -> float:
        """1/r_inner - 1/r_outer."""
        return 1.0 / self.r_inner - 1.0 / self.r_outer


def darcy_drop(q: float, alpha: float, ann: Annulus) -> float:
    """p(r_outer) - p(r_inner) for radial Darcy flow."""
    _check_finite(q=q, alpha=alpha)
    return alpha * q / TWO_PI * ann.log_ratio


def darcy_profile(
    q: float, alpha: float, r: float, r_ref: float, p_ref: float
) -> float:
    """Radial Darcy pressure at r, anchored by p(r_ref) = p_ref."""
    _check_finite(q=q, alpha=alpha, r=r, r_ref=r_ref, p_ref=p_ref)
    if r <= 0 or r_ref <= 0:
        raise ConfigError("radii must be positive")
    return p_ref + alpha * q / TWO_PI * math.log(r / r_ref)


def forchheimer_drop(q: float, alpha: float, beta: float, ann: Annulus) -> float:
    """p(r_outer) - p(r_inner) for the two-term law.

    The linear term is the Darcy drop; the quadratic term is
    beta q|q| / (4 pi^2) * (1/r_inner - 1/r_outer).
    """
    _check_finite(q=q, alpha=alpha, beta=beta)
    linear = alpha * q / TWO_PI * ann.log_ratio
    if beta == 0.0:
        return linear
    return linear + beta * q * abs(q) / FOUR_PI2 * ann.inverse_gap


def rate_from_drop_forchheimer(
    drop: float, alpha: float, beta: float, ann: Annulus
) -> float:
    """Invert forchheimer_drop for the nonnegative rate."""
    _check_finite(drop=drop, alpha=alpha, beta=beta)
    if drop < 0:
        raise ConfigError("drop must be nonnegative (production convention)")
    if not ann.r_inner < ann.r_outer:
        raise ConfigError("rate inversion needs r_inner < r_outer")
    a = beta / FOUR_PI2 * ann.inverse_gap
    b = alpha / TWO_PI * ann.log_ratio
    if a == 0.0:
        return drop / b
    # 2c / (b + sqrt(b^2 + 4ac)) avoids cancellation when a*drop << b^2
    return 2.0 * drop / (b + math.sqrt(b * b + 4.0 * a * drop))


def reconstruct_pw_darcy(
    p0: float, q: float, alpha: float, delta: float, r_w: float
) -> float:
    """Well pressure from the well-block pressure p0 on a grid of spacing delta.

    For delta > exp(pi/2) r_w the Peaceman radius lies outside the well and
    p_w = p0 - (alpha q / 2 pi) ln(delta exp(-pi/2) / r_w). Otherwise the
    neighbour pressure p1 = p0 + alpha q / 4 is pushed down to r_w directly.
    Both branches agree at delta = exp(pi/2) r_w.
    """
    _check_finite(p0=p0, q=q, alpha=alpha, delta=delta, r_w=r_w)
    if r_w <= 0 or delta <= 0:
        raise ConfigError("delta and r_w must be positive")
    if r_w > delta:
        raise ConfigError("well radius exceeds grid spacing")
    c = alpha * q / TWO_PI
    if delta > math.exp(HALF_PI) * r_w:
        return p0 - c * (math.log(delta / r_w) - HALF_PI)
    return p0 + 0.25 * alpha * q - c * math.log(delta / r_w)


def radial_ode_oracle(
    q: float, alpha: float, beta: float, ann: Annulus, n_steps: int = 10_000
) -> float:
    """Composite Simpson integral of dp/dr over the annulus.

    Independent check on the closed forms above; the integrand is
    alpha q/(2 pi r) + beta q|q|/(4 pi^2 r^2).
    """
    if n_steps < 100:
        raise ConfigError("n_steps must be at least 100")
    n = n_steps + (n_steps % 2)
    r = np.linspace(ann.r_inner, ann.r_outer, n + 1)
    grad = alpha * q / (TWO_PI * r) + beta * q * abs(q) / (FOUR_PI2 * r * r)
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    step = (ann.r_outer - ann.r_inner) / n
    return float(step / 3.0 * np.dot(w, grad))
