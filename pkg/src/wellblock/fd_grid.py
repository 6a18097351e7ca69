"""Five-point finite-difference model of a point sink on the square [-L, L]^2.

Nodes sit at (i*delta, j*delta) for i, j in [-M, M]; the outer ring is pinned
(zero pressure unless boundary data is supplied) and the (2M-1)^2 interior
nodes are unknowns. The centre-node equation reads

    T * (sum of four neighbours - 4 p0) = q,   T = k h / mu,

so the symmetric neighbour pressure p1 exceeds p0 by exactly alpha q / 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .core import (
    PEACEMAN_RATIO,
    ConfigError,
    FluidRockParams,
    GridSpec,
    PressureField,
    SolverError,
)

DEFAULT_TOL = 1e-11


@dataclass(frozen=True)
class StencilSystem:
    grid: GridSpec
    transmissibility: float
    matrix: sp.csr_matrix
    rhs: np.ndarray
    boundary: np.ndarray  # full (2M+1)^2 node array, interior entries zero

    @property
    def dimension(self) -> int:
        return self.rhs.size


@dataclass(frozen=True)
class R0Estimate:
    r0_over_delta: float
    slope: float
    intercept: float
    n_points: int
    fit_rms: float

    def r0(self, delta: float) -> float:
        return self.r0_over_delta * delta


@dataclass(frozen=True)
class ConvergenceRow:
    M: int
    value: float
    difference: float  # value - value at previous M; nan for the first row
    contour_flux: float


@dataclass
class ConvergenceTable:
    probe: tuple[float, float]
    rows: list[ConvergenceRow] = field(default_factory=list)
    fields: dict[int, PressureField] = field(default_factory=dict, repr=False)

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.rows])

    @property
    def differences(self) -> np.ndarray:
        return np.array([r.difference for r in self.rows[1:]])


def node_coordinates(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """x, y coordinates of all nodes, shaped like PressureField.values."""
    ax = np.arange(-grid.M, grid.M + 1) * grid.delta
    return np.meshgrid(ax, ax, indexing="ij")


def _laplacian_1d(n: int) -> sp.csr_matrix:
    return sp.diags([-np.ones(n - 1), 2.0 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1])


def assemble(
    grid: GridSpec,
    fluid: FluidRockParams,
    q: float,
    boundary: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
) -> StencilSystem:
    """Build the SPD system T * (-discrete Laplacian) p = -q e_0.

    ``boundary`` optionally maps node coordinates (x, y) to pinned values on
    the outer ring; by default the ring is held at zero.
    """
    if grid.M < 2:
        raise ConfigError("M must be at least 2")
    n = grid.n_interior
    T = 1.0 / fluid.alpha
    K = _laplacian_1d(n)
    eye = sp.identity(n)
    A = (T * (sp.kron(eye, K) + sp.kron(K, eye))).tocsr()

    b = np.zeros((n, n))
    b[grid.M - 1, grid.M - 1] = -q

    ring = np.zeros((2 * grid.M + 1,) * 2)
    if boundary is not None:
        x, y = node_coordinates(grid)
        vals = np.asarray(boundary(x, y), dtype=float)
        mask = np.zeros_like(ring, dtype=bool)
        mask[[0, -1], :] = True
        mask[:, [0, -1]] = True
        ring[mask] = vals[mask]
        # pinned neighbours move to the right-hand side
        b[0, :] += T * ring[0, 1:-1]
        b[-1, :] += T * ring[-1, 1:-1]
        b[:, 0] += T * ring[1:-1, 0]
        b[:, -1] += T * ring[1:-1, -1]
    return StencilSystem(grid, T, A, b.ravel(), ring)


def conjugate_gradient(
    A: sp.spmatrix, b: np.ndarray, tol: float, max_iter: int
) -> tuple[np.ndarray, int]:
    """Unpreconditioned CG from x = 0, stopping on ||r|| <= tol ||b||."""
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rs = float(r @ r)
    target = (tol * float(np.linalg.norm(b))) ** 2
    for it in range(1, max_iter + 1):
        if rs <= target:
            return x, it - 1
        Ap = A @ p
        step = rs / float(p @ Ap)
        x += step * p
        r -= step * Ap
        rs_new = float(r @ r)
        p *= rs_new / rs
        p += r
        rs = rs_new
    if rs <= target:
        return x, max_iter
    raise SolverError(
        "CG did not converge",
        residual=math.sqrt(rs) / float(np.linalg.norm(b)),
        iterations=max_iter,
    )


def solve(
    system: StencilSystem, tol: float = DEFAULT_TOL, method: str = "direct"
) -> PressureField:
    """Solve the stencil system and return the full node field.

    ``method`` is ``"direct"`` (sparse LU) or ``"cg"``. Both are deterministic
    for fixed inputs. Raises SolverError if the relative residual exceeds tol.
    """
    if not 1e-14 <= tol <= 1e-4:
        raise ConfigError("tol must lie in [1e-14, 1e-4]")
    grid = system.grid
    A, b = system.matrix, system.rhs
    bnorm = float(np.linalg.norm(b))
    values = system.boundary.copy()
    if bnorm == 0.0:
        return PressureField(values, 0.0, grid)

    iterations = 0
    if method == "direct":
        x = spla.spsolve(A.tocsc(), b)
    elif method == "cg":
        x, iterations = conjugate_gradient(A, b, tol, max_iter=20 * A.shape[0])
    else:
        raise ConfigError(f"unknown solver method {method!r}")

    residual = float(np.linalg.norm(A @ x - b)) / bnorm
    if not residual <= tol:
        raise SolverError(
            f"relative residual {residual:.3e} exceeds tol {tol:.1e}",
            residual=residual,
        )
    n = grid.n_interior
    values[1:-1, 1:-1] = x.reshape(n, n)
    return PressureField(values, residual, grid, iterations)


def solve_point_source(
    grid: GridSpec,
    fluid: FluidRockParams,
    q: float,
    tol: float = DEFAULT_TOL,
    method: str = "direct",
) -> PressureField:
    return solve(assemble(grid, fluid, q), tol, method)


def symmetry_defect(field: PressureField) -> float:
    """Largest deviation of the field from its x-, y- and diagonal mirrors."""
    p = field.values
    return float(
        max(
            np.abs(p - p[::-1, :]).max(),
            np.abs(p - p[:, ::-1]).max(),
            np.abs(p - p.T).max(),
        )
    )


def block_pressures(field: PressureField) -> dict[str, float]:
    """Centre pressure p0, mean neighbour pressure p1 and their spread."""
    nb = np.array(
        [field.at(1, 0), field.at(-1, 0), field.at(0, 1), field.at(0, -1)]
    )
    return {
        "p0": field.p0,
        "p1": float(nb.mean()),
        "symmetry_defect": float(nb.max() - nb.min()),
    }


def estimate_r0_numeric(
    field: PressureField,
    fluid: FluidRockParams,
    q: float,
    r_min_blocks: float = 1.0,
    r_max_fraction: float = 0.25,
) -> R0Estimate:
    """Fit p = slope ln r + intercept over a ring of nodes and solve for R0.

    R0 is where the fitted radial profile takes the well-block value p0.
    The fit uses nodes with r_min_blocks*delta <= r <= r_max_fraction*L.
    ``fluid`` and ``q`` only set the expected slope reported alongside.
    """
    grid = field.grid
    x, y = node_coordinates(grid)
    r = np.hypot(x, y)
    # small slack so nodes sitting exactly on the window edge are kept
    eps = 1e-9 * grid.delta
    mask = (r >= r_min_blocks * grid.delta - eps) & (r <= r_max_fraction * grid.L + eps)
    mask &= r > 0
    n_points = int(mask.sum())
    if n_points < 8:
        raise ConfigError(f"only {n_points} nodes in fit window, need 8")
    if q == 0:
        raise ConfigError("R0 regression needs a nonzero rate")

    lnr = np.log(r[mask])
    p = field.values[mask]
    design = np.column_stack([lnr, np.ones_like(lnr)])
    (slope, intercept), *_ = np.linalg.lstsq(design, p, rcond=None)
    rms = float(np.sqrt(np.mean((design @ [slope, intercept] - p) ** 2)))
    r0 = math.exp((field.p0 - intercept) / slope)
    return R0Estimate(r0 / grid.delta, float(slope), float(intercept), n_points, rms)


def expected_slope(fluid: FluidRockParams, q: float) -> float:
    return fluid.alpha * q / (2.0 * math.pi)


def contour_flux(field: PressureField, transmissibility: float, half_width: int) -> float:
    """Net flux into the node square max(|i|,|j|) <= half_width.

    Summing the balance equations over the square telescopes to the source
    rate, so for a point source this returns q.
    """
    M = field.grid.M
    K = half_width
    if not 0 <= K < M:
        raise ConfigError("contour must lie strictly inside the grid")
    p = field.values
    lo, hi = M - K, M + K
    span = slice(lo, hi + 1)
    out = (
        (p[hi + 1, span] - p[hi, span]).sum()
        + (p[lo - 1, span] - p[lo, span]).sum()
        + (p[span, hi + 1] - p[span, hi]).sum()
        + (p[span, lo - 1] - p[span, lo]).sum()
    )
    return float(transmissibility * out)


def green_refinement_study(
    grid_sequence: Sequence[int],
    fluid: FluidRockParams,
    q: float,
    L: float = 1.0,
    tol: float = DEFAULT_TOL,
    keep_fields: bool = False,
) -> ConvergenceTable:
    """Sample p_M at the probe (L/4, L/8) for a sequence of refinements."""
    Ms = list(grid_sequence)
    if any(m < 8 for m in Ms) or any(b <= a for a, b in zip(Ms, Ms[1:])):
        raise ConfigError("grid_sequence must be strictly increasing with M >= 8")
    probe = (L / 4.0, L / 8.0)
    table = ConvergenceTable(probe)
    prev = math.nan
    for M in Ms:
        grid = GridSpec(L, M)
        i, j = (int(round(c / grid.delta)) for c in probe)
        if i == 0 and j == 0:
            raise ConfigError("probe coincides with the source node")
        fld = solve_point_source(grid, fluid, q, tol)
        value = fld.at(i, j)
        flux = contour_flux(fld, 1.0 / fluid.alpha, M // 2)
        table.rows.append(ConvergenceRow(M, value, value - prev, flux))
        prev = value
        if keep_fields:
            table.fields[M] = fld
    return table


def green_oscillation_check(R_e: float, delta: float) -> dict[str, float]:
    """|4 (G(delta) - G(R0))| for the disk Green function, R0 = delta e^{-pi/2}.

    On the centred disk G(r) = ln(R_e/r) / (2 pi) and the corrector is
    constant, so the value is 1 for every admissible delta.
    """
    if not 0 < delta < 0.5 * R_e:
        raise ConfigError("need 0 < delta < R_e / 2")
    r0 = delta * PEACEMAN_RATIO

    def G(r: float) -> float:
        return math.log(R_e / r) / (2.0 * math.pi)

    return {"value": abs(4.0 * (G(delta) - G(r0))), "r0_used": r0}


@dataclass(frozen=True)
class CorrectorFit:
    """Harmonic fit g(x, y) = sum_m c_m Re((x + i y)^(4m)) of the FD corrector."""

    coefficients: np.ndarray
    rms: float
    n_points: int

    def __call__(self, x: float, y: float = 0.0) -> float:
        z = complex(x, y)
        return float(sum(c * (z ** (4 * m)).real for m, c in enumerate(self.coefficients)))


def fit_corrector(
    field: PressureField,
    fluid: FluidRockParams,
    q: float,
    r_min_blocks: float = 4.0,
    r_max_fraction: float = 0.5,
    n_terms: int = 7,
) -> CorrectorFit:
    """Fit the smooth part of the unit-source FD Green function.

    The unit-source Green function is G = -p / (alpha q); subtracting the
    fundamental solution ln(1/r)/(2 pi) leaves a harmonic corrector with the
    four-fold symmetry of the square, fitted on the ring
    r_min_blocks*delta <= r <= r_max_fraction*L.
    """
    if q == 0:
        raise ConfigError("corrector fit needs a nonzero rate")
    grid = field.grid
    x, y = node_coordinates(grid)
    r = np.hypot(x, y)
    mask = (r >= r_min_blocks * grid.delta) & (r <= r_max_fraction * grid.L)
    G = -field.values[mask] / (fluid.alpha * q)
    g = G + np.log(r[mask]) / (2.0 * math.pi)
    z = (x + 1j * y)[mask]
    # scale by the window radius to keep the design matrix well conditioned
    scale = r_max_fraction * grid.L
    basis = np.column_stack([((z / scale) ** (4 * m)).real for m in range(n_terms)])
    coef, *_ = np.linalg.lstsq(basis, g, rcond=None)
    rms = float(np.sqrt(np.mean((basis @ coef - g) ** 2)))
    coef = coef / scale ** (4 * np.arange(n_terms))
    return CorrectorFit(coef, rms, int(mask.sum()))


def green_oscillation_fd(
    field: PressureField,
    fluid: FluidRockParams,
    q: float,
    probe_radii: Sequence[float],
) -> list[dict[str, float]]:
    """Square-domain counterpart of green_oscillation_check.

    G is rebuilt from the FD field as ln(1/r)/(2 pi) + fitted corrector and
    evaluated on the x-axis at delta and delta e^{-pi/2}. The corrector is
    not constant on the square, so the value deviates from 1 by O(delta^4).
    """
    corr = fit_corrector(field, fluid, q)
    out = []
    for delta in probe_radii:
        if not 0 < delta < 0.5 * field.grid.L:
            raise ConfigError("probe radius must lie in (0, L/2)")
        r0 = delta * PEACEMAN_RATIO
        G_delta = math.log(1.0 / delta) / (2.0 * math.pi) + corr(delta)
        G_r0 = math.log(1.0 / r0) / (2.0 * math.pi) + corr(r0)
        value = abs(4.0 * (G_delta - G_r0))
        out.append({"delta": delta, "value": value, "r0_used": r0,
                    "deviation": abs(value - 1.0)})
    return out
