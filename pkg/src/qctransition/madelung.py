"""Madelung (polar) decomposition and hydrodynamic diagnostics.

A wavefunction psi = A * exp(i S / hbar) splits into amplitude A = |psi| and
action S.  For dynamics at degree of quantumness epsilon the pair obeys

    dA/dt = -(1/m) dA/dx dS/dx - (1/2m) A d2S/dx2            (continuity)
    dS/dt = -(1/2m) (dS/dx)^2 - V + eps (hbar^2/2m) A''/A    (Hamilton-Jacobi)

so the residuals of both equations, evaluated on two snapshots, measure how
well a field pair solves the transition dynamics.  The Bohm quantum potential
is U = -(hbar^2/2m) A''/A; the classicality-enforcing potential that appears
in the nonlinear wave equation is (1 - eps) (hbar^2/2m) (|psi|''/|psi|) psi,
i.e. -(1 - eps) U psi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavefield import ComplexField, Grid1D, PolarField, SimParams, _readonly


def gradient_central(f: np.ndarray, dx: float) -> np.ndarray:
    """First derivative: central interior, one-sided second-order ends."""
    return np.gradient(f, dx, edge_order=2)


def second_difference(f: np.ndarray, dx: float) -> np.ndarray:
    """Second derivative: central interior, one-sided second-order ends."""
    out = np.empty_like(f)
    invdx2 = 1.0 / (dx * dx)
    out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) * invdx2
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * invdx2
    out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) * invdx2
    return out


def polar_decompose(psi: ComplexField, hbar: float = 1.0) -> PolarField:
    """Split psi into amplitude and unwrapped action S = hbar * arg(psi).

    The phase is unwrapped outward from the grid point of maximum amplitude
    (the most reliable anchor), which pins the 2*pi branch so that the action
    at the anchor lies in (-pi*hbar, pi*hbar].  Reconstruction
    A * exp(i S / hbar) reproduces psi exactly up to rounding.
    """
    if hbar <= 0.0:
        raise ValueError("hbar must be positive")
    v = psi.values
    amp = np.abs(v)
    if amp.max() == 0.0:
        raise ValueError("amplitude vanishes everywhere: phase undefined")
    i0 = int(np.argmax(amp))
    theta = np.angle(v)
    phase = np.empty_like(theta)
    phase[i0:] = np.unwrap(theta[i0:])
    phase[: i0 + 1] = np.unwrap(theta[i0::-1])[::-1]
    return PolarField(grid=psi.grid, amplitude=amp, action=hbar * phase)


def _regularized(amp: np.ndarray, amp_floor_rel: float) -> tuple[np.ndarray, float]:
    floor = amp_floor_rel * float(amp.max())
    return np.maximum(amp, floor), floor


def quantum_potential(polar: PolarField, params: SimParams) -> np.ndarray:
    """Bohm quantum potential U = -(hbar^2/2m) A''/A with a floored divisor."""
    a = polar.amplitude
    areg, _ = _regularized(a, params.amp_floor_rel)
    lap = second_difference(a, polar.grid.dx)
    return -(params.hbar**2 / (2.0 * params.mass)) * lap / areg


def _classicality_term(values: np.ndarray, dx: float, params: SimParams) -> np.ndarray:
    """Raw-array core of classicality_potential_term (shared with the solver)."""
    one_minus_eps = 1.0 - params.epsilon
    if one_minus_eps == 0.0:
        return np.zeros_like(values)
    amp = np.abs(values)
    areg, floor = _regularized(amp, params.amp_floor_rel)
    lap = second_difference(amp, dx)
    term = (one_minus_eps * params.hbar**2 / (2.0 * params.mass)) * (lap / areg) * values
    term[amp < floor] = 0.0  # below the floor the ratio is unreliable
    return term


def classicality_potential_term(psi: ComplexField, params: SimParams) -> np.ndarray:
    """Classicality-enforcing term (1-eps)(hbar^2/2m)(|psi|''/|psi|) psi.

    The divisor is floored at amp_floor_rel * max|psi| and the term is
    clamped to zero wherever |psi| falls below that floor.  Identically zero
    at epsilon = 1.
    """
    return _classicality_term(np.array(psi.values), psi.grid.dx, params)


def _check_pair(p0: PolarField, p1: PolarField, dt: float) -> None:
    if p0.grid != p1.grid:
        raise ValueError("snapshot grids do not match")
    if dt <= 0.0:
        raise ValueError("dt must be positive")


def continuity_residual(
    p0: PolarField, p1: PolarField, dt: float, params: SimParams
) -> np.ndarray:
    """Residual of the continuity equation on a snapshot pair.

    r = (A1-A0)/dt + (1/m) dA/dx dS/dx + (1/2m) A d2S/dx2, spatial terms at
    the midpoint fields; -> 0 under dt, dx refinement for true solutions.
    """
    _check_pair(p0, p1, dt)
    dx = p0.grid.dx
    abar = 0.5 * (p0.amplitude + p1.amplitude)
    sbar = 0.5 * (p0.action + p1.action)
    da_dt = (p1.amplitude - p0.amplitude) / dt
    ga = gradient_central(abar, dx)
    gs = gradient_central(sbar, dx)
    lap_s = second_difference(sbar, dx)
    m = params.mass
    return da_dt + (ga * gs) / m + 0.5 * abar * lap_s / m


def hj_residual(
    p0: PolarField,
    p1: PolarField,
    dt: float,
    params: SimParams,
    *,
    t0: float = 0.0,
) -> np.ndarray:
    """Residual of the quantum Hamilton-Jacobi equation on a snapshot pair.

    r = (S1-S0)/dt + (1/2m)(dS/dx)^2 + V - eps (hbar^2/2m) A''/A, spatial
    terms at the midpoint fields, V evaluated at the midpoint time.
    """
    _check_pair(p0, p1, dt)
    dx = p0.grid.dx
    abar = 0.5 * (p0.amplitude + p1.amplitude)
    sbar = 0.5 * (p0.action + p1.action)
    ds_dt = (p1.action - p0.action) / dt
    gs = gradient_central(sbar, dx)
    lap_a = second_difference(abar, dx)
    areg, _ = _regularized(abar, params.amp_floor_rel)
    m = params.mass
    r = ds_dt + (gs * gs) / (2.0 * m)
    r -= (params.epsilon * params.hbar**2 / (2.0 * m)) * lap_a / areg
    if params.potential is not None:
        r = r + params.potential(p0.grid.x, t0 + 0.5 * dt)
    return r


def map_to_scaled(psi: ComplexField, params: SimParams) -> ComplexField:
    """Map a transition-equation state onto its linear-equation counterpart.

    psi = A exp(i S / hbar) maps to A exp(i S / hbar_scaled) with
    hbar_scaled = hbar sqrt(eps); densities are preserved exactly.  At
    eps = 1 the map is the identity.
    """
    if params.epsilon == 0.0:
        raise ValueError("classical case (epsilon = 0) has no scaled counterpart")
    if params.epsilon == 1.0:
        return psi
    polar = polar_decompose(psi, params.hbar)
    scaled = polar.amplitude * np.exp(1j * polar.action / params.hbar_scaled)
    return ComplexField(grid=psi.grid, values=scaled)


def bohm_velocity(polar: PolarField, params: SimParams) -> np.ndarray:
    """Velocity field v = (dS/dx)/m of the hydrodynamic flow."""
    return gradient_central(polar.action, polar.grid.dx) / params.mass


@dataclass(frozen=True)
class HydroFields:
    """Hydrodynamic view of a state: polar form, current and quantum potential."""

    polar: PolarField
    current: np.ndarray
    quantum_potential: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "current", _readonly(self.current))
        object.__setattr__(self, "quantum_potential", _readonly(self.quantum_potential))


def hydro_fields(psi: ComplexField, params: SimParams) -> HydroFields:
    """Polar form plus current j = (hbar/m) Im(psi* dpsi/dx) and potential U."""
    polar = polar_decompose(psi, params.hbar)
    grad_psi = gradient_central(psi.values, psi.grid.dx)
    j = (params.hbar / params.mass) * np.imag(np.conj(psi.values) * grad_psi)
    u = quantum_potential(polar, params)
    return HydroFields(polar=polar, current=j, quantum_potential=u)


@dataclass(frozen=True)
class TrajectoryResult:
    """Bohmian trajectory samples; exited marks early truncation."""

    positions: np.ndarray
    exited: bool

    def __post_init__(self):
        object.__setattr__(self, "positions", _readonly(self.positions))


def integrate_trajectory(
    x0: float,
    velocity_fields: list[np.ndarray],
    dt: float,
    grid: Grid1D,
) -> TrajectoryResult:
    """Integrate dx/dt = v(x, t) through a time series of velocity fields.

    Midpoint (RK2) stepping with linear interpolation in space; the fields
    are assumed sampled at uniform spacing dt on the common grid.  The
    trajectory is truncated with an exit flag if it leaves the grid.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if len(velocity_fields) == 0:
        raise ValueError("need at least one velocity field")
    if not grid.x_min <= x0 <= grid.x_max:
        raise ValueError(f"x0 = {x0} lies outside the grid")
    xs = grid.x
    pos = [float(x0)]
    exited = False
    x = float(x0)
    for k in range(len(velocity_fields) - 1):
        v0 = velocity_fields[k]
        v1 = velocity_fields[k + 1]
        vx = float(np.interp(x, xs, v0))
        x_half = x + 0.5 * dt * vx
        if not grid.x_min <= x_half <= grid.x_max:
            exited = True
            break
        v_mid = 0.5 * (v0 + v1)
        x_new = x + dt * float(np.interp(x_half, xs, v_mid))
        if not grid.x_min <= x_new <= grid.x_max:
            exited = True
            break
        x = x_new
        pos.append(x)
    return TrajectoryResult(positions=np.array(pos), exited=exited)
