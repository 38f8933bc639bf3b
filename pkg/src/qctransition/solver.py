"""Explicit finite-difference integrator for the transition wave equation.

The equation of motion, in one dimension with an optional external V,

    i hbar dpsi/dt = -(hbar^2/2m) d2psi/dx2 + V psi
                     + (1 - eps) (hbar^2/2m) (|psi|''/|psi|) psi,

is discretized with second-order central differences in space and classical
RK4 in time (method of lines).  Homogeneous Dirichlet boundaries are
enforced after every substage; the amplitude in the nonlinear term is
re-evaluated at every substage.  The scheme never renormalizes: norm drift
is monitored and a run aborts if it exceeds a loose instability threshold.

Stability: the free spectral radius is 2 hbar / (m dx^2), so RK4 on the
imaginary axis tolerates dt up to about 1.41 m dx^2 / hbar; the working
step is dt = dt_safety * m * dx^2 / hbar with dt_safety <= 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .wavefield import ComplexField, Grid1D, SimParams, trapezoid

# a single step may not change the norm by more than this (relative)
_NORM_ABORT_REL = 1e-3


class Boundary(enum.Enum):
    DIRICHLET_ZERO = "dirichlet0"


class Integrator(enum.Enum):
    RK4 = "rk4"


SCHEME_ID = "rk4-central2-dirichlet0"


class SolverFailure(RuntimeError):
    """Numerical failure (instability or NaN) during time integration."""

    def __init__(self, message: str, step_index: int, time: float):
        super().__init__(message)
        self.step_index = step_index
        self.time = time


@dataclass(frozen=True)
class SolverConfig:
    """One integration task: dynamics, grid, horizon and snapshot times."""

    params: SimParams
    grid: Grid1D
    t_final: float
    snapshot_times: tuple[float, ...] | None = None
    boundary: Boundary = Boundary.DIRICHLET_ZERO
    integrator: Integrator = Integrator.RK4

    def __post_init__(self):
        if self.t_final <= 0.0:
            raise ValueError("t_final must be positive")
        times = self.snapshot_times
        if times is None:
            times = (self.t_final,)
        times = tuple(sorted(set(float(t) for t in times)))
        if any(t < 0.0 or t > self.t_final for t in times):
            raise ValueError("snapshot times must lie in [0, t_final]")
        object.__setattr__(self, "snapshot_times", times)
        if self.boundary is not Boundary.DIRICHLET_ZERO:
            raise ValueError(f"unsupported boundary {self.boundary}")
        if self.integrator is not Integrator.RK4:
            raise ValueError(f"unsupported integrator {self.integrator}")


@dataclass(frozen=True)
class RunResult:
    """Snapshots plus integration diagnostics for one run."""

    snapshots: tuple[tuple[float, ComplexField], ...]
    norm_series: np.ndarray  # shape (n, 2): time, trapezoid norm
    dt_used: float
    steps_taken: int
    max_classicality_term: float

    @property
    def norm_drift_rel(self) -> float:
        norms = self.norm_series[:, 1]
        n0 = norms[0]
        return float(np.max(np.abs(norms / n0 - 1.0)))


def stability_dt(params: SimParams, grid: Grid1D) -> float:
    """Working time step dt = dt_safety * m * dx^2 / hbar."""
    return params.dt_safety * params.mass * grid.dx**2 / params.hbar


class _Stepper:
    """RK4 kernel with preallocated work arrays (hot loop of evolve)."""

    def __init__(self, grid: Grid1D, params: SimParams):
        self.params = params
        self.dx = grid.dx
        self.inv_dx2 = 1.0 / (self.dx * self.dx)
        self.c = params.hbar / (2.0 * params.mass)  # hbar/2m
        self.x = grid.x if params.potential is not None else None
        n = grid.n_points
        self.k = [np.zeros(n, dtype=np.complex128) for _ in range(4)]
        self.stage = np.zeros(n, dtype=np.complex128)
        self.amp = np.empty(n, dtype=np.float64)
        self.lap_amp = np.empty(n, dtype=np.float64)
        self.denom = np.empty(n, dtype=np.float64)
        self.unit = np.empty(n, dtype=np.complex128)
        self.term = np.zeros(n, dtype=np.complex128)

    def rhs(self, v: np.ndarray, t: float, out: np.ndarray, want_diag: bool = False) -> float:
        """dpsi/dt into out; boundaries pinned to zero.  Returns the
        magnitude of the classicality term (PDE units) when asked.

        The nonlinear piece is formed as lap(|v|) * (v / |v|_reg) so that
        on a real nonnegative field the kinetic and classicality stencils
        cancel bitwise at eps = 0: the frozen classical profile is an exact
        fixed point of the discrete flow, not just an approximate one.
        Points below the amplitude floor evolve freely for eps > 0 (the
        linear term keeps genuine spreading alive) but are frozen entirely
        at eps = 0, where nothing may move and the phase of a vanishing
        amplitude would otherwise inject noise that the classical tail
        amplifies.
        """
        p = self.params
        out[0] = 0.0
        out[-1] = 0.0
        interior = out[1:-1]
        np.add(v[2:], v[:-2], out=interior)
        interior -= v[1:-1]
        interior -= v[1:-1]
        diag = 0.0
        if p.epsilon != 1.0:
            amp = np.abs(v, out=self.amp)
            amax = amp.max()
            if amax > 0.0:
                floor = p.amp_floor_rel * amax
                lap = self.lap_amp[1:-1]
                np.add(amp[2:], amp[:-2], out=lap)
                lap -= amp[1:-1]
                lap -= amp[1:-1]
                np.maximum(amp, floor, out=self.denom)
                # componentwise divide: complex/real in numpy multiplies by
                # the reciprocal, which breaks the exact x/x == 1 identity
                unit = self.unit
                np.divide(v.real, self.denom, out=unit.real)
                np.divide(v.imag, self.denom, out=unit.imag)
                term = self.term[1:-1]
                np.multiply(unit[1:-1], lap, out=term)
                below = amp[1:-1] < floor
                term[below] = 0.0
                if want_diag:
                    coef = (1.0 - p.epsilon) * p.hbar**2 / (2.0 * p.mass)
                    diag = coef * self.inv_dx2 * float(np.abs(term).max())
                if p.epsilon == 0.0:
                    interior -= term
                    interior[below] = 0.0
                else:
                    term *= 1.0 - p.epsilon
                    interior -= term
        interior *= 1j * self.c * self.inv_dx2
        if p.potential is not None:
            vpot = p.potential(self.x, t)
            interior -= (1j / p.hbar) * np.asarray(vpot)[1:-1] * v[1:-1]
        return diag

    def rk4_step(self, v: np.ndarray, t: float, dt: float) -> float:
        """Advance v in place by one RK4 step; returns the classicality diag."""
        k1, k2, k3, k4 = self.k
        stage = self.stage
        diag = self.rhs(v, t, k1, want_diag=True)
        np.multiply(k1, 0.5 * dt, out=stage)
        stage += v
        stage[0] = 0.0
        stage[-1] = 0.0
        self.rhs(stage, t + 0.5 * dt, k2)
        np.multiply(k2, 0.5 * dt, out=stage)
        stage += v
        stage[0] = 0.0
        stage[-1] = 0.0
        self.rhs(stage, t + 0.5 * dt, k3)
        np.multiply(k3, dt, out=stage)
        stage += v
        stage[0] = 0.0
        stage[-1] = 0.0
        self.rhs(stage, t + dt, k4)
        np.add(k2, k3, out=k2)
        k2 *= 2.0
        np.add(k1, k4, out=k1)
        k1 += k2
        k1 *= dt / 6.0
        v += k1
        v[0] = 0.0
        v[-1] = 0.0
        return diag

    def norm(self, v: np.ndarray) -> float:
        amp = np.abs(v, out=self.amp)
        amp *= amp
        return trapezoid(amp, self.dx)


def rhs(psi: ComplexField, t: float, params: SimParams) -> ComplexField:
    """Time derivative dpsi/dt of the transition equation at time t."""
    stepper = _Stepper(psi.grid, params)
    out = np.empty(psi.grid.n_points, dtype=np.complex128)
    stepper.rhs(np.array(psi.values), t, out)
    return ComplexField(grid=psi.grid, values=out)


def step(psi: ComplexField, t: float, dt: float, params: SimParams) -> ComplexField:
    """One RK4 step of size dt; aborts if the norm moves by more than 0.1%."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    stepper = _Stepper(psi.grid, params)
    v = np.array(psi.values)
    n0 = stepper.norm(v)
    stepper.rk4_step(v, t, dt)
    n1 = stepper.norm(v)
    if not math.isfinite(n1) or (n0 > 0.0 and abs(n1 / n0 - 1.0) > _NORM_ABORT_REL):
        raise SolverFailure(
            f"instability detected: norm moved from {n0:.6e} to {n1:.6e} in one step",
            step_index=0,
            time=t,
        )
    return ComplexField(grid=psi.grid, values=v)


def evolve(config: SolverConfig, psi0: ComplexField) -> RunResult:
    """Integrate psi0 to t_final, landing exactly on every snapshot time.

    The step is stability_dt, shortened so snapshot times and t_final are
    hit exactly.  Never renormalizes; a per-step norm check against the
    initial norm aborts with SolverFailure on instability or NaN.
    """
    if psi0.grid != config.grid:
        raise ValueError("psi0 grid does not match solver grid")
    params = config.params
    stepper = _Stepper(config.grid, params)
    v = np.array(psi0.values)
    dt_nom = stability_dt(params, config.grid)

    wanted = list(config.snapshot_times)
    events = sorted(set(wanted) | {config.t_final})
    snapshots: list[tuple[float, ComplexField]] = []
    if wanted and wanted[0] == 0.0:
        snapshots.append((0.0, ComplexField(grid=config.grid, values=v)))
        events = [e for e in events if e > 0.0]
    else:
        events = [e for e in events if e > 0.0]

    n0 = stepper.norm(v)
    norm_series = [(0.0, n0)]
    t = 0.0
    steps = 0
    max_term = 0.0
    for event in events:
        while t < event:
            remaining = event - t
            if remaining <= dt_nom * (1.0 + 1e-12):
                dt = remaining
                t_new = event
            else:
                dt = dt_nom
                t_new = t + dt_nom
            diag = stepper.rk4_step(v, t, dt)
            steps += 1
            if diag > max_term:
                max_term = diag
            nrm = stepper.norm(v)
            norm_series.append((t_new, nrm))
            if not math.isfinite(nrm) or (n0 > 0.0 and abs(nrm / n0 - 1.0) > _NORM_ABORT_REL):
                raise SolverFailure(
                    f"instability detected at t = {t_new:.6e} (step {steps}): "
                    f"norm {nrm:.6e} vs initial {n0:.6e}",
                    step_index=steps,
                    time=t_new,
                )
            t = t_new
        if event in wanted:
            snapshots.append((event, ComplexField(grid=config.grid, values=v)))

    return RunResult(
        snapshots=tuple(snapshots),
        norm_series=np.array(norm_series),
        dt_used=dt_nom,
        steps_taken=steps,
        max_classicality_term=max_term,
    )
