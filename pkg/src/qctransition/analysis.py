"""Comparison metrics and composed experiments (sweeps, convergence, retardation).

All routines compare simulated densities against the closed-form reference
on the same grid.  The headline experiment is the two-slit-style pattern of
two Gaussian packets released at +-3 sigma and observed at t = 20 m sigma^2
/ hbar for a ladder of epsilon values.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .analytic import (
    TwoGaussianConfig,
    analytic_visibility,
    density_at,
    initial_state,
    visibility_from_samples,
)
from .solver import RunResult, SolverConfig, SolverFailure, evolve
from .wavefield import (
    DensityProfile,
    Grid1D,
    Provenance,
    SimParams,
    density,
    make_grid,
    trapezoid,
)


@dataclass(frozen=True)
class ExperimentSetup:
    """Grid, horizon and physical scales of one interference experiment."""

    d_over_sigma: float = 3.0
    sigma: float = 1.0
    mass: float = 1.0
    hbar: float = 1.0
    extent_over_sigma: float = 80.0
    n_points: int = 4096
    t_final: float = 20.0
    dt_safety: float = 0.5
    amp_floor_rel: float = 1e-8

    @property
    def d(self) -> float:
        return self.d_over_sigma * self.sigma

    def grid(self) -> Grid1D:
        half = self.extent_over_sigma * self.sigma
        return make_grid(-half, half, self.n_points)

    def sim_params(self, epsilon: float) -> SimParams:
        return SimParams(
            epsilon=epsilon,
            mass=self.mass,
            hbar=self.hbar,
            dt_safety=self.dt_safety,
            amp_floor_rel=self.amp_floor_rel,
        )

    def two_gaussian(self, epsilon: float) -> TwoGaussianConfig:
        return TwoGaussianConfig(d=self.d, sigma=self.sigma, params=self.sim_params(epsilon))


@dataclass(frozen=True)
class ComparisonReport:
    """Simulated-vs-reference summary for one run at one time."""

    epsilon: float
    time: float
    linf_error_rel_peak: float
    l2_error: float
    visibility_sim: float
    visibility_analytic: float
    norm_drift_rel: float
    dt_used: float
    steps_taken: int
    grid: Grid1D


def linf_error(sim: DensityProfile, ref: DensityProfile) -> float:
    """max|sim - ref| / max(ref): worst pointwise error relative to the peak."""
    if sim.grid != ref.grid:
        raise ValueError("profiles live on different grids")
    peak = float(ref.rho.max())
    if peak == 0.0:
        raise ValueError("reference density is identically zero")
    return float(np.max(np.abs(sim.rho - ref.rho))) / peak


def l2_error(sim: DensityProfile, ref: DensityProfile) -> float:
    """Trapezoid L2 distance between two densities on a common grid."""
    if sim.grid != ref.grid:
        raise ValueError("profiles live on different grids")
    diff = (sim.rho - ref.rho) ** 2
    return math.sqrt(max(trapezoid(diff, sim.grid.dx), 0.0))


def measured_visibility(profile: DensityProfile) -> float:
    """Fringe visibility of a sampled profile (parabolic-refined extrema)."""
    return visibility_from_samples(profile.grid.x, profile.rho).value


@dataclass(frozen=True)
class PanelResult:
    """One epsilon panel: run output plus the comparison against the reference."""

    epsilon: float
    run: RunResult
    sim_density: DensityProfile
    ref_density: DensityProfile
    report: ComparisonReport


def reference_density(
    config: TwoGaussianConfig, t: float, grid: Grid1D
) -> DensityProfile:
    """Closed-form reference at time t; at eps = 0 this is the frozen initial
    density (the classical profile never moves)."""
    prof = density_at(config, t, grid)
    if config.params.hbar_scaled == 0.0:
        return replace(prof, provenance=Provenance.INITIAL)
    return prof


def simulate_panel(
    setup: ExperimentSetup,
    epsilon: float,
    snapshot_times: tuple[float, ...] | None = None,
) -> PanelResult:
    """Run one epsilon from the two-Gaussian initial state to t_final.

    Extra snapshot times may be requested; the final time is always
    recorded, and the comparison report always refers to it.
    """
    config = setup.two_gaussian(epsilon)
    grid = setup.grid()
    psi0 = initial_state(config, grid)
    wanted = (setup.t_final,)
    if snapshot_times is not None:
        wanted = tuple(sorted(set(snapshot_times) | {setup.t_final}))
    run = evolve(
        SolverConfig(
            params=config.params,
            grid=grid,
            t_final=setup.t_final,
            snapshot_times=wanted,
        ),
        psi0,
    )
    t, field = run.snapshots[-1]
    sim = density(field, time=t, epsilon=epsilon, provenance=Provenance.SIMULATED)
    ref = reference_density(config, t, grid)
    report = ComparisonReport(
        epsilon=epsilon,
        time=t,
        linf_error_rel_peak=linf_error(sim, ref),
        l2_error=l2_error(sim, ref),
        visibility_sim=measured_visibility(sim),
        visibility_analytic=analytic_visibility(config, t),
        norm_drift_rel=run.norm_drift_rel,
        dt_used=run.dt_used,
        steps_taken=run.steps_taken,
        grid=grid,
    )
    return PanelResult(epsilon=epsilon, run=run, sim_density=sim, ref_density=ref, report=report)


@dataclass(frozen=True)
class SweepItem:
    """Outcome of one sweep entry: a panel or a recorded failure."""

    epsilon: float
    panel: PanelResult | None
    error: str | None

    @property
    def ok(self) -> bool:
        return self.panel is not None


def _sweep_worker(
    args: tuple[ExperimentSetup, float, tuple[float, ...] | None]
) -> SweepItem:
    setup, eps, snapshot_times = args
    try:
        panel = simulate_panel(setup, eps, snapshot_times)
        return SweepItem(epsilon=eps, panel=panel, error=None)
    except (SolverFailure, ValueError) as exc:
        return SweepItem(epsilon=eps, panel=None, error=str(exc))


def epsilon_sweep(
    eps_list: list[float],
    setup: ExperimentSetup,
    workers: int = 1,
    snapshot_times: tuple[float, ...] | None = None,
) -> list[SweepItem]:
    """Run simulate_panel for each epsilon; failures are recorded, not raised.

    With workers > 1 the panels run in separate processes.  Results come
    back in eps_list order either way.
    """
    jobs = [(setup, float(e), snapshot_times) for e in eps_list]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            return list(pool.map(_sweep_worker, jobs))
    return [_sweep_worker(job) for job in jobs]


@dataclass(frozen=True)
class ConvergenceLevel:
    n_points: int
    dx: float
    dt_used: float
    linf_error_rel_peak: float


@dataclass(frozen=True)
class ConvergenceStudy:
    levels: tuple[ConvergenceLevel, ...]
    orders: tuple[float, ...]
    monotone: bool


def convergence_orders(errors: list[float]) -> tuple[tuple[float, ...], bool]:
    """Observed orders log2(e_k / e_{k+1}) and a strict-decrease flag.

    Repeated or growing errors give order <= 0 and monotone = False rather
    than an exception, so degenerate studies are flagged, not hidden.
    """
    orders = []
    for a, b in zip(errors, errors[1:]):
        if a <= 0.0 or b <= 0.0:
            orders.append(math.nan)
        else:
            orders.append(math.log2(a / b))
    monotone = all(b < a for a, b in zip(errors, errors[1:]))
    return tuple(orders), monotone


def convergence_study(
    setup: ExperimentSetup, epsilon: float = 1.0, levels: int = 3
) -> ConvergenceStudy:
    """Repeat the experiment on dx-halved grids and report observed orders.

    Each level doubles the interval count (n -> 2n - 1), which halves dx
    exactly; dt follows the stability rule, so it quarters.  Errors are the
    L-infinity density error against the closed form at t_final.
    """
    if levels < 3:
        raise ValueError("need at least 3 refinement levels")
    rows = []
    n = setup.n_points
    for _ in range(levels):
        level_setup = replace(setup, n_points=n)
        panel = simulate_panel(level_setup, epsilon)
        rows.append(
            ConvergenceLevel(
                n_points=n,
                dx=level_setup.grid().dx,
                dt_used=panel.run.dt_used,
                linf_error_rel_peak=panel.report.linf_error_rel_peak,
            )
        )
        n = 2 * (n - 1) + 1
    orders, monotone = convergence_orders([r.linf_error_rel_peak for r in rows])
    return ConvergenceStudy(levels=tuple(rows), orders=orders, monotone=monotone)


RETARDATION_NEVER = math.inf


def retardation_curve(
    epsilon: float,
    visibility_target: float,
    *,
    d: float = 3.0,
    sigma: float = 1.0,
    mass: float = 1.0,
    hbar: float = 1.0,
) -> float:
    """Earliest time at which the closed-form visibility reaches the target.

    Found by bisection on the dense-sampled visibility, which is
    nondecreasing in time once fringes have formed.  Classical dynamics
    (eps = 0) never forms fringes: returns RETARDATION_NEVER (inf).  The
    curve obeys t(eps) = t(1) / sqrt(eps).
    """
    if not 0.0 < visibility_target < 1.0:
        raise ValueError("visibility_target must lie strictly between 0 and 1")
    params = SimParams(epsilon=epsilon, mass=mass, hbar=hbar)
    if epsilon == 0.0:
        return RETARDATION_NEVER
    config = TwoGaussianConfig(d=d, sigma=sigma, params=params)
    t_unit = mass * sigma * sigma / params.hbar_scaled
    t_lo = 0.0
    t_hi = t_unit
    for _ in range(200):
        if analytic_visibility(config, t_hi) >= visibility_target:
            break
        t_lo = t_hi
        t_hi *= 2.0
    else:
        raise RuntimeError(f"visibility target {visibility_target} not reached")
    while t_hi - t_lo > 1e-9 * t_hi:
        mid = 0.5 * (t_lo + t_hi)
        if analytic_visibility(config, mid) >= visibility_target:
            t_hi = mid
        else:
            t_lo = mid
    return t_hi
