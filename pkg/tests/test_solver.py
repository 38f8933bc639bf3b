"""Time integration: step-size rule, discrete right-hand side, stability
guard, snapshot landing, and accuracy against the closed-form state."""

import numpy as np
import pytest

from qctransition import (
    ComplexField,
    SimParams,
    SolverConfig,
    SolverFailure,
    TwoGaussianConfig,
    density,
    density_at,
    evolve,
    initial_state,
    make_grid,
    rhs,
    stability_dt,
    step,
)

DEFAULT_GRID = make_grid(-80.0, 80.0, 4096)


def two_gaussian(eps, d=3.0):
    return TwoGaussianConfig(d=d, sigma=1.0, params=SimParams(epsilon=eps))


# ---------------------------------------------------------------------------
# stability_dt
# ---------------------------------------------------------------------------


def test_stability_dt_default_grid():
    dt = stability_dt(SimParams(epsilon=1.0, dt_safety=1.0), DEFAULT_GRID)
    assert dt == pytest.approx(0.0015266242372469479, rel=1e-15)
    assert abs(dt - 1.526e-3) < 1e-6


def test_stability_dt_unit_interval():
    dt = stability_dt(SimParams(epsilon=1.0, dt_safety=0.5), make_grid(0.0, 1.0, 11))
    assert dt == pytest.approx(0.005, rel=1e-15)


def test_stability_dt_quarters_when_dx_halves():
    coarse = stability_dt(SimParams(epsilon=1.0), make_grid(-80.0, 80.0, 4096))
    fine = stability_dt(SimParams(epsilon=1.0), make_grid(-80.0, 80.0, 8191))
    assert coarse / fine == pytest.approx(4.0, rel=1e-15)


def test_stability_dt_parameter_scaling():
    g = make_grid(0.0, 1.0, 11)
    base = stability_dt(SimParams(epsilon=1.0), g)
    heavy = stability_dt(SimParams(epsilon=1.0, mass=2.0), g)
    fast = stability_dt(SimParams(epsilon=1.0, hbar=2.0), g)
    assert heavy == pytest.approx(2.0 * base, rel=1e-15)
    assert fast == pytest.approx(0.5 * base, rel=1e-15)


# ---------------------------------------------------------------------------
# rhs
# ---------------------------------------------------------------------------


def test_rhs_plane_wave_dispersion():
    # d psi/dt = -i hbar k^2 / 2m psi for e^{ikx}; second-order stencil
    # error measured 2.1e-6 relative at dx = 0.005
    g = make_grid(-10.0, 10.0, 4001)
    k = 1.0
    psi = ComplexField(grid=g, values=np.exp(1j * k * g.x))
    out = rhs(psi, 0.0, SimParams(epsilon=1.0))
    want = -0.5j * k * k * psi.values
    err = np.abs(out.values[1:-1] - want[1:-1])
    assert np.max(err) / (0.5 * k * k) < 1e-5


def test_rhs_plane_wave_epsilon_independent():
    # constant |psi| kills the nonlinear term at every epsilon
    g = make_grid(-10.0, 10.0, 4001)
    psi = ComplexField(grid=g, values=np.exp(1j * g.x))
    a = rhs(psi, 0.0, SimParams(epsilon=1.0))
    b = rhs(psi, 0.0, SimParams(epsilon=0.3))
    assert np.max(np.abs(a.values - b.values)) < 1e-9


def test_rhs_classical_fixed_point_is_exact():
    # eps = 0 on a real nonnegative field: kinetic and classicality stencils
    # cancel bitwise, so the discrete rhs is identically zero
    g = make_grid(-20.0, 20.0, 513)
    psi = initial_state(two_gaussian(0.0), g)
    out = rhs(psi, 0.0, SimParams(epsilon=0.0))
    assert np.array_equal(out.values, np.zeros(513, dtype=complex))


@pytest.mark.parametrize("eps", [0.0, 0.5, 1.0])
def test_rhs_zero_field(eps):
    g = make_grid(-5.0, 5.0, 101)
    psi = ComplexField(grid=g, values=np.zeros(101, dtype=complex))
    out = rhs(psi, 0.0, SimParams(epsilon=eps))
    assert np.array_equal(out.values, np.zeros(101, dtype=complex))


def test_rhs_linear_limit_matches_independent_stencil():
    g = make_grid(-20.0, 20.0, 513)
    psi = initial_state(two_gaussian(1.0), g)
    out = rhs(psi, 0.0, SimParams(epsilon=1.0))
    v = psi.values
    lap = (v[:-2] - 2.0 * v[1:-1] + v[2:]) / g.dx**2
    want = 0.5j * lap
    scale = np.max(np.abs(want))
    assert np.max(np.abs(out.values[1:-1] - want)) < 5e-13 * scale


def test_rhs_potential_term():
    g = make_grid(-5.0, 5.0, 201)
    psi = ComplexField(grid=g, values=np.exp(-g.x ** 2).astype(complex))
    base = rhs(psi, 0.0, SimParams(epsilon=1.0))
    params_v = SimParams(epsilon=1.0, potential=lambda x, t: 0.5 * x**2)
    with_v = rhs(psi, 0.0, params_v)
    got = with_v.values[1:-1] - base.values[1:-1]
    want = -1j * 0.5 * g.x[1:-1] ** 2 * psi.values[1:-1]
    assert np.max(np.abs(got - want)) < 1e-14


# ---------------------------------------------------------------------------
# step
# ---------------------------------------------------------------------------


def test_step_rejects_bad_dt():
    g = make_grid(-5.0, 5.0, 101)
    psi = ComplexField(grid=g, values=np.ones(101, dtype=complex))
    with pytest.raises(ValueError):
        step(psi, 0.0, 0.0, SimParams(epsilon=1.0))


def test_step_does_not_mutate_input():
    g = make_grid(-20.0, 20.0, 257)
    psi = initial_state(two_gaussian(1.0), g)
    before = psi.values.copy()
    params = SimParams(epsilon=1.0)
    step(psi, 0.0, stability_dt(params, g), params)
    assert np.array_equal(psi.values, before)


def test_step_zero_field_stays_zero():
    g = make_grid(-5.0, 5.0, 101)
    psi = ComplexField(grid=g, values=np.zeros(101, dtype=complex))
    out = step(psi, 0.0, 1e-3, SimParams(epsilon=1.0))
    assert np.array_equal(out.values, np.zeros(101, dtype=complex))


def test_step_above_stability_bound_fails():
    # dt = 1.7 m dx^2 / hbar exceeds the RK4 imaginary-axis limit (~1.41);
    # the norm guard must trip within a few steps
    params = SimParams(epsilon=1.0)
    psi = initial_state(two_gaussian(1.0), DEFAULT_GRID)
    dt = 1.7 * DEFAULT_GRID.dx ** 2
    with pytest.raises(SolverFailure) as excinfo:
        t = 0.0
        for _ in range(100):
            psi = step(psi, t, dt, params)
            t += dt
    assert "instability" in str(excinfo.value)
    assert "norm moved" in str(excinfo.value)


# ---------------------------------------------------------------------------
# SolverConfig / evolve
# ---------------------------------------------------------------------------


def test_config_validation():
    g = make_grid(-20.0, 20.0, 257)
    p = SimParams(epsilon=1.0)
    with pytest.raises(ValueError, match="t_final"):
        SolverConfig(params=p, grid=g, t_final=0.0)
    with pytest.raises(ValueError, match="snapshot"):
        SolverConfig(params=p, grid=g, t_final=1.0, snapshot_times=(2.0,))
    with pytest.raises(ValueError, match="snapshot"):
        SolverConfig(params=p, grid=g, t_final=1.0, snapshot_times=(-0.1,))


def test_config_normalizes_snapshot_times():
    g = make_grid(-20.0, 20.0, 257)
    cfg = SolverConfig(
        params=SimParams(epsilon=1.0),
        grid=g,
        t_final=1.0,
        snapshot_times=(0.5, 0.5, 0.2),
    )
    assert cfg.snapshot_times == (0.2, 0.5)
    assert SolverConfig(params=SimParams(epsilon=1.0), grid=g, t_final=1.0).snapshot_times == (1.0,)


def test_evolve_rejects_grid_mismatch():
    g = make_grid(-20.0, 20.0, 257)
    other = make_grid(-20.0, 20.0, 258)
    psi = ComplexField(grid=other, values=np.ones(258, dtype=complex))
    cfg = SolverConfig(params=SimParams(epsilon=1.0), grid=g, t_final=1.0)
    with pytest.raises(ValueError, match="grid"):
        evolve(cfg, psi)


def test_evolve_lands_exactly_on_snapshot_times():
    g = make_grid(-20.0, 20.0, 257)
    cfg = two_gaussian(1.0)
    psi0 = initial_state(cfg, g)
    times = (0.0, 0.3, 0.7, 1.0)
    run = evolve(
        SolverConfig(params=cfg.params, grid=g, t_final=1.0, snapshot_times=times),
        psi0,
    )
    assert tuple(t for t, _ in run.snapshots) == times
    assert np.array_equal(run.snapshots[0][1].values, psi0.values)
    assert run.dt_used == stability_dt(cfg.params, g)
    assert run.steps_taken > 0
    ts = run.norm_series[:, 0]
    assert np.all(np.diff(ts) > 0)
    assert ts[-1] == 1.0


def test_evolve_single_gaussian_matches_closed_form():
    # d = 0 collapses the superposition to one spreading Gaussian
    g = make_grid(-20.0, 20.0, 2049)
    cfg = two_gaussian(1.0, d=0.0)
    run = evolve(SolverConfig(params=cfg.params, grid=g, t_final=1.0), initial_state(cfg, g))
    rho_sim = density(run.snapshots[-1][1]).rho
    rho_ref = density_at(cfg, 1.0, g).rho
    assert np.max(np.abs(rho_sim - rho_ref)) / rho_ref.max() < 1e-4
    assert run.norm_drift_rel < 1e-10


def test_evolve_preserves_parity():
    g = make_grid(-20.0, 20.0, 513)
    cfg = two_gaussian(1.0)
    run = evolve(SolverConfig(params=cfg.params, grid=g, t_final=2.0), initial_state(cfg, g))
    v = run.snapshots[-1][1].values
    assert np.max(np.abs(v - v[::-1])) < 1e-10 * np.max(np.abs(v))


def test_evolve_norm_drift_small():
    g = make_grid(-16.0, 16.0, 257)
    cfg = two_gaussian(1.0)
    run = evolve(SolverConfig(params=cfg.params, grid=g, t_final=5.0), initial_state(cfg, g))
    assert run.norm_drift_rel < 1e-12  # measured 7.1e-14


def test_evolve_classicality_diagnostic():
    g = make_grid(-20.0, 20.0, 513)
    quantum = two_gaussian(1.0)
    mixed = two_gaussian(0.2)
    run_q = evolve(SolverConfig(params=quantum.params, grid=g, t_final=0.5), initial_state(quantum, g))
    run_m = evolve(SolverConfig(params=mixed.params, grid=g, t_final=0.5), initial_state(mixed, g))
    assert run_q.max_classicality_term == 0.0
    assert run_m.max_classicality_term > 0.0


def test_evolve_transition_regime_tracks_closed_form():
    g = make_grid(-20.0, 20.0, 513)
    cfg = two_gaussian(0.2)
    run = evolve(SolverConfig(params=cfg.params, grid=g, t_final=2.0), initial_state(cfg, g))
    rho_sim = density(run.snapshots[-1][1]).rho
    rho_ref = density_at(cfg, 2.0, g).rho
    assert np.max(np.abs(rho_sim - rho_ref)) / rho_ref.max() < 2e-3
