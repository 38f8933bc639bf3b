"""Core value types for 1-D wavefunction data on uniform grids.

Everything downstream (Madelung decomposition, closed-form states, the
finite-difference solver) works in terms of these types.  Units are
natural: hbar = m = sigma = 1 unless a caller says otherwise.

The degree-of-quantumness parameter epsilon in [0, 1] selects the dynamics:
epsilon = 1 is ordinary quantum mechanics, epsilon = 0 the classical limit.
The equivalent linear description uses a rescaled Planck constant
hbar_scaled = hbar * sqrt(epsilon).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class Provenance(enum.Enum):
    """Where a density profile came from."""

    SIMULATED = "simulated"
    ANALYTIC = "analytic"
    INITIAL = "initial"


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D spatial grid, endpoints included."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 3:
            raise ValueError(f"n_points must be >= 3, got {self.n_points}")
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if self.x_max <= self.x_min:
            raise ValueError(f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)


def make_grid(x_min: float, x_max: float, n_points: int) -> Grid1D:
    """Build a uniform grid; raises ValueError on bad extents or point counts."""
    return Grid1D(x_min=x_min, x_max=x_max, n_points=int(n_points))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ComplexField:
    """A complex wavefunction sampled on a grid.  Immutable once built."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.n_points,):
            raise ValueError(
                f"values shape {v.shape} does not match grid ({self.grid.n_points},)"
            )
        if not np.all(np.isfinite(v.view(np.float64))):
            raise ValueError("field values must be finite (no NaN/Inf)")
        object.__setattr__(self, "values", _readonly(v))


@dataclass(frozen=True)
class PolarField:
    """Madelung form of a wavefunction: amplitude A >= 0 and action S.

    The action is stored unwrapped (continuous along the grid), so
    psi = A * exp(i S / hbar) without branch jumps.
    """

    grid: Grid1D
    amplitude: np.ndarray
    action: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitude, dtype=np.float64)
        s = np.asarray(self.action, dtype=np.float64)
        n = self.grid.n_points
        if a.shape != (n,) or s.shape != (n,):
            raise ValueError("amplitude/action shape does not match grid")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(s))):
            raise ValueError("amplitude/action must be finite")
        if np.any(a < 0.0):
            raise ValueError("amplitude must be non-negative")
        object.__setattr__(self, "amplitude", _readonly(a))
        object.__setattr__(self, "action", _readonly(s))


@dataclass(frozen=True)
class SimParams:
    """Physical and regularization parameters shared across operations.

    epsilon is the degree of quantumness; hbar_scaled = hbar * sqrt(epsilon)
    is the effective Planck constant of the equivalent linear dynamics.
    potential is an optional V(x, t) hook; the interference experiments all
    run free (V = 0).
    """

    epsilon: float
    mass: float = 1.0
    hbar: float = 1.0
    potential: Optional[Callable[[np.ndarray, float], np.ndarray]] = field(
        default=None, compare=False
    )
    dt_safety: float = 0.5
    amp_floor_rel: float = 1e-8

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.mass <= 0.0 or self.hbar <= 0.0:
            raise ValueError("mass and hbar must be positive")
        if not 0.0 < self.dt_safety <= 1.0:
            raise ValueError(f"dt_safety must lie in (0, 1], got {self.dt_safety}")
        if self.amp_floor_rel <= 0.0:
            raise ValueError("amp_floor_rel must be positive")

    @property
    def hbar_scaled(self) -> float:
        return self.hbar * math.sqrt(self.epsilon)


@dataclass(frozen=True)
class DensityProfile:
    """A probability density |psi|^2 on a grid, tagged with its origin."""

    grid: Grid1D
    rho: np.ndarray
    time: float
    epsilon: float
    provenance: Provenance

    def __post_init__(self):
        r = np.asarray(self.rho, dtype=np.float64)
        if r.shape != (self.grid.n_points,):
            raise ValueError("rho shape does not match grid")
        if not np.all(np.isfinite(r)):
            raise ValueError("rho must be finite")
        if np.any(r < 0.0):
            raise ValueError("rho must be non-negative")
        object.__setattr__(self, "rho", _readonly(r))


def density(
    psi: ComplexField,
    *,
    time: float = 0.0,
    epsilon: float = 0.0,
    provenance: Provenance = Provenance.SIMULATED,
) -> DensityProfile:
    """Pointwise density rho = |psi|^2; metadata supplied by the caller."""
    v = psi.values
    rho = v.real * v.real + v.imag * v.imag
    return DensityProfile(
        grid=psi.grid, rho=rho, time=time, epsilon=epsilon, provenance=provenance
    )


def trapezoid(values: np.ndarray, dx: float) -> float:
    """Composite trapezoid quadrature on a uniform grid."""
    return float(dx * (values.sum() - 0.5 * (values[0] + values[-1])))


def norm(psi: ComplexField) -> float:
    """Trapezoid approximation of integral |psi|^2 dx over the grid."""
    v = psi.values
    rho = v.real * v.real + v.imag * v.imag
    return trapezoid(rho, psi.grid.dx)
