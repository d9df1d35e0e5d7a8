"""Grids, complex envelope fields, Hermite polynomials and moment observables.

Everything downstream (mode builders, propagators, overlap integrals) works on
uniform 1-D grids in the dimensionless coordinate tau, with composite-trapezoid
quadrature.  All containers are immutable after construction and all operations
are pure functions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import AccuracyWarning, FieldError, GridMismatchError

HERMITE_DEFAULT_CAP = 64


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [tau_min, tau_max] with n_points samples (endpoints included)."""

    tau_min: float
    tau_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 8:
            raise ValueError(f"grid needs at least 8 points, got {self.n_points}")
        if not self.tau_max > self.tau_min:
            raise ValueError(f"need tau_max > tau_min, got [{self.tau_min}, {self.tau_max}]")

    @property
    def d_tau(self) -> float:
        return (self.tau_max - self.tau_min) / (self.n_points - 1)

    @cached_property
    def points(self) -> np.ndarray:
        return np.linspace(self.tau_min, self.tau_max, self.n_points)


@dataclass(frozen=True)
class ComplexField:
    """Complex amplitude psi(tau) sampled on a Grid1D.  Treat values as read-only."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != (self.grid.n_points,):
            raise FieldError(
                f"values shape {values.shape} does not match grid ({self.grid.n_points},)")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: Grid1D, fn) -> "ComplexField":
        return cls(grid, np.asarray(fn(grid.points), dtype=np.complex128))

    def abs2(self) -> np.ndarray:
        return np.abs(self.values) ** 2


@dataclass(frozen=True)
class MomentSet:
    """Central first/second moments of a field in tau and conjugate momentum p = -i d/dtau."""

    mean_tau: float
    mean_p: float
    sigma: float
    sigma_p: float
    cross: float  # <(tau p + p tau)/2> - <tau><p>


def trapezoid(samples: np.ndarray, dx: float) -> complex | float:
    """Composite trapezoid integral of uniformly sampled values."""
    return (samples.sum() - 0.5 * (samples[0] + samples[-1])) * dx


def trapezoid2d(samples: np.ndarray, dx: float, dy: float):
    """Composite trapezoid over a 2-D table sampled on a uniform rectangle."""
    w0 = np.ones(samples.shape[0])
    w1 = np.ones(samples.shape[1])
    w0[[0, -1]] = 0.5
    w1[[0, -1]] = 0.5
    return w0 @ samples @ w1 * dx * dy


def derivative(values: np.ndarray, dx: float) -> np.ndarray:
    """First derivative, 4th-order central stencils inside, one-sided at the edges."""
    f = np.asarray(values)
    out = np.empty_like(f)
    out[2:-2] = (-f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]) / (12.0 * dx)
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * dx)
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * dx)
    out[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * dx)
    out[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * dx)
    return out


def norm(field: ComplexField) -> float:
    """sqrt( integral |psi|^2 dtau ) by the trapezoid rule."""
    if not np.all(np.isfinite(field.values.view(np.float64))):
        raise FieldError("field contains non-finite samples")
    return float(np.sqrt(trapezoid(field.abs2(), field.grid.d_tau).real))


def normalize(field: ComplexField) -> ComplexField:
    """Rescale to unit norm.  Raises FieldError on a zero field."""
    n = norm(field)
    if n == 0.0:
        raise FieldError("cannot normalize a zero field")
    return ComplexField(field.grid, field.values / n)


def overlap_inner(a: ComplexField, b: ComplexField) -> complex:
    """Inner product integral a*(tau) b(tau) dtau.  Grids must be identical."""
    if a.grid != b.grid:
        raise GridMismatchError(f"grids differ: {a.grid} vs {b.grid}")
    return complex(trapezoid(np.conj(a.values) * b.values, a.grid.d_tau))


def moments(field: ComplexField) -> MomentSet:
    """Central moments of a normalized field.

    sigma^2   = <tau^2> - <tau>^2
    sigma_p^2 = integral |dpsi/dtau|^2 dtau - <p>^2
    cross     = Im integral psi* tau dpsi/dtau dtau - <tau><p>

    A non-normalized input is normalized internally with a warning.
    """
    n = norm(field)
    if abs(n - 1.0) > 1e-8:
        warnings.warn(f"moments() called on field with norm {n:.6g}; normalizing",
                      AccuracyWarning, stacklevel=2)
        field = normalize(field)
    tau = field.grid.points
    dx = field.grid.d_tau
    rho = field.abs2()
    dpsi = derivative(field.values, dx)

    mean_tau = trapezoid(tau * rho, dx).real
    tau2 = trapezoid(tau**2 * rho, dx).real
    sigma2 = tau2 - mean_tau**2
    sigma = math.sqrt(max(sigma2, 0.0))

    mean_p = trapezoid(np.conj(field.values) * dpsi, dx).imag
    p2 = trapezoid(np.abs(dpsi) ** 2, dx).real
    sigma_p2 = p2 - mean_p**2
    sigma_p = math.sqrt(max(sigma_p2, 0.0))

    cross = trapezoid(np.conj(field.values) * tau * dpsi, dx).imag - mean_tau * mean_p

    if sigma > 0 and sigma / dx < 8:
        warnings.warn(f"fewer than 8 grid points per sigma ({sigma / dx:.2f}); "
                      "moments may be inaccurate", AccuracyWarning, stacklevel=2)
    return MomentSet(mean_tau=mean_tau, mean_p=mean_p, sigma=sigma,
                     sigma_p=sigma_p, cross=float(cross))


def covariance_determinant(m: MomentSet) -> float:
    """sigma_p^2 sigma^2 - cross^2 (invariant 1/4 for any Gaussian, (n+1/2)^2 for mode n)."""
    return m.sigma_p**2 * m.sigma**2 - m.cross**2


def hermite(n: int, x, cap: int = HERMITE_DEFAULT_CAP):
    """Physicists' Hermite polynomial H_n(x) via the three-term recurrence.

    H_{n+1} = 2 x H_n - 2 n H_{n-1}.  Accepts scalars or arrays.  For large n
    prefer hermite_function, which does not overflow.
    """
    if n < 0:
        raise ValueError(f"order must be nonnegative, got {n}")
    if n > cap:
        raise ValueError(f"order {n} above cap {cap}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for m in range(1, n):
        h, h_prev = 2.0 * x * h - 2.0 * m * h_prev, h
    return h if h.ndim else float(h)


def hermite_function(n: int, x):
    """Orthonormal Hermite function h_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)).

    Uses the normalized recurrence h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1},
    which stays O(1) for any order.
    """
    if n < 0:
        raise ValueError(f"order must be nonnegative, got {n}")
    x = np.asarray(x, dtype=float)
    h_prev = np.pi**-0.25 * np.exp(-0.5 * x**2)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = math.sqrt(2.0) * x * h_prev
    for m in range(1, n):
        h, h_prev = math.sqrt(2.0 / (m + 1)) * x * h - math.sqrt(m / (m + 1)) * h_prev, h
    return h if h.ndim else float(h)
