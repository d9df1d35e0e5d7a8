"""Hermite-Gauss modes of the quadratic-index line and their width dynamics.

With U(tau) = k tau^2 / 2 the envelope equation admits the mode family

    psi_n(tau, s) = (2 sigma^2)^{-1/4} h_n(tau / (sqrt(2) sigma))
                    * exp( i (sigma'/sigma) tau^2 / 2 + i (1+2n) phi )

where h_n is the orthonormal Hermite function and the width sigma(s) obeys

    sigma'' = -k sigma + 1/(4 sigma^3),        phi' = -1/(4 sigma^2).

The equilibrium width sigma0^2 = 1/(2 sqrt(k)) freezes the family into the
stationary modes with energies (n + 1/2) sqrt(k) and phase phi0(s) = -sqrt(k) s/2.
The phase rate above is the one consistent with the propagation equation (the
evolved modes solve it exactly); see tests/test_harmonic_modes.py for the
numerical check pinning this reading down.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyWarning, DomainError
from .fields import ComplexField, Grid1D, covariance_determinant, hermite_function, moments

MODE_TAIL_TOLERANCE = 1e-10


@dataclass(frozen=True)
class EnvelopeState:
    """Instantaneous width/phase state (sigma, dsigma/ds, phi) in a trap of strength k."""

    sigma: float
    sigma_prime: float = 0.0
    phi: float = 0.0
    k: float = 1.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise DomainError(f"need sigma > 0, got {self.sigma}")
        if self.k <= 0:
            raise DomainError(f"need k > 0, got {self.k}")

    @property
    def energy(self) -> float:
        """Conserved envelope energy sigma'^2/2 + k sigma^2/2 + 1/(8 sigma^2)."""
        return 0.5 * self.sigma_prime**2 + 0.5 * self.k * self.sigma**2 \
            + 1.0 / (8.0 * self.sigma**2)

    @property
    def inv_rho(self) -> float:
        """Chirp rate sigma'/sigma (finite everywhere)."""
        return self.sigma_prime / self.sigma

    @property
    def rho(self) -> float:
        """Chirp radius sigma/sigma'; +-inf at turning points where sigma' = 0."""
        if self.sigma_prime == 0.0:
            return math.inf
        return self.sigma / self.sigma_prime


@dataclass(frozen=True)
class EnvelopeTrajectory:
    """Sampled solution of the width ODE."""

    s: np.ndarray
    sigma: np.ndarray
    sigma_prime: np.ndarray
    phi: np.ndarray
    k: float

    @property
    def inv_rho(self) -> np.ndarray:
        return self.sigma_prime / self.sigma

    @property
    def rho(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.where(self.sigma_prime == 0.0, np.inf, self.sigma / self.sigma_prime)

    def state_at(self, index: int) -> EnvelopeState:
        return EnvelopeState(sigma=float(self.sigma[index]),
                             sigma_prime=float(self.sigma_prime[index]),
                             phi=float(self.phi[index]), k=self.k)


def equilibrium_sigma(k: float) -> float:
    """Matched width sigma0 = (1/(2 sqrt(k)))^(1/2)."""
    if k <= 0:
        raise DomainError(f"need k > 0, got {k}")
    return (0.5 / math.sqrt(k)) ** 0.5


def energy_level(n: int, k: float) -> float:
    """(n + 1/2) sqrt(k)."""
    if k <= 0:
        raise DomainError(f"need k > 0, got {k}")
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    return (n + 0.5) * math.sqrt(k)


def phase_rate(sigma: float) -> float:
    """d phi / d s = -1/(4 sigma^2); equals -sqrt(k)/2 at the matched width."""
    return -1.0 / (4.0 * sigma**2)


def envelope_ode_solve(initial: EnvelopeState, s_end: float,
                       ds: float | None = None) -> EnvelopeTrajectory:
    """Fixed-step RK4 integration of the width ODE from s = 0 to s_end.

    Default step is one thousandth of the small-oscillation period pi/sqrt(k).
    """
    if s_end <= 0:
        raise DomainError(f"need s_end > 0, got {s_end}")
    k = initial.k
    if ds is None:
        ds = math.pi / math.sqrt(k) / 1000.0
    n_steps = max(1, int(round(s_end / ds)))
    ds = s_end / n_steps

    def rhs(sig, sig_p):
        return sig_p, -k * sig + 0.25 / sig**3, -0.25 / sig**2

    sig, sig_p, phi = initial.sigma, initial.sigma_prime, initial.phi
    out = np.empty((n_steps + 1, 3))
    out[0] = (sig, sig_p, phi)
    for i in range(n_steps):
        a1, b1, c1 = rhs(sig, sig_p)
        a2, b2, c2 = rhs(sig + 0.5 * ds * a1, sig_p + 0.5 * ds * b1)
        a3, b3, c3 = rhs(sig + 0.5 * ds * a2, sig_p + 0.5 * ds * b2)
        a4, b4, c4 = rhs(sig + ds * a3, sig_p + ds * b3)
        sig += ds / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        sig_p += ds / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        phi += ds / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
        if sig <= 0:
            raise DomainError(f"sigma reached {sig} at step {i + 1}; reduce ds")
        out[i + 1] = (sig, sig_p, phi)
    s = np.linspace(0.0, s_end, n_steps + 1)
    return EnvelopeTrajectory(s=s, sigma=out[:, 0], sigma_prime=out[:, 1],
                              phi=out[:, 2], k=k)


def hermite_gauss_mode(n: int, env: EnvelopeState, grid: Grid1D) -> ComplexField:
    """Mode n of the family parametrized by env, sampled on grid (unit norm)."""
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    tau = grid.points
    sigma = env.sigma
    u = tau / (math.sqrt(2.0) * sigma)
    amplitude = (2.0 * sigma**2) ** -0.25 * hermite_function(n, u)
    phase = 0.5 * env.inv_rho * tau**2 + (1 + 2 * n) * env.phi
    values = amplitude * np.exp(1j * phase)
    edge = max(abs(values[0]), abs(values[-1]))
    if edge > MODE_TAIL_TOLERANCE:
        warnings.warn(f"mode {n} tail {edge:.2g} at the grid boundary exceeds "
                      f"{MODE_TAIL_TOLERANCE}; enlarge the grid", AccuracyWarning,
                      stacklevel=2)
    return ComplexField(grid, values)


def stationary_mode(n: int, k: float, s: float, grid: Grid1D) -> ComplexField:
    """Eigenmode n at the matched width, with phase phi0(s) = -sqrt(k) s / 2."""
    env = EnvelopeState(sigma=equilibrium_sigma(k), sigma_prime=0.0,
                        phi=-0.5 * math.sqrt(k) * s, k=k)
    return hermite_gauss_mode(n, env, grid)


def displaced_ground_state(env: EnvelopeState, grid: Grid1D,
                           shift: float = 0.0, momentum: float = 0.0) -> ComplexField:
    """Ground mode translated in tau and boosted in momentum: psi0(tau-a) e^{i b tau}."""
    shifted = Grid1D(grid.tau_min - shift, grid.tau_max - shift, grid.n_points)
    base = hermite_gauss_mode(0, env, shifted)
    return ComplexField(grid, base.values * np.exp(1j * momentum * grid.points))


def _mode_grid(env: EnvelopeState, n: int = 0) -> Grid1D:
    # extent: Gaussian tails below 1e-12 plus room for the Hermite spread;
    # spacing: resolve both the width and the chirp oscillation at the edge
    half = (8.0 + math.sqrt(2.0 * n + 1.0) * 2.0) * env.sigma
    k_chirp = abs(env.inv_rho) * half
    d_tau = min(env.sigma / 400.0, 0.3 / max(k_chirp, 1e-12))
    n_points = int(2 * half / d_tau) + 1
    return Grid1D(-half, half, n_points)


def minimum_uncertainty_check(env: EnvelopeState,
                              tol: float = 1e-6) -> tuple[float, bool]:
    """Width-momentum product sigma sigma_p of the n=0 mode built from env.

    Returns (product, product == 1/2 within tol).  The product is 1/2 exactly
    only at a turning point; the covariance determinant stays 1/4 regardless.
    """
    field = hermite_gauss_mode(0, env, _mode_grid(env))
    m = moments(field)
    product = m.sigma * m.sigma_p
    return product, abs(product - 0.5) <= tol


def mode_covariance_determinant(n: int, env: EnvelopeState) -> float:
    """Quadrature covariance determinant of mode n; analytically (n + 1/2)^2."""
    field = hermite_gauss_mode(n, env, _mode_grid(env, n))
    return covariance_determinant(moments(field))
