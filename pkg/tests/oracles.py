"""Independent reference implementations used to freeze expected test values.

Nothing in here imports qline: every function is a separate route to the same
physics (explicit formulas, brute-force quadrature, shooting integration),
kept deliberately dumb so disagreements point at the production code.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import eval_hermite


def hermite_explicit(n: int, x: float) -> float:
    """H_n(x) by the explicit coefficient sum (exact integers until evaluation)."""
    total = 0.0
    for m in range(n // 2 + 1):
        coeff = ((-1) ** m * math.factorial(n)
                 // (math.factorial(m) * math.factorial(n - 2 * m)))
        total += coeff * (2.0 * x) ** (n - 2 * m)
    return total


def gaussian_overlap(sigma_a: float, sigma_b: float) -> float:
    """<a|b> of two centered unit-norm Gaussians with r.m.s. widths sigma_a/b."""
    return math.sqrt(2.0 * sigma_a * sigma_b / (sigma_a**2 + sigma_b**2))


def harmonic_mode(n: int, omega: float, tau: np.ndarray) -> np.ndarray:
    """Eigenmode n of -(1/2) d^2/dtau^2 + omega^2 tau^2 / 2 via scipy Hermite."""
    xi = math.sqrt(omega) * tau
    norm_const = (omega / math.pi) ** 0.25 / math.sqrt(2.0**n * math.factorial(n))
    return norm_const * eval_hermite(n, xi) * np.exp(-0.5 * xi**2)


def quadrature_moments(psi: np.ndarray, tau: np.ndarray):
    """(sigma2, sigma_p2, cross) by plain numpy trapezoid + gradient (central moments)."""
    dx = tau[1] - tau[0]
    rho = np.abs(psi) ** 2
    dpsi = np.gradient(psi, dx, edge_order=2)
    mean_tau = np.trapezoid(tau * rho, dx=dx)
    mean_p = np.trapezoid(np.conj(psi) * dpsi, dx=dx).imag
    sigma2 = np.trapezoid(tau**2 * rho, dx=dx) - mean_tau**2
    sigma_p2 = np.trapezoid(np.abs(dpsi) ** 2, dx=dx) - mean_p**2
    cross = np.trapezoid(np.conj(psi) * tau * dpsi, dx=dx).imag - mean_tau * mean_p
    return sigma2, sigma_p2, cross


def free_spread_sigma2(sigma0: float, s: float, n0: float = 1.0) -> float:
    """Width law of a chirp-free Gaussian spreading with no potential."""
    return sigma0**2 + s**2 / (4.0 * sigma0**2 * n0**4)


def breathing_turning_points(sigma0: float, sigma_prime0: float, k: float):
    """Both roots sigma^2 of the conserved width-ODE energy (turning points)."""
    e_env = 0.5 * sigma_prime0**2 + 0.5 * k * sigma0**2 + 1.0 / (8.0 * sigma0**2)
    # sigma' = 0:  4 k sigma^4 - 8 E sigma^2 + 1 = 0
    roots = np.roots([4.0 * k, -8.0 * e_env, 1.0])
    return tuple(sorted(math.sqrt(r) for r in roots.real))


def rectangular_well_transmission(energy: float, depth: float, width: float,
                                  mass: float = 1.0) -> float:
    """Closed-form T for a rectangular well of the given depth (E > 0)."""
    kin = math.sqrt(2.0 * mass * (energy + depth))
    return 1.0 / (1.0 + depth**2 * math.sin(kin * width) ** 2
                  / (4.0 * energy * (energy + depth)))


def shooting_transmission(u_of_x, x_left: float, x_right: float, energy: float,
                          mass: float = 1.0, n_steps: int = 40000) -> float:
    """T by integrating psi'' = 2 m (u - E) psi from the right with unit outgoing wave.

    The potential must vanish outside [x_left, x_right].
    """
    kappa = math.sqrt(2.0 * mass * energy)

    def rhs(x, y):
        return np.array([y[1], 2.0 * mass * (u_of_x(x) - energy) * y[0]])

    h = (x_left - x_right) / n_steps  # negative: integrate leftwards
    y = np.array([1.0 + 0.0j, 1j * kappa])  # psi, psi' of e^{i kappa x} at x_right (phase ref 0)
    x = x_right
    for _ in range(n_steps):
        k1 = rhs(x, y)
        k2 = rhs(x + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(x + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(x + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        x += h
    psi, dpsi = y
    a_in = 0.5 * (psi + dpsi / (1j * kappa))   # incident amplitude at x_left
    return 1.0 / abs(a_in) ** 2


def epsilon_after_jump(omega1: float, omega2: float, t_jump: float, t):
    """Piecewise-analytic eps(t) for a sudden frequency change at t_jump.

    Matches eps = e^{i omega1 t} (eps(0)=1, eps'(0)=i requires omega1 = 1)
    continuously in value and slope at the jump.
    """
    t = np.asarray(t, dtype=float)
    e_jump = np.exp(1j * omega1 * t_jump)
    alpha = 0.5 * (1.0 + omega1 / omega2) * e_jump
    beta = 0.5 * (1.0 - omega1 / omega2) * e_jump
    after = alpha * np.exp(1j * omega2 * (t - t_jump)) \
        + beta * np.exp(-1j * omega2 * (t - t_jump))
    return np.where(t < t_jump, np.exp(1j * omega1 * t), after)


def ground_jump_populations(omega1: float, omega2: float, m_max: int):
    """|<m, omega2 | 0, omega1>|^2 closed form (even m only)."""
    base = 2.0 * math.sqrt(omega1 * omega2) / (omega1 + omega2)
    ratio = (omega2 - omega1) / (omega1 + omega2)
    pops = np.zeros(m_max + 1)
    for j in range(m_max // 2 + 1):
        pops[2 * j] = base * math.factorial(2 * j) \
            / (4.0**j * math.factorial(j) ** 2) * ratio ** (2 * j)
    return pops


def wigner_gaussian(q, p, omega: float = 1.0):
    """Wigner table of the harmonic ground state in the prefactor-free convention."""
    return 2.0 * np.exp(-omega * np.asarray(q)[:, None] ** 2
                        - np.asarray(p)[None, :] ** 2 / omega)


def damped_wave_rates(l0: float, r0: float):
    """Amplitude decay rates of the damped wave equation: (k = 0 mode, k != 0 modes)."""
    return r0 / l0, r0 / (2.0 * l0)
