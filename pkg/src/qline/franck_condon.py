"""Mode-transfer overlaps between line sections, Wigner functions, and
parametric excitation under a time-dependent quadratic index.

The energy fraction moved from mode n of one section into mode m of another is
|C_nm|^2 with C_nm = integral psi_n* psi_m dtau.  The same number is the
phase-space overlap of Wigner functions,

    |C_nm|^2 = integral W_n(q, p) W_m(q, p) dq dp / (2 pi),

which holds exactly in the prefactor-free convention used here,

    W(q, p) = integral psi*(q + x/2) psi(q - x/2) e^{i p x} dx

(see docs/wigner_convention.md for the two-line proof).

A time-varying trap frequency omega(t) is handled through the classical
complex amplitude eps(t) solving eps'' + omega^2(t) eps = 0 with eps(0) = 1,
eps'(0) = i; its conserved Wronskian Im(eps' eps*) = 1 keeps the derived mode
family orthonormal at every instant.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import AccuracyWarning, DomainError, GridMismatchError
from .fields import (ComplexField, Grid1D, hermite_function, norm,
                     overlap_inner, trapezoid2d)
from .modes import stationary_mode

WRONSKIAN_TOLERANCE = 1e-8


# ---------------------------------------------------------------------------
# overlap route
# ---------------------------------------------------------------------------

def overlap_coefficient(psi_n: ComplexField, psi_m: ComplexField) -> complex:
    """C_nm = integral psi_n*(tau) psi_m(tau) dtau (both fields unit norm)."""
    return overlap_inner(psi_n, psi_m)


def mode_family(omega: float, n_max: int, grid: Grid1D) -> list[ComplexField]:
    """Eigenmodes 0..n_max of the quadratic-index section with k = omega^2."""
    if omega <= 0:
        raise DomainError(f"need omega > 0, got {omega}")
    return [stationary_mode(n, omega**2, 0.0, grid) for n in range(n_max + 1)]


def overlap_matrix(basis_a: Sequence[ComplexField],
                   basis_b: Sequence[ComplexField]) -> np.ndarray:
    """Matrix C[n, m] of overlaps between two normalized mode families."""
    for which, basis in (("a", basis_a), ("b", basis_b)):
        for n, f in enumerate(basis):
            m = norm(f)
            if abs(m - 1.0) > 1e-6:
                raise DomainError(f"basis_{which}[{n}] has norm {m:.6g}, expected 1")
    out = np.empty((len(basis_a), len(basis_b)), dtype=np.complex128)
    for n, fa in enumerate(basis_a):
        for m, fb in enumerate(basis_b):
            out[n, m] = overlap_coefficient(fa, fb)
    return out


def sudden_jump_populations(omega1: float, omega2: float, n: int,
                            n_max: int, grid: Grid1D | None = None) -> np.ndarray:
    """|C_nm|^2 for m = 0..n_max after an instantaneous frequency jump omega1 -> omega2."""
    if grid is None:
        half = 9.0 * max(1.0 / math.sqrt(2.0 * min(omega1, omega2)), 1.0) \
            * math.sqrt(n_max + 1.0)
        grid = Grid1D(-half, half, int(200 * half) + 1)
    source = mode_family(omega1, n, grid)[n]
    targets = mode_family(omega2, n_max, grid)
    c = np.array([overlap_coefficient(source, t) for t in targets])
    return np.abs(c) ** 2


# ---------------------------------------------------------------------------
# Wigner route
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WignerGrid:
    """Real phase-space table W[q_index, p_index] on a rectangular grid."""

    q_grid: Grid1D
    p_grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.q_grid.n_points, self.p_grid.n_points):
            raise ValueError(f"values shape {values.shape} does not match grids "
                             f"({self.q_grid.n_points}, {self.p_grid.n_points})")
        object.__setattr__(self, "values", values)

    def integral(self) -> float:
        """integral W dq dp (2 pi for a normalized pure state)."""
        return float(trapezoid2d(self.values, self.q_grid.d_tau, self.p_grid.d_tau))


def wigner_transform(psi: ComplexField, p_grid: Grid1D | None = None,
                     q_stride: int = 1) -> WignerGrid:
    """W(q, p) = integral psi*(q + x/2) psi(q - x/2) e^{i p x} dx.

    q runs over psi's own grid (optionally decimated by q_stride); the shift
    x is stepped by 2 d_tau so every sample lands on grid points, with psi
    treated as zero outside its window.  p_grid defaults to the q grid.
    """
    g = psi.grid
    edge = max(abs(psi.values[0]), abs(psi.values[-1]))
    if edge > 1e-10:
        warnings.warn(f"field tail {edge:.2g} at the grid boundary; Wigner "
                      "transform assumes decayed tails", AccuracyWarning, stacklevel=2)
    n = g.n_points
    q_idx = np.arange(0, n, q_stride)
    q_grid = Grid1D(float(g.points[q_idx[0]]), float(g.points[q_idx[-1]]), len(q_idx))
    if p_grid is None:
        p_grid = q_grid

    dx = 2.0 * g.d_tau
    shifts = np.arange(-(n - 1), n)  # x_j = 2 j d_tau
    corr = np.zeros((len(shifts), len(q_idx)), dtype=np.complex128)
    vals = psi.values
    for row, j in enumerate(shifts):
        lo = max(0, j, -j)
        hi = min(n, n + j, n - j)
        if lo >= hi:
            continue
        sel = q_idx[(q_idx >= lo) & (q_idx < hi)]
        cols = np.searchsorted(q_idx, sel)
        corr[row, cols] = np.conj(vals[sel + j]) * vals[sel - j]

    phases = np.exp(1j * np.outer(shifts * dx, p_grid.points))
    w = dx * (corr.T @ phases)
    imag_peak = float(np.max(np.abs(w.imag))) if w.size else 0.0
    scale = max(float(np.max(np.abs(w.real))), 1e-300)
    if imag_peak > 1e-9 * scale:
        warnings.warn(f"Wigner table has stray imaginary part {imag_peak:.2g}",
                      AccuracyWarning, stacklevel=2)
    return WignerGrid(q_grid=q_grid, p_grid=p_grid, values=w.real)


def fc_via_wigner(w_n: WignerGrid, w_m: WignerGrid) -> float:
    """|C_nm|^2 estimate: integral W_n W_m dq dp / (2 pi)."""
    if w_n.q_grid != w_m.q_grid or w_n.p_grid != w_m.p_grid:
        raise GridMismatchError("Wigner tables live on different phase-space grids")
    product = w_n.values * w_m.values
    return float(trapezoid2d(product, w_n.q_grid.d_tau, w_n.p_grid.d_tau)
                 / (2.0 * math.pi))


# ---------------------------------------------------------------------------
# time-dependent frequency: eps(t) and the parametric mode family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OmegaSchedule:
    """Piecewise-smooth frequency program omega(t) with known breakpoints."""

    fn: Callable[[float], float]
    breakpoints: tuple = ()

    def __call__(self, t: float) -> float:
        return float(self.fn(t))

    @classmethod
    def constant(cls, omega: float = 1.0) -> "OmegaSchedule":
        return cls(fn=lambda t: omega)

    @classmethod
    def sudden_jump(cls, omega1: float, omega2: float, t_jump: float) -> "OmegaSchedule":
        return cls(fn=lambda t: omega1 if t < t_jump else omega2,
                   breakpoints=(t_jump,))

    @classmethod
    def smooth_ramp(cls, omega1: float, omega2: float, t_start: float,
                    duration: float) -> "OmegaSchedule":
        """Cosine-smooth ramp from omega1 to omega2 over [t_start, t_start+duration]."""
        def fn(t):
            if t <= t_start:
                return omega1
            if t >= t_start + duration:
                return omega2
            x = (t - t_start) / duration
            return omega1 + (omega2 - omega1) * 0.5 * (1.0 - math.cos(math.pi * x))
        return cls(fn=fn, breakpoints=(t_start, t_start + duration))


@dataclass(frozen=True)
class EpsilonState:
    """Complex oscillator amplitude (eps, eps') at time t under omega_fn.

    The natural initial data eps(0) = 1, eps'(0) = i fixes the conserved
    Wronskian Im(eps' eps*) to 1.
    """

    eps: complex = 1.0 + 0.0j
    eps_dot: complex = 1.0j
    t: float = 0.0
    omega_fn: Callable = OmegaSchedule.constant(1.0)

    @property
    def wronskian(self) -> float:
        return float((self.eps_dot * np.conj(self.eps)).imag)


@dataclass(frozen=True)
class EpsilonTrajectory:
    t: np.ndarray
    eps: np.ndarray
    eps_dot: np.ndarray
    omega_fn: Callable

    @property
    def wronskian(self) -> np.ndarray:
        return (self.eps_dot * np.conj(self.eps)).imag

    def state_at(self, index: int) -> EpsilonState:
        return EpsilonState(eps=complex(self.eps[index]),
                            eps_dot=complex(self.eps_dot[index]),
                            t=float(self.t[index]), omega_fn=self.omega_fn)


def _eps_rhs(t: float, y: np.ndarray, omega_fn) -> np.ndarray:
    return np.array([y[1], -omega_fn(t) ** 2 * y[0]])


def _rk4_span(t0: float, y: np.ndarray, t1: float, dt: float, omega_fn):
    """Fixed-step RK4 over [t0, t1]; yields (t, y) after every step."""
    n = max(1, int(round((t1 - t0) / dt)))
    h = (t1 - t0) / n
    out_t = np.empty(n)
    out_y = np.empty((n, 2), dtype=np.complex128)
    for i in range(n):
        t = t0 + i * h
        k1 = _eps_rhs(t, y, omega_fn)
        k2 = _eps_rhs(t + 0.5 * h, y + 0.5 * h * k1, omega_fn)
        k3 = _eps_rhs(t + 0.5 * h, y + 0.5 * h * k2, omega_fn)
        k4 = _eps_rhs(t + h, y + h * k3, omega_fn)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out_t[i] = t + h
        out_y[i] = y
    return out_t, out_y


def epsilon_evolve(state: EpsilonState, t_end: float,
                   dt: float = 2e-3) -> EpsilonTrajectory:
    """RK4 trajectory of eps from state.t to t_end, splitting at schedule breakpoints."""
    if t_end <= state.t:
        raise DomainError(f"need t_end > {state.t}, got {t_end}")
    breaks = sorted(b for b in getattr(state.omega_fn, "breakpoints", ())
                    if state.t < b < t_end)
    spans = list(zip([state.t, *breaks], [*breaks, t_end]))

    ts = [np.array([state.t])]
    ys = [np.array([[state.eps, state.eps_dot]], dtype=np.complex128)]
    y = ys[0][0]
    for t0, t1 in spans:
        span_t, span_y = _rk4_span(t0, y, t1, dt, state.omega_fn)
        ts.append(span_t)
        ys.append(span_y)
        y = span_y[-1]
    t = np.concatenate(ts)
    yy = np.concatenate(ys)
    return EpsilonTrajectory(t=t, eps=yy[:, 0], eps_dot=yy[:, 1],
                             omega_fn=state.omega_fn)


def parametric_mode(n: int, state: EpsilonState, grid: Grid1D,
                    arg_eps: float | None = None) -> ComplexField:
    """Mode n of the time-dependent-frequency family at the instant of state.

    Writing eps = |eps| e^{i theta},

        psi_n = |eps|^{-1/2} h_n(tau/|eps|)
                * exp( i Re(eps'/eps) tau^2 / 2 - i (n + 1/2) theta )

    where h_n is the orthonormal Hermite function.  This is the ground shape
    pi^{-1/4} eps^{-1/2} exp(i eps' tau^2/(2 eps)) dressed with H_n(tau/|eps|)
    and the e^{-i n theta} ratio factor -- the branch that actually solves the
    evolution equation for every n (for constant omega it reduces to the
    stationary mode with phase -(n+1/2) t; tests pin this down against the
    propagated field).  Gaussian decay exp(-tau^2/(2|eps|^2)) and unit norm
    follow from Im(eps'/eps) = 1/|eps|^2, i.e. from the Wronskian.

    arg_eps overrides the principal angle with a continuously tracked one
    (parametric_mode_args), avoiding branch jumps along long trajectories.
    """
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    eps, eps_dot = state.eps, state.eps_dot
    w = state.wronskian
    if abs(w - 1.0) > WRONSKIAN_TOLERANCE:
        warnings.warn(f"Wronskian {w:.6g} off unity; rescaling eps_dot",
                      AccuracyWarning, stacklevel=2)
        eps_dot = eps_dot + 1j * (1.0 - w) / abs(eps) ** 2 * eps
    mod = abs(eps)
    if mod == 0.0:
        raise DomainError("singular eps = 0 (Wronskian excludes this)")
    theta = float(np.angle(eps)) if arg_eps is None else arg_eps

    tau = grid.points
    chirp = 0.5 * (eps_dot / eps).real * tau**2
    values = hermite_function(n, tau / mod) / math.sqrt(mod) \
        * np.exp(1j * (chirp - (n + 0.5) * theta))
    return ComplexField(grid, values)


def parametric_mode_args(traj: EpsilonTrajectory) -> np.ndarray:
    """Continuously unwrapped arg(eps) along a trajectory, for branch tracking."""
    return np.unwrap(np.angle(traj.eps))
