"""Distributed line parameters, modulation profiles and the effective potential.

A line is described by its per-unit-length inductance and capacitance l0, c0
(plus a series resistance r0 used only by the FDTD reference solver) and two
positive modulation functions f1(x, t), f2(x, t) so that

    L'(x, t) = l0 f1(x, t),   C'(x, t) = c0 f2(x, t).

The local phase velocity is V = V0 / N with N = sqrt(f1 f2), and the envelope
model sees the relative index change as an effective potential

    U = sqrt(l0 c0 / (L' C')) - 1 = 1/N - 1.

Modulations are built from small declarative descriptions (constant, step,
rectangle, parabola, gaussian, piecewise) so scenario files stay reproducible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, ValidityWarning
from .fields import Grid1D

C_LIGHT = 299792458.0  # m/s

# |U| above this is outside the weak-perturbation regime the envelope model assumes
VALIDITY_THRESHOLD = 0.1


def _unit_modulation(x, t):
    return np.ones_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class LineSpec:
    """Distributed parameters of one transmission line.

    l0: H/m, c0: F/m, r0: ohm/m (FDTD only).  f1, f2 map (x, t) -> positive factor.
    """

    l0: float
    c0: float
    r0: float = 0.0
    f1: Callable = field(default=_unit_modulation)
    f2: Callable = field(default=_unit_modulation)

    def __post_init__(self):
        if self.l0 <= 0 or self.c0 <= 0:
            raise DomainError(f"need l0, c0 > 0, got l0={self.l0}, c0={self.c0}")
        if self.r0 < 0:
            raise DomainError(f"need r0 >= 0, got {self.r0}")

    @property
    def v0(self) -> float:
        """Unperturbed phase velocity 1/sqrt(l0 c0)."""
        return 1.0 / np.sqrt(self.l0 * self.c0)

    @property
    def z0(self) -> float:
        """Unperturbed characteristic impedance sqrt(l0/c0)."""
        return float(np.sqrt(self.l0 / self.c0))

    @property
    def n_line(self) -> float:
        """Index of the unperturbed line relative to free space, c/V0."""
        return C_LIGHT / self.v0


def _modulation_product(spec: LineSpec, x, t):
    prod = np.asarray(spec.f1(x, t), dtype=float) * np.asarray(spec.f2(x, t), dtype=float)
    if np.any(prod <= 0):
        raise DomainError("modulation product f1*f2 must stay positive")
    return prod


def phase_velocity(spec: LineSpec, x: float, t: float) -> float:
    """Local phase velocity V = V0 / sqrt(f1 f2)."""
    return float(spec.v0 / np.sqrt(_modulation_product(spec, x, t)))


def effective_potential(spec: LineSpec, x: float, t: float) -> float:
    """U = 1/sqrt(f1 f2) - 1; zero on the homogeneous line, negative where the line slows."""
    return float(1.0 / np.sqrt(_modulation_product(spec, x, t)) - 1.0)


def to_dimensionless(x: float, t: float, omega: float) -> tuple[float, float]:
    """Map (x, t) to (tau, s) = (omega x / c, omega t).  omega in rad/s."""
    if omega <= 0:
        raise DomainError(f"need omega > 0, got {omega}")
    return omega * x / C_LIGHT, omega * t


def from_dimensionless(tau: float, s: float, omega: float) -> tuple[float, float]:
    """Inverse of to_dimensionless."""
    if omega <= 0:
        raise DomainError(f"need omega > 0, got {omega}")
    return C_LIGHT * tau / omega, s / omega


@dataclass(frozen=True)
class PotentialProfile:
    """Effective potential U(tau, s), closed-form or tabulated.

    Either ``fn(tau_array, s) -> U_array`` or a static ``table`` sampled on ``grid``.
    n0 is the unperturbed relative index (1 by convention); the envelope solver
    uses n0^2 as its effective mass.
    """

    fn: Callable | None = None
    grid: Grid1D | None = None
    table: np.ndarray | None = None
    n0: float = 1.0

    def __post_init__(self):
        if (self.fn is None) == (self.table is None):
            raise ValueError("provide exactly one of fn or (grid, table)")
        if self.table is not None:
            if self.grid is None or len(self.table) != self.grid.n_points:
                raise ValueError("table must be sampled on the provided grid")
            if not np.all(np.isfinite(self.table)):
                raise ValueError("table contains non-finite potential values")

    @classmethod
    def from_callable(cls, fn: Callable, n0: float = 1.0) -> "PotentialProfile":
        return cls(fn=fn, n0=n0)

    @classmethod
    def from_samples(cls, grid: Grid1D, table: np.ndarray, n0: float = 1.0) -> "PotentialProfile":
        return cls(grid=grid, table=np.asarray(table, dtype=float), n0=n0)

    @classmethod
    def zero(cls, n0: float = 1.0) -> "PotentialProfile":
        return cls(fn=lambda tau, s: np.zeros_like(np.asarray(tau, dtype=float)), n0=n0)

    @classmethod
    def harmonic(cls, k: float, n0: float = 1.0) -> "PotentialProfile":
        """U(tau) = k tau^2 / 2 (quadratic index profile)."""
        return cls(fn=lambda tau, s: 0.5 * k * np.asarray(tau, dtype=float) ** 2, n0=n0)

    def sample(self, grid: Grid1D, s: float) -> np.ndarray:
        if self.fn is not None:
            return np.asarray(self.fn(grid.points, s), dtype=float)
        if self.grid != grid:
            raise ValueError("tabulated profile sampled on a different grid")
        return self.table

    def is_time_dependent(self) -> bool:
        return self.fn is not None


def potential_from_spec(spec: LineSpec, grid: Grid1D, omega: float,
                        s: float = 0.0, n0: float | None = None) -> PotentialProfile:
    """Sample the line's effective potential on a tau grid at dimensionless time s.

    n0 defaults to the line's own relative index c/V0 (exactly 1 for a line with
    V0 = c, the convention the dimensionless model is written in).
    """
    x = C_LIGHT * grid.points / omega
    t = s / omega
    prod = _modulation_product(spec, x, np.full_like(x, t))
    table = 1.0 / np.sqrt(prod) - 1.0
    peak = float(np.max(np.abs(table)))
    if peak > VALIDITY_THRESHOLD:
        warnings.warn(f"max|U| = {peak:.3g} exceeds {VALIDITY_THRESHOLD}; envelope model "
                      "assumes a weak perturbation", ValidityWarning, stacklevel=2)
    return PotentialProfile.from_samples(grid, table, n0=spec.n_line if n0 is None else n0)


def modulation_from_config(cfg: dict) -> Callable:
    """Build an (x, t) -> factor modulation from a declarative description.

    Spatial types: constant, step, rectangle, parabola, gaussian, piecewise,
    from_potential.  An optional ``time`` sub-dict {type: step, t0, before,
    after} multiplies the spatial profile by a time factor.
    """
    kind = cfg.get("type")
    if kind == "constant":
        value = float(cfg["value"])
        spatial = lambda x: np.full_like(np.asarray(x, dtype=float), value)
    elif kind == "step":
        x0, before, after = float(cfg["x0"]), float(cfg["before"]), float(cfg["after"])
        spatial = lambda x: np.where(np.asarray(x, dtype=float) < x0, before, after)
    elif kind == "rectangle":
        x0, x1 = float(cfg["x0"]), float(cfg["x1"])
        inside, outside = float(cfg["inside"]), float(cfg["outside"])
        spatial = lambda x: np.where(
            (np.asarray(x, dtype=float) >= x0) & (np.asarray(x, dtype=float) <= x1),
            inside, outside)
    elif kind == "parabola":
        center = float(cfg.get("center", 0.0))
        curvature, base = float(cfg["curvature"]), float(cfg.get("base", 1.0))
        spatial = lambda x: base + curvature * (np.asarray(x, dtype=float) - center) ** 2
    elif kind == "gaussian":
        center, width = float(cfg.get("center", 0.0)), float(cfg["width"])
        amplitude, base = float(cfg["amplitude"]), float(cfg.get("base", 1.0))
        spatial = lambda x: base + amplitude * np.exp(
            -((np.asarray(x, dtype=float) - center) ** 2) / (2.0 * width**2))
    elif kind == "piecewise":
        xs = np.asarray(cfg["xs"], dtype=float)
        values = np.asarray(cfg["values"], dtype=float)
        if len(values) != len(xs) + 1:
            raise ValueError("piecewise needs len(values) == len(xs) + 1")
        spatial = lambda x: values[np.searchsorted(xs, np.asarray(x, dtype=float), side="right")]
    elif kind == "from_potential":
        # choose f so that 1/sqrt(f) - 1 equals the requested potential in tau = omega x / c
        u_fn = potential_shape_from_config(cfg["u"])
        omega = float(cfg["omega"])
        spatial = lambda x: 1.0 / (1.0 + u_fn(omega * np.asarray(x, dtype=float) / C_LIGHT)) ** 2
    else:
        raise ValueError(f"unknown modulation type {kind!r}")

    time_cfg = cfg.get("time")
    if time_cfg is None:
        return lambda x, t: spatial(x)
    if time_cfg.get("type") != "step":
        raise ValueError(f"unknown time modulation type {time_cfg.get('type')!r}")
    t0 = float(time_cfg["t0"])
    before, after = float(time_cfg["before"]), float(time_cfg["after"])
    return lambda x, t: spatial(x) * np.where(np.asarray(t, dtype=float) < t0, before, after)


def potential_shape_from_config(cfg: dict) -> Callable:
    """Declarative U(tau) shapes used by from_potential modulations and scenarios."""
    kind = cfg.get("type")
    if kind == "zero":
        return lambda tau: np.zeros_like(np.asarray(tau, dtype=float))
    if kind == "constant":
        value = float(cfg["value"])
        return lambda tau: np.full_like(np.asarray(tau, dtype=float), value)
    if kind == "parabolic":
        k = float(cfg["k"])
        return lambda tau: 0.5 * k * np.asarray(tau, dtype=float) ** 2
    if kind == "rectangle":
        tau0, tau1, depth = float(cfg["tau0"]), float(cfg["tau1"]), float(cfg["u"])
        return lambda tau: np.where(
            (np.asarray(tau, dtype=float) >= tau0) & (np.asarray(tau, dtype=float) <= tau1),
            depth, 0.0)
    if kind == "gaussian":
        center, width, amp = float(cfg.get("center", 0.0)), float(cfg["width"]), float(cfg["u"])
        return lambda tau: amp * np.exp(
            -((np.asarray(tau, dtype=float) - center) ** 2) / (2.0 * width**2))
    raise ValueError(f"unknown potential shape {kind!r}")
