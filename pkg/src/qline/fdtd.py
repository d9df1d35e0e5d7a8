"""Leapfrog reference solver for the raw coupled voltage/current line equations.

Staggered (Yee-style) scheme in one dimension: voltages live on integer grid
points at integer time steps, currents on half-points at half time steps.
The series-resistance damping term is integrated semi-implicitly, which keeps
the update second-order and unconditionally sane for any R'.

Two sign conventions are supported for the coupled first-order system:

    standard:  dv/dx = -L' di/dt - R' i ,   di/dx = -C' dv/dt
    paper:     dv/dx = +L' di/dt + R' i ,   di/dx = +C' dv/dt

Both combine to the same damped wave equation for the current; the mapping
v -> -v carries one into the other, so current magnitudes agree exactly.

The complex signal envelope is extracted by quadrature demodulation: the
current field is multiplied by exp(+i omega t) and averaged over exactly one
carrier period (the time step is shaved so an integer number of steps spans a
period, which cancels the double-frequency term identically).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, NumericalError
from .line import LineSpec

GROWTH_LIMIT = 1e6


@dataclass(frozen=True)
class LineState:
    """Fields at one leapfrog instant: v at time t, i half a step behind.

    v has one sample per grid node; i lives on half-points (n-1 samples, or n
    with periodic wrap).  dx, dt and the boundary/sign choices are fixed at
    construction; the CFL number V0 dt / dx must not exceed 1.
    """

    v: np.ndarray
    i: np.ndarray
    time: float
    spec: LineSpec
    x_min: float
    dx: float
    dt: float
    sign_convention: str = "standard"
    boundary: str = "absorbing"

    def __post_init__(self):
        if self.sign_convention not in ("standard", "paper"):
            raise ConfigError([("sign_convention", "standard|paper", self.sign_convention)])
        if self.boundary not in ("absorbing", "reflecting", "periodic"):
            raise ConfigError([("boundary", "absorbing|reflecting|periodic", self.boundary)])
        cfl = self.spec.v0 * self.dt / self.dx
        if cfl > 1.0 + 1e-12:
            raise ConfigError([("dt", f"V0*dt/dx <= 1 (got CFL {cfl:.4f})", self.dt)])
        n = len(self.v)
        want_i = n if self.boundary == "periodic" else n - 1
        if len(self.i) != want_i:
            raise ConfigError([("i", f"length {want_i} for boundary={self.boundary}",
                                len(self.i))])
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        object.__setattr__(self, "i", np.asarray(self.i, dtype=float))

    @property
    def x_nodes(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(len(self.v))

    @property
    def x_half(self) -> np.ndarray:
        return self.x_min + self.dx * (np.arange(len(self.i)) + 0.5)


def fdtd_step(state: LineState) -> LineState:
    """One leapfrog update: i advances by dt (semi-implicit loss), then v."""
    spec, dx, dt = state.spec, state.dx, state.dt
    sign = -1.0 if state.sign_convention == "standard" else 1.0
    x_half, x_nodes = state.x_half, state.x_nodes

    l_half = spec.l0 * np.asarray(spec.f1(x_half, state.time), dtype=float)
    a = spec.r0 * dt / (2.0 * l_half)
    if state.boundary == "periodic":
        dv = np.roll(state.v, -1) - state.v
    else:
        dv = state.v[1:] - state.v[:-1]
    i_new = ((1.0 - a) * state.i + sign * (dt / (l_half * dx)) * dv) / (1.0 + a)

    t_mid = state.time + 0.5 * dt
    c_nodes = spec.c0 * np.asarray(spec.f2(x_nodes, t_mid), dtype=float)
    v_new = state.v.copy()
    if state.boundary == "periodic":
        di = i_new - np.roll(i_new, 1)
        v_new = state.v + sign * (dt / (c_nodes * dx)) * di
    else:
        di = i_new[1:] - i_new[:-1]
        v_new[1:-1] = state.v[1:-1] + sign * (dt / (c_nodes[1:-1] * dx)) * di
        if state.boundary == "reflecting":
            v_new[0] = 0.0
            v_new[-1] = 0.0
        else:  # first-order one-way (Mur) absorbing ends
            v_left = spec.v0 / math.sqrt(float(spec.f1(x_nodes[0], t_mid))
                                         * float(spec.f2(x_nodes[0], t_mid)))
            v_right = spec.v0 / math.sqrt(float(spec.f1(x_nodes[-1], t_mid))
                                          * float(spec.f2(x_nodes[-1], t_mid)))
            cl = (v_left * dt - dx) / (v_left * dt + dx)
            cr = (v_right * dt - dx) / (v_right * dt + dx)
            v_new[0] = state.v[1] + cl * (v_new[1] - state.v[0])
            v_new[-1] = state.v[-2] + cr * (v_new[-2] - state.v[-1])

    return replace(state, v=v_new, i=i_new, time=state.time + dt)


def line_energy(state: LineState) -> float:
    """Total stored energy integral (C' v^2 + L' i^2)/2 dx."""
    spec = state.spec
    c_nodes = spec.c0 * np.asarray(spec.f2(state.x_nodes, state.time), dtype=float)
    l_half = spec.l0 * np.asarray(spec.f1(state.x_half, state.time), dtype=float)
    return float(0.5 * state.dx * (np.sum(c_nodes * state.v**2)
                                   + np.sum(l_half * state.i**2)))


@dataclass(frozen=True)
class GaussianPulse:
    """Narrowband launch pulse: Gaussian envelope (r.m.s. width sigma of |.|^2)
    on a cosine carrier at angular frequency omega, moving along direction."""

    center: float
    sigma: float
    omega: float
    amplitude: float = 1.0
    direction: int = 1


def initial_state(spec: LineSpec, x_min: float, x_max: float, n_points: int,
                  pulse: GaussianPulse | None = None, cfl: float = 0.99,
                  sign_convention: str = "standard",
                  boundary: str = "absorbing",
                  steps_per_period: int | None = None) -> LineState:
    """Build a LineState at t = 0 with a matched travelling pulse (or zero fields).

    dt is cfl * dx / Vmax, shaved so an integer number of steps spans one
    carrier period when the pulse has one (exact cancellation in demodulation).
    """
    dx = (x_max - x_min) / (n_points - 1)
    x_nodes = x_min + dx * np.arange(n_points)
    prod = np.asarray(spec.f1(x_nodes, 0.0), dtype=float) \
        * np.asarray(spec.f2(x_nodes, 0.0), dtype=float)
    v_max = spec.v0 / math.sqrt(float(np.min(prod)))
    dt = cfl * dx / v_max
    omega = pulse.omega if pulse is not None else 0.0
    if omega > 0:
        period = 2.0 * math.pi / omega
        n_per = steps_per_period or max(8, math.ceil(period / dt))
        dt = period / n_per

    n_i = n_points if boundary == "periodic" else n_points - 1
    v = np.zeros(n_points)
    i = np.zeros(n_i)
    if pulse is not None:
        x_half = x_min + dx * (np.arange(n_i) + 0.5)
        k0 = pulse.omega / spec.v0
        d = 1 if pulse.direction >= 0 else -1

        def wave(x):
            return pulse.amplitude * np.exp(-(x - pulse.center) ** 2
                                            / (4.0 * pulse.sigma**2)) \
                * np.cos(k0 * (x - pulse.center))

        # d'Alembert pair: v at t=0, i half a step earlier at t=-dt/2
        v = wave(x_nodes)
        i = d * wave(x_half + d * spec.v0 * dt / 2.0) / spec.z0
        if sign_convention == "paper":
            v = -v
    return LineState(v=v, i=i, time=0.0, spec=spec, x_min=x_min, dx=dx, dt=dt,
                     sign_convention=sign_convention, boundary=boundary)


@dataclass
class ProbeSeries:
    x_probe: float
    t: list[float] = field(default_factory=list)
    delta_v: list[float] = field(default_factory=list)
    delta_i: list[float] = field(default_factory=list)
    envelope: list[complex] = field(default_factory=list)


@dataclass
class EnvelopeSeries:
    """Demodulated |envelope| summary of the current field over time."""

    t: list[float] = field(default_factory=list)
    centroid: list[float] = field(default_factory=list)
    rms_width: list[float] = field(default_factory=list)
    mass: list[float] = field(default_factory=list)


@dataclass
class SimulationRecords:
    probes: list[ProbeSeries]
    envelope: EnvelopeSeries
    snapshots: list[tuple[float, np.ndarray]]
    final_state: LineState
    energies: list[tuple[float, float]]


def _demod_stats(x_half: np.ndarray, envelope: np.ndarray, dx: float):
    w = np.abs(envelope) ** 2
    mass = float(np.sum(w) * dx)
    if mass <= 0:
        return 0.0, 0.0, 0.0
    centroid = float(np.sum(x_half * w) * dx / mass)
    var = float(np.sum((x_half - centroid) ** 2 * w) * dx / mass)
    return centroid, math.sqrt(max(var, 0.0)), mass


def simulate(state: LineState, t_end: float, probes: tuple = (),
             output_stride: int = 1, demod_omega: float = 0.0,
             keep_snapshots: bool = False) -> SimulationRecords:
    """Run the leapfrog until t_end, recording probes and the demodulated envelope.

    demod_omega > 0 enables quadrature demodulation of the current field; the
    averaging window is one carrier period, so records start one period in.
    """
    if t_end <= state.time:
        raise ConfigError([("t_end", f"> start time {state.time}", t_end)])
    n_steps = int(round((t_end - state.time) / state.dt))
    probe_idx = [int(round((x - state.x_min) / state.dx)) for x in probes]
    for x, j in zip(probes, probe_idx):
        if not 1 <= j < len(state.v) - 1:
            raise ConfigError([("probes", "positions strictly inside the domain", x)])

    records = SimulationRecords(
        probes=[ProbeSeries(x_probe=state.x_min + j * state.dx) for j in probe_idx],
        envelope=EnvelopeSeries(), snapshots=[], final_state=state, energies=[])

    n_per = 0
    ring = None
    ring_sum = None
    if demod_omega > 0:
        period = 2.0 * math.pi / demod_omega
        n_per = int(round(period / state.dt))
        if abs(n_per * state.dt - period) > 1e-9 * period:
            raise ConfigError([("demod_omega",
                                "an integer number of steps per carrier period "
                                "(build the state with this omega)", demod_omega)])
        ring = np.zeros((n_per, len(state.i)), dtype=np.complex128)
        ring_sum = np.zeros(len(state.i), dtype=np.complex128)

    v_scale0 = max(float(np.max(np.abs(state.v))), float(np.max(np.abs(state.i))), 1e-300)
    x_half = state.x_half

    for step_no in range(1, n_steps + 1):
        state = fdtd_step(state)
        if demod_omega > 0:
            # i sits at t - dt/2 after the update
            phase = np.exp(1j * demod_omega * (state.time - 0.5 * state.dt))
            slot = step_no % n_per
            ring_sum -= ring[slot]
            ring[slot] = state.i * phase
            ring_sum += ring[slot]

        if step_no % output_stride == 0 or step_no == n_steps:
            peak = max(float(np.max(np.abs(state.v))), float(np.max(np.abs(state.i))))
            if peak > GROWTH_LIMIT * v_scale0:
                raise NumericalError(
                    f"instability: fields grew by {peak / v_scale0:.3g} at "
                    f"t = {state.time:.6g} (step {step_no})")
            envelope_field = None
            if demod_omega > 0 and step_no >= n_per:
                envelope_field = 2.0 * ring_sum / n_per
                centroid, rms, mass = _demod_stats(x_half, envelope_field, state.dx)
                records.envelope.t.append(state.time)
                records.envelope.centroid.append(centroid)
                records.envelope.rms_width.append(rms)
                records.envelope.mass.append(mass)
            for series, j in zip(records.probes, probe_idx):
                series.t.append(state.time)
                series.delta_v.append(float(state.v[j]))
                series.delta_i.append(float(0.5 * (state.i[j - 1] + state.i[j])
                                            if j < len(state.i) else state.i[j - 1]))
                series.envelope.append(complex(
                    0.5 * (envelope_field[j - 1] + envelope_field[j])
                    if envelope_field is not None and j < len(envelope_field) else 0.0))
            if keep_snapshots:
                records.snapshots.append((state.time, state.i.copy()))
            records.energies.append((state.time, line_energy(state)))

    records.final_state = state
    return records
