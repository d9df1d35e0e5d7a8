"""Scenario-driven command line front end.

One YAML scenario file describes one run; all artifacts land in the output
directory as CSV tables with a provenance header (tool version, scenario
hash, column units).  Runs are deterministic: no randomness, no timestamps,
shortest round-trip float formatting, so repeated runs are byte-identical.

    qline <kind> --config <file> --out <dir> [--verbose]

kinds: telegrapher, evolve, modes, scatter, franck-condon, parametric.
Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .errors import ConfigError, NumericalError, QlineError
from .fdtd import GaussianPulse, initial_state, simulate
from .fields import ComplexField, Grid1D, overlap_inner
from .franck_condon import (EpsilonState, OmegaSchedule, epsilon_evolve,
                            fc_via_wigner, mode_family, overlap_matrix,
                            parametric_mode, parametric_mode_args,
                            wigner_transform)
from .line import LineSpec, PotentialProfile, modulation_from_config, potential_shape_from_config
from .envelope import EvolutionConfig, Trajectory, evolve
from .modes import (EnvelopeState, energy_level, envelope_ode_solve,
                    equilibrium_sigma, hermite_gauss_mode, stationary_mode)
from .scattering import ScatteringStack, ramsauer_resonances, scan

KINDS = ("telegrapher", "evolve", "modes", "scatter", "franck-condon", "parametric")


@dataclass(frozen=True)
class Scenario:
    kind: str
    params: dict
    output_dir: Path | None = None
    deterministic: bool = True

    @property
    def digest(self) -> str:
        canon = json.dumps({"kind": self.kind, **self.params},
                           sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# validation helpers
# ---------------------------------------------------------------------------

class _Check:
    def __init__(self):
        self.issues: list[tuple[str, str, object]] = []

    def fail(self, path, expected, got):
        self.issues.append((path, expected, got))

    def number(self, cfg, path, key, default=None, positive=False, nonneg=False):
        if key not in cfg:
            if default is not None:
                return default
            self.fail(f"{path}.{key}", "a number", "missing")
            return None
        val = cfg[key]
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            self.fail(f"{path}.{key}", "a number", val)
            return None
        val = float(val)
        if positive and not val > 0:
            self.fail(f"{path}.{key}", "> 0", val)
            return None
        if nonneg and val < 0:
            self.fail(f"{path}.{key}", ">= 0", val)
            return None
        return val

    def integer(self, cfg, path, key, default=None, minimum=None):
        if key not in cfg:
            if default is not None:
                return default
            self.fail(f"{path}.{key}", "an integer", "missing")
            return None
        val = cfg[key]
        if not isinstance(val, int) or isinstance(val, bool):
            self.fail(f"{path}.{key}", "an integer", val)
            return None
        if minimum is not None and val < minimum:
            self.fail(f"{path}.{key}", f">= {minimum}", val)
            return None
        return val

    def mapping(self, cfg, path, key, required=True):
        if key not in cfg:
            if required:
                self.fail(f"{path}.{key}", "a mapping", "missing")
            return None
        if not isinstance(cfg[key], dict):
            self.fail(f"{path}.{key}", "a mapping", cfg[key])
            return None
        return cfg[key]

    def choice(self, cfg, path, key, options, default=None):
        val = cfg.get(key, default)
        if val not in options:
            self.fail(f"{path}.{key}", f"one of {sorted(options)}", val)
            return None
        return val

    def grid(self, cfg, path, key):
        g = self.mapping(cfg, path, key)
        if g is None:
            return None
        lo = self.number(g, f"{path}.{key}", "tau_min")
        hi = self.number(g, f"{path}.{key}", "tau_max")
        n = self.integer(g, f"{path}.{key}", "n_points", minimum=8)
        if None in (lo, hi, n):
            return None
        if not hi > lo:
            self.fail(f"{path}.{key}", "tau_max > tau_min", (lo, hi))
            return None
        return Grid1D(lo, hi, n)


def parse_scenario(text: str, output_dir: Path | None = None) -> Scenario:
    """Parse and validate a YAML scenario document.  Raises ConfigError."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([("<document>", "well-formed YAML", str(exc))]) from exc
    if not isinstance(doc, dict):
        raise ConfigError([("<document>", "a mapping", type(doc).__name__)])
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ConfigError([("kind", f"one of {list(KINDS)}", kind)])
    deterministic = doc.get("deterministic", True)
    if deterministic is not True:
        raise ConfigError([("deterministic", "true (runs are always seed-free)",
                            deterministic)])
    params = {k: v for k, v in doc.items() if k not in ("kind", "deterministic")}

    chk = _Check()
    _VALIDATORS[kind](params, chk)
    if chk.issues:
        raise ConfigError(chk.issues)
    return Scenario(kind=kind, params=params, output_dir=output_dir)


def _validate_evolve(p, chk: _Check):
    chk.grid(p, "", "grid")
    pot = chk.mapping(p, "", "potential")
    if pot is not None:
        kind = chk.choice(pot, "potential", "type",
                          {"zero", "constant", "parabolic", "rectangle",
                           "gaussian", "parabolic_jump"})
        if kind == "parabolic":
            chk.number(pot, "potential", "k", positive=True)
        elif kind == "parabolic_jump":
            chk.number(pot, "potential", "k1", positive=True)
            chk.number(pot, "potential", "k2", positive=True)
            chk.number(pot, "potential", "s_jump", positive=True)
        elif kind == "constant":
            chk.number(pot, "potential", "value")
        elif kind == "rectangle":
            chk.number(pot, "potential", "tau0")
            chk.number(pot, "potential", "tau1")
            chk.number(pot, "potential", "u")
        elif kind == "gaussian":
            chk.number(pot, "potential", "width", positive=True)
            chk.number(pot, "potential", "u")
            chk.number(pot, "potential", "center", default=0.0)
    init = chk.mapping(p, "", "initial")
    if init is not None:
        kind = chk.choice(init, "initial", "type", {"ground", "mode", "gaussian"})
        if kind in ("ground", "mode"):
            chk.number(init, "initial", "k", positive=True)
        if kind == "mode":
            chk.integer(init, "initial", "n", minimum=0)
        if kind == "gaussian":
            chk.number(init, "initial", "sigma", positive=True)
            chk.number(init, "initial", "center", default=0.0)
            chk.number(init, "initial", "momentum", default=0.0)
            chk.number(init, "initial", "sigma_prime", default=0.0)
    ev = chk.mapping(p, "", "evolution")
    if ev is not None:
        chk.number(ev, "evolution", "ds", positive=True)
        chk.number(ev, "evolution", "s_end", positive=True)
        chk.integer(ev, "evolution", "record_stride", default=1, minimum=1)
        chk.number(ev, "evolution", "n0", default=1.0, positive=True)
        chk.integer(ev, "evolution", "boundary_pad", default=0, minimum=0)


def _validate_modes(p, chk: _Check):
    chk.number(p, "", "k", positive=True)
    chk.integer(p, "", "n_max", minimum=0)
    chk.number(p, "", "s", default=0.0, nonneg=True)
    chk.grid(p, "", "grid")
    env = chk.mapping(p, "", "envelope", required=False)
    if env is not None:
        chk.number(env, "envelope", "sigma0", positive=True)
        chk.number(env, "envelope", "sigma_prime0", default=0.0)
        chk.number(env, "envelope", "s_end", positive=True)


def _validate_scatter(p, chk: _Check):
    stack = chk.mapping(p, "", "stack")
    if stack is not None:
        segments = stack.get("segments", [])
        if not isinstance(segments, list):
            chk.fail("stack.segments", "a list of {length, u}", segments)
        else:
            for i, seg in enumerate(segments):
                if not isinstance(seg, dict):
                    chk.fail(f"stack.segments[{i}]", "a mapping", seg)
                    continue
                chk.number(seg, f"stack.segments[{i}]", "length", positive=True)
                chk.number(seg, f"stack.segments[{i}]", "u")
        chk.number(stack, "stack", "u_left", default=0.0)
        chk.number(stack, "stack", "u_right", default=0.0)
        chk.number(stack, "stack", "mass", default=1.0, positive=True)
    sc = chk.mapping(p, "", "scan", required=False)
    if sc is not None:
        chk.number(sc, "scan", "e_min")
        chk.number(sc, "scan", "e_max")
        chk.integer(sc, "scan", "n_samples", minimum=2)
    rs = chk.mapping(p, "", "resonances", required=False)
    if rs is not None:
        chk.number(rs, "resonances", "depth", positive=True)
        chk.number(rs, "resonances", "width", positive=True)
        chk.integer(rs, "resonances", "n_max", minimum=1)
        chk.number(rs, "resonances", "mass", default=1.0, positive=True)
    if sc is None and rs is None:
        chk.fail("scan|resonances", "at least one of scan or resonances", "missing")


def _validate_franck_condon(p, chk: _Check):
    chk.number(p, "", "omega1", positive=True)
    chk.number(p, "", "omega2", positive=True)
    chk.integer(p, "", "n_max", minimum=0)
    if "grid" in p:
        chk.grid(p, "", "grid")
    wig = chk.mapping(p, "", "wigner", required=False)
    if wig is not None:
        chk.integer(wig, "wigner", "n", minimum=0)
        chk.integer(wig, "wigner", "m", minimum=0)
        chk.integer(wig, "wigner", "q_stride", default=1, minimum=1)


def _validate_parametric(p, chk: _Check):
    sched = chk.mapping(p, "", "schedule")
    if sched is not None:
        kind = chk.choice(sched, "schedule", "type", {"constant", "jump", "ramp"})
        if kind == "constant":
            chk.number(sched, "schedule", "omega", default=1.0, positive=True)
        elif kind == "jump":
            chk.number(sched, "schedule", "omega1", positive=True)
            chk.number(sched, "schedule", "omega2", positive=True)
            chk.number(sched, "schedule", "t_jump", positive=True)
        elif kind == "ramp":
            chk.number(sched, "schedule", "omega1", positive=True)
            chk.number(sched, "schedule", "omega2", positive=True)
            chk.number(sched, "schedule", "t_start", nonneg=True)
            chk.number(sched, "schedule", "duration", positive=True)
    chk.number(p, "", "t_end", positive=True)
    chk.number(p, "", "dt", default=2e-3, positive=True)
    chk.integer(p, "", "record_stride", default=1, minimum=1)
    proj = chk.mapping(p, "", "project", required=False)
    if proj is not None:
        chk.number(proj, "project", "omega_ref", positive=True)
        chk.integer(proj, "project", "n_max", minimum=0)
        chk.grid(proj, "project", "grid")


def _validate_telegrapher(p, chk: _Check):
    line = chk.mapping(p, "", "line")
    if line is not None:
        chk.number(line, "line", "l0", positive=True)
        chk.number(line, "line", "c0", positive=True)
        chk.number(line, "line", "r0", default=0.0, nonneg=True)
        for key in ("f1", "f2"):
            mod = chk.mapping(line, "line", key, required=False)
            if mod is not None:
                try:
                    modulation_from_config(mod)
                except (ValueError, KeyError) as exc:
                    chk.fail(f"line.{key}", "a valid modulation description", str(exc))
    dom = chk.mapping(p, "", "domain")
    if dom is not None:
        x0 = chk.number(dom, "domain", "x_min")
        x1 = chk.number(dom, "domain", "x_max")
        chk.integer(dom, "domain", "n_points", minimum=8)
        if x0 is not None and x1 is not None and not x1 > x0:
            chk.fail("domain", "x_max > x_min", (x0, x1))
    init = chk.mapping(p, "", "initial")
    if init is not None:
        kind = chk.choice(init, "initial", "type", {"pulse", "sine", "uniform"})
        if kind == "pulse":
            chk.number(init, "initial", "center")
            chk.number(init, "initial", "sigma", positive=True)
            chk.number(init, "initial", "omega", positive=True)
            chk.number(init, "initial", "amplitude", default=1.0)
        elif kind == "sine":
            chk.integer(init, "initial", "wavelengths", minimum=1)
            chk.number(init, "initial", "amplitude", default=1.0)
        elif kind == "uniform":
            chk.number(init, "initial", "amplitude", default=1.0)
    run = chk.mapping(p, "", "run")
    if run is not None:
        chk.number(run, "run", "t_end", positive=True)
        chk.number(run, "run", "cfl", default=0.99, positive=True)
        chk.integer(run, "run", "output_stride", default=1, minimum=1)
        chk.choice(run, "run", "boundary", {"absorbing", "reflecting", "periodic"},
                   default="absorbing")
        chk.choice(run, "run", "sign_convention", {"standard", "paper"},
                   default="standard")
        probes = run.get("probes", [])
        if not isinstance(probes, list) or \
                any(not isinstance(x, (int, float)) or isinstance(x, bool) for x in probes):
            chk.fail("run.probes", "a list of positions", probes)


_VALIDATORS = {
    "evolve": _validate_evolve,
    "modes": _validate_modes,
    "scatter": _validate_scatter,
    "franck-condon": _validate_franck_condon,
    "parametric": _validate_parametric,
    "telegrapher": _validate_telegrapher,
}


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_csv(path: Path, scenario: Scenario, columns: list[tuple[str, str]],
               rows) -> Path:
    """columns: list of (name, unit); rows: iterable of value tuples."""
    lines = [f"# qline {__version__}",
             f"# scenario: {scenario.kind} {scenario.digest}",
             "# columns: " + ", ".join(f"{name} [{unit}]" for name, unit in columns),
             ",".join(name for name, _ in columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def _write_gnuplot_matrix(path: Path, scenario: Scenario, q, p, values) -> Path:
    lines = [f"# qline {__version__}",
             f"# scenario: {scenario.kind} {scenario.digest}",
             "# gnuplot blocks: q p W"]
    for iq, qv in enumerate(q):
        for ip, pv in enumerate(p):
            lines.append(f"{_fmt(qv)} {_fmt(pv)} {_fmt(values[iq, ip])}")
        lines.append("")
    path.write_text("\n".join(lines) + "\n")
    return path


def _trajectory_rows(traj: Trajectory):
    for s, m, e in zip(traj.times, traj.moments, traj.energy):
        det = m.sigma_p**2 * m.sigma**2 - m.cross**2
        yield s, m.sigma, m.sigma_p, m.cross, det, e


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------

def _build_potential(cfg: dict) -> PotentialProfile:
    if cfg["type"] == "parabolic_jump":
        k1, k2, s_jump = float(cfg["k1"]), float(cfg["k2"]), float(cfg["s_jump"])

        def fn(tau, s):
            k = k1 if s < s_jump else k2
            return 0.5 * k * np.asarray(tau, dtype=float) ** 2
        return PotentialProfile.from_callable(fn)
    shape = potential_shape_from_config(cfg)
    return PotentialProfile.from_callable(lambda tau, s: shape(tau))


def _build_initial(cfg: dict, grid: Grid1D) -> ComplexField:
    if cfg["type"] == "ground":
        return stationary_mode(0, float(cfg["k"]), 0.0, grid)
    if cfg["type"] == "mode":
        return stationary_mode(int(cfg["n"]), float(cfg["k"]), 0.0, grid)
    sigma = float(cfg["sigma"])
    center = float(cfg.get("center", 0.0))
    momentum = float(cfg.get("momentum", 0.0))
    sigma_prime = float(cfg.get("sigma_prime", 0.0))
    env = EnvelopeState(sigma=sigma, sigma_prime=sigma_prime, k=1.0)
    shifted = Grid1D(grid.tau_min - center, grid.tau_max - center, grid.n_points)
    base = hermite_gauss_mode(0, env, shifted)
    return ComplexField(grid, base.values * np.exp(1j * momentum * grid.points))


def _run_evolve(scn: Scenario, out: Path) -> list[Path]:
    p = scn.params
    grid = Grid1D(p["grid"]["tau_min"], p["grid"]["tau_max"], p["grid"]["n_points"])
    potential = _build_potential(p["potential"])
    psi0 = _build_initial(p["initial"], grid)
    ev = p["evolution"]
    config = EvolutionConfig(ds=float(ev["ds"]), s_end=float(ev["s_end"]),
                             n0=float(ev.get("n0", 1.0)),
                             record_stride=int(ev.get("record_stride", 1)),
                             boundary_pad=int(ev.get("boundary_pad", 0)))
    traj = evolve(psi0, potential, config)
    paths = [_write_csv(out / "trajectory.csv", scn,
                        [("s", "1"), ("sigma", "1"), ("sigma_p", "1"),
                         ("cross", "1"), ("det", "1"), ("energy", "1")],
                        _trajectory_rows(traj))]
    if p.get("dump_fields"):
        for idx, (s, f) in enumerate(zip(traj.times, traj.fields)):
            paths.append(_write_csv(
                out / f"field_{idx:04d}.csv", scn,
                [("tau", "1"), ("re", "1"), ("im", "1"), ("abs2", "1")],
                zip(f.grid.points, f.values.real, f.values.imag, f.abs2())))
    return paths


def _run_modes(scn: Scenario, out: Path) -> list[Path]:
    p = scn.params
    grid = Grid1D(p["grid"]["tau_min"], p["grid"]["tau_max"], p["grid"]["n_points"])
    k = float(p["k"])
    n_max = int(p["n_max"])
    s = float(p.get("s", 0.0))
    fields = [stationary_mode(n, k, s, grid) for n in range(n_max + 1)]
    paths = [_write_csv(out / "levels.csv", scn,
                        [("n", "1"), ("energy", "1"), ("sigma0", "1")],
                        ((n, energy_level(n, k), equilibrium_sigma(k))
                         for n in range(n_max + 1)))]
    columns = [("tau", "1")]
    for n in range(n_max + 1):
        columns += [(f"re_{n}", "1"), (f"im_{n}", "1")]
    rows = zip(grid.points, *(col for f in fields
                              for col in (f.values.real, f.values.imag)))
    paths.append(_write_csv(out / "modes.csv", scn, columns, rows))
    env_cfg = p.get("envelope")
    if env_cfg:
        initial = EnvelopeState(sigma=float(env_cfg["sigma0"]),
                                sigma_prime=float(env_cfg.get("sigma_prime0", 0.0)),
                                k=k)
        traj = envelope_ode_solve(initial, float(env_cfg["s_end"]),
                                  env_cfg.get("ds"))
        paths.append(_write_csv(out / "envelope.csv", scn,
                                [("s", "1"), ("sigma", "1"), ("sigma_prime", "1"),
                                 ("phi", "1"), ("inv_rho", "1")],
                                zip(traj.s, traj.sigma, traj.sigma_prime,
                                    traj.phi, traj.inv_rho)))
    return paths


def _run_scatter(scn: Scenario, out: Path) -> list[Path]:
    p = scn.params
    stack_cfg = p["stack"]
    stack = ScatteringStack(
        segments=tuple((seg["length"], seg["u"]) for seg in stack_cfg.get("segments", [])),
        u_left=float(stack_cfg.get("u_left", 0.0)),
        u_right=float(stack_cfg.get("u_right", 0.0)),
        mass=float(stack_cfg.get("mass", 1.0)))
    paths = []
    if "scan" in p:
        sc = p["scan"]
        table = scan(stack, float(sc["e_min"]), float(sc["e_max"]),
                     int(sc["n_samples"]))
        paths.append(_write_csv(out / "scan.csv", scn,
                                [("E", "1"), ("T", "1"), ("R", "1")],
                                ((r.energy, r.transmission, r.reflection)
                                 for r in table)))
    if "resonances" in p:
        rs = p["resonances"]
        found = ramsauer_resonances(float(rs["depth"]), float(rs["width"]),
                                    mass=float(rs.get("mass", 1.0)),
                                    n_max=int(rs["n_max"]))
        paths.append(_write_csv(out / "resonances.csv", scn,
                                [("n", "1"), ("E", "1"), ("T", "1"),
                                 ("even_count", "1")],
                                ((r.half_wave_count, r.energy, r.transmission,
                                  int(r.even_count)) for r in found)))
    return paths


def _run_franck_condon(scn: Scenario, out: Path) -> list[Path]:
    p = scn.params
    omega1, omega2 = float(p["omega1"]), float(p["omega2"])
    n_max = int(p["n_max"])
    if "grid" in p:
        grid = Grid1D(p["grid"]["tau_min"], p["grid"]["tau_max"], p["grid"]["n_points"])
    else:
        half = 9.0 / math.sqrt(2.0 * min(omega1, omega2)) * math.sqrt(n_max + 1.0)
        grid = Grid1D(-half, half, 2 * int(100 * half) + 1)
    fam1 = mode_family(omega1, n_max, grid)
    fam2 = mode_family(omega2, n_max, grid)
    c = overlap_matrix(fam1, fam2)
    rows = ((n, m, c[n, m].real, c[n, m].imag, abs(c[n, m]) ** 2)
            for n in range(n_max + 1) for m in range(n_max + 1))
    paths = [_write_csv(out / "populations.csv", scn,
                        [("n", "1"), ("m", "1"), ("re", "1"), ("im", "1"),
                         ("abs2", "1")], rows)]
    wig = p.get("wigner")
    if wig:
        stride = int(wig.get("q_stride", 1))
        wn = wigner_transform(fam1[int(wig["n"])], q_stride=stride)
        wm = wigner_transform(fam2[int(wig["m"])], q_stride=stride)
        cross = fc_via_wigner(wn, wm)
        paths.append(_write_csv(out / "wigner_check.csv", scn,
                                [("n", "1"), ("m", "1"), ("abs2_overlap", "1"),
                                 ("abs2_wigner", "1")],
                                [(int(wig["n"]), int(wig["m"]),
                                  abs(c[int(wig["n"]), int(wig["m"])]) ** 2, cross)]))
        paths.append(_write_gnuplot_matrix(out / f"wigner_{int(wig['n'])}.dat", scn,
                                           wn.q_grid.points, wn.p_grid.points,
                                           wn.values))
    return paths


def _run_parametric(scn: Scenario, out: Path) -> list[Path]:
    p = scn.params
    sched_cfg = p["schedule"]
    if sched_cfg["type"] == "constant":
        schedule = OmegaSchedule.constant(float(sched_cfg.get("omega", 1.0)))
    elif sched_cfg["type"] == "jump":
        schedule = OmegaSchedule.sudden_jump(float(sched_cfg["omega1"]),
                                             float(sched_cfg["omega2"]),
                                             float(sched_cfg["t_jump"]))
    else:
        schedule = OmegaSchedule.smooth_ramp(float(sched_cfg["omega1"]),
                                             float(sched_cfg["omega2"]),
                                             float(sched_cfg["t_start"]),
                                             float(sched_cfg["duration"]))
    traj = epsilon_evolve(EpsilonState(omega_fn=schedule), float(p["t_end"]),
                          dt=float(p.get("dt", 2e-3)))
    stride = int(p.get("record_stride", 1))
    idx = list(range(0, len(traj.t), stride))
    if idx[-1] != len(traj.t) - 1:
        idx.append(len(traj.t) - 1)
    wr = traj.wronskian
    rows = ((traj.t[i], traj.eps[i].real, traj.eps[i].imag,
             traj.eps_dot[i].real, traj.eps_dot[i].imag,
             abs(traj.eps[i]), wr[i]) for i in idx)
    paths = [_write_csv(out / "epsilon.csv", scn,
                        [("t", "1"), ("eps_re", "1"), ("eps_im", "1"),
                         ("epsdot_re", "1"), ("epsdot_im", "1"),
                         ("abs_eps", "1"), ("wronskian", "1")], rows)]
    proj = p.get("project")
    if proj:
        grid = Grid1D(proj["grid"]["tau_min"], proj["grid"]["tau_max"],
                      proj["grid"]["n_points"])
        args = parametric_mode_args(traj)
        psi = parametric_mode(0, traj.state_at(-1), grid, arg_eps=float(args[-1]))
        targets = mode_family(float(proj["omega_ref"]), int(proj["n_max"]), grid)
        pops = [abs(overlap_inner(t, psi)) ** 2 for t in targets]
        paths.append(_write_csv(out / "populations.csv", scn,
                                [("m", "1"), ("population", "1")],
                                ((m, pop) for m, pop in enumerate(pops))))
    return paths


def _run_telegrapher(scn: Scenario, out: Path) -> list[Path]:
    p = scn.params
    line_cfg = p["line"]
    kwargs = {}
    for key in ("f1", "f2"):
        if key in line_cfg:
            kwargs[key] = modulation_from_config(line_cfg[key])
    spec = LineSpec(l0=float(line_cfg["l0"]), c0=float(line_cfg["c0"]),
                    r0=float(line_cfg.get("r0", 0.0)), **kwargs)
    dom = p["domain"]
    run = p["run"]
    init = p["initial"]
    boundary = run.get("boundary", "absorbing")
    sign = run.get("sign_convention", "standard")
    cfl = float(run.get("cfl", 0.99))
    demod_omega = 0.0
    if init["type"] == "pulse":
        pulse = GaussianPulse(center=float(init["center"]), sigma=float(init["sigma"]),
                              omega=float(init["omega"]),
                              amplitude=float(init.get("amplitude", 1.0)),
                              direction=int(init.get("direction", 1)))
        state = initial_state(spec, float(dom["x_min"]), float(dom["x_max"]),
                              int(dom["n_points"]), pulse, cfl=cfl,
                              sign_convention=sign, boundary=boundary)
        demod_omega = pulse.omega if run.get("demod", True) else 0.0
    else:
        state = initial_state(spec, float(dom["x_min"]), float(dom["x_max"]),
                              int(dom["n_points"]), None, cfl=cfl,
                              sign_convention=sign, boundary=boundary)
        amp = float(init.get("amplitude", 1.0))
        if init["type"] == "sine":
            m = int(init["wavelengths"])
            k = 2.0 * math.pi * m / (float(dom["x_max"]) - float(dom["x_min"]))
            i_new = amp * np.cos(k * (state.x_half - float(dom["x_min"])))
        else:
            i_new = np.full_like(state.i, amp)
        state = type(state)(v=state.v, i=i_new, time=state.time, spec=spec,
                            x_min=state.x_min, dx=state.dx, dt=state.dt,
                            sign_convention=sign, boundary=boundary)
    records = simulate(state, t_end=float(run["t_end"]),
                       probes=tuple(run.get("probes", [])),
                       output_stride=int(run.get("output_stride", 1)),
                       demod_omega=demod_omega)
    paths = []
    probe_rows = []
    for series in records.probes:
        for i, t in enumerate(series.t):
            probe_rows.append((t, series.x_probe, series.delta_v[i],
                               series.delta_i[i], series.envelope[i].real,
                               series.envelope[i].imag))
    paths.append(_write_csv(out / "probes.csv", scn,
                            [("t", "s"), ("x_probe", "m"), ("delta_v", "V"),
                             ("delta_i", "A"), ("envelope_re", "A"),
                             ("envelope_im", "A")], probe_rows))
    if records.envelope.t:
        paths.append(_write_csv(out / "envelope.csv", scn,
                                [("t", "s"), ("centroid", "m"),
                                 ("rms_width", "m"), ("mass", "A^2 m")],
                                zip(records.envelope.t, records.envelope.centroid,
                                    records.envelope.rms_width,
                                    records.envelope.mass)))
    paths.append(_write_csv(out / "energy.csv", scn,
                            [("t", "s"), ("energy", "J")], records.energies))
    return paths


_RUNNERS = {
    "evolve": _run_evolve,
    "modes": _run_modes,
    "scatter": _run_scatter,
    "franck-condon": _run_franck_condon,
    "parametric": _run_parametric,
    "telegrapher": _run_telegrapher,
}


def run_scenario(scenario: Scenario) -> list[Path]:
    """Execute a validated scenario; writes artifacts and returns their paths."""
    out = scenario.output_dir or Path(".")
    out.mkdir(parents=True, exist_ok=True)
    return _RUNNERS[scenario.kind](scenario, out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qline",
        description="Run one simulation scenario and write CSV artifacts.")
    parser.add_argument("kind", choices=KINDS, help="scenario kind")
    parser.add_argument("--config", required=True, type=Path,
                        help="YAML scenario file")
    parser.add_argument("--out", required=True, type=Path,
                        help="output directory for CSV artifacts")
    parser.add_argument("--verbose", action="store_true",
                        help="list written artifacts")
    args = parser.parse_args(argv)

    try:
        scenario = parse_scenario(args.config.read_text(), output_dir=args.out)
        if scenario.kind != args.kind:
            raise ConfigError([("kind", f"{args.kind} (from command line)",
                                scenario.kind)])
        paths = run_scenario(scenario)
    except ConfigError as exc:
        print(f"qline: configuration error\n{exc}", file=sys.stderr)
        return 2
    except (NumericalError, QlineError) as exc:
        print(f"qline: {exc}", file=sys.stderr)
        return 3
    if args.verbose:
        for path in paths:
            print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
