"""Steady-state transmission through piecewise-constant potential structures.

Plane-wave amplitudes (A, B) with psi = A e^{i kappa x} + B e^{-i kappa x} are
chained through the stack by 2x2 matrices: an interface a->b contributes
0.5 * [[1 + r, 1 - r], [1 - r, 1 + r]] with r = kappa_a / kappa_b (continuity
of psi and psi'), a segment of length L contributes diag(e^{i kappa L},
e^{-i kappa L}).  kappa_j = sqrt(2 m (E - u_j)) is taken with the principal
branch, so classically forbidden segments propagate evanescently.  The product
matrix maps left-lead amplitudes to right-lead amplitudes; its determinant is
kappa_L / kappa_R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

# relative detuning applied when E coincides with a segment potential (kappa = 0
# makes the plane-wave basis degenerate there)
EDGE_EPSILON = 1e-12


@dataclass(frozen=True)
class ScatteringStack:
    """Ordered potential segments (length, u) between two leads at u_left/u_right."""

    segments: tuple = ()
    u_left: float = 0.0
    u_right: float = 0.0
    mass: float = 1.0

    def __post_init__(self):
        segs = tuple((float(length), float(u)) for length, u in self.segments)
        for length, _ in segs:
            if length <= 0:
                raise DomainError(f"segment lengths must be positive, got {length}")
        if self.mass <= 0:
            raise DomainError(f"need mass > 0, got {self.mass}")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def rectangular_well(cls, depth: float, width: float, mass: float = 1.0):
        return cls(segments=((width, -depth),), mass=mass)


@dataclass(frozen=True)
class ScatterResult:
    """Transmission/reflection at one energy, plus the full transfer matrix."""

    energy: float
    transmission: float
    reflection: float
    matrix: np.ndarray
    energy_perturbed: bool = False  # True when E sat exactly on a segment edge


def _wavenumbers(stack: ScatteringStack, energy: float) -> tuple[np.ndarray, bool]:
    potentials = [stack.u_left, *(u for _, u in stack.segments), stack.u_right]
    perturbed = False
    if any(abs(energy - u) < 1e-14 for u in potentials):
        energy = energy + max(abs(energy), 1.0) * EDGE_EPSILON
        perturbed = True
    kappa = np.sqrt(2.0 * stack.mass * (energy - np.asarray(potentials)) + 0j)
    return kappa, perturbed


def _check_leads(stack: ScatteringStack, energy: float):
    if energy <= max(stack.u_left, stack.u_right):
        raise DomainError(f"energy {energy} does not propagate in the leads "
                          f"(u_left={stack.u_left}, u_right={stack.u_right})")


def _interface(kappa_a: complex, kappa_b: complex) -> np.ndarray:
    r = kappa_a / kappa_b
    return 0.5 * np.array([[1.0 + r, 1.0 - r], [1.0 - r, 1.0 + r]])


def transfer_matrix(stack: ScatteringStack, energy: float) -> np.ndarray:
    """Product matrix mapping left-lead (A, B) to right-lead (A, B)."""
    _check_leads(stack, energy)
    kappa, _ = _wavenumbers(stack, energy)
    m = np.eye(2, dtype=np.complex128)
    for j, (length, _) in enumerate(stack.segments):
        m = _interface(kappa[j], kappa[j + 1]) @ m
        phase = np.exp(1j * kappa[j + 1] * length)
        m = np.array([[phase, 0.0], [0.0, 1.0 / phase]]) @ m
    m = _interface(kappa[-2], kappa[-1]) @ m if stack.segments \
        else _interface(kappa[0], kappa[-1]) @ m
    return m


def transmission(stack: ScatteringStack, energy: float) -> ScatterResult:
    """T and R for a wave incident from the left; T + R = 1 for real potentials."""
    _check_leads(stack, energy)
    kappa, perturbed = _wavenumbers(stack, energy)
    m = transfer_matrix(stack, energy)
    r = -m[1, 0] / m[1, 1]
    t = m[0, 0] + m[0, 1] * r
    kappa_ratio = (kappa[-1] / kappa[0]).real
    big_t = float(kappa_ratio * abs(t) ** 2)
    big_r = float(abs(r) ** 2)
    return ScatterResult(energy=energy, transmission=big_t, reflection=big_r,
                         matrix=m, energy_perturbed=perturbed)


@dataclass(frozen=True)
class RamsauerResonance:
    """Transparency energy where an integer count of half-wavelengths fits the well.

    half_wave_count is the integer n in kappa_in * width = n pi; the even-count
    flag is retained because descriptions of the effect sometimes single out
    even ratios 2L/lambda, although a 1-D rectangular well is transparent at
    every integer count.
    """

    half_wave_count: int
    energy: float
    transmission: float

    @property
    def even_count(self) -> bool:
        return self.half_wave_count % 2 == 0


def ramsauer_resonances(depth: float, width: float, mass: float = 1.0,
                        n_max: int = 8) -> list[RamsauerResonance]:
    """Transparency energies E_n = (n pi / width)^2 / (2 mass) - depth with E_n > 0."""
    if depth <= 0 or width <= 0:
        raise DomainError(f"need depth, width > 0, got {depth}, {width}")
    stack = ScatteringStack.rectangular_well(depth, width, mass)
    out = []
    for n in range(1, n_max + 1):
        energy = (n * math.pi / width) ** 2 / (2.0 * mass) - depth
        if energy <= 0:
            continue
        result = transmission(stack, energy)
        out.append(RamsauerResonance(half_wave_count=n, energy=energy,
                                     transmission=result.transmission))
    return out


def scan(stack: ScatteringStack, e_min: float, e_max: float,
         n_samples: int) -> list[ScatterResult]:
    """Uniform T(E), R(E) table over [e_min, e_max]."""
    if n_samples < 2:
        raise DomainError(f"need n_samples >= 2, got {n_samples}")
    if not e_max > e_min:
        raise DomainError(f"need e_max > e_min, got [{e_min}, {e_max}]")
    _check_leads(stack, e_min)
    return [transmission(stack, float(e))
            for e in np.linspace(e_min, e_max, n_samples)]
