"""Quantumlike signal-envelope dynamics on dispersive transmission lines.

Subpackages map one-to-one onto the solver layers:

fields         grids, complex fields, Hermite polynomials, moments
line           physical line parameters, modulations, effective potential
fdtd           leapfrog reference solver for the raw coupled v/i equations
envelope       Crank-Nicolson propagator for the envelope equation
modes          Hermite-Gauss modes of the quadratic-index line
scattering     transfer-matrix transmission through potential structures
franck_condon  mode-transfer overlaps, Wigner functions, parametric excitation
cli            scenario-driven command line front end
"""

__version__ = "0.1.0"
