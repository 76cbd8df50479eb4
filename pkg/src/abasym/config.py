"""Tolerances and default discretizations.

Call sites read from ``TOL`` and ``DEFAULTS`` rather than hard-coding numbers.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    pole: float = 1e-14               # distance to a Gamma pole
    node: float = 1e-14               # z on a quadrature node
    blowup: float = 1e8               # Jost column norm limit
    unitarity: float = 1e-6           # | |s11|^2 - |s21|^2 - 1 |
    unit_modulus: float = 1e-12       # smallest admissible 1 - |r|^2
    neutral: float = 1e-14            # |Re(2 i t theta)| treated as zero
    beta_gamma: float = 1e-14         # |beta*gamma + 1|
    endpoint_decay: float = 1e-8      # |A0|, |B0| at the grid ends
    escape: float = 1e-4              # relative amplitude near the left end
    fixed_point: float = 1e-12
    fixed_point_max_iter: int = 200
    stability: float = 0.1            # dt * max|A|^2
    pcf_series_radius: float = 6.0    # Maclaurin / asymptotic crossover for D_a
    pcf_abs: float = 1e-9
    winding_jump: float = 0.5 * 3.141592653589793


@dataclass(frozen=True)
class Defaults:
    amplitude: float = 0.3
    z_min: float = 0.05
    z_max: float = 4.0
    z_nodes: int = 801
    half_width: float = 30.0
    x_nodes: int = 4096
    winding_half_width: float = 6.0
    winding_height: float = 6.0
    winding_samples: int = 2000
    pde_half_width: float = 60.0
    pde_nodes: int = 4096
    pde_dt: float = 0.01
    pde_damping: float = 0.5
    pv_window_steps: int = 2
    contour_truncation: float = 8.0


TOL = Tolerances()
DEFAULTS = Defaults()
