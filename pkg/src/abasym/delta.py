"""Scalar conjugation function built from nu(s) = -log(1 - |r(s)|^2) / (2 pi)."""
import cmath
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS, TOL
from .errors import DomainError, InputError, OnBand, ReflectionAtUnitModulus, TooCloseToEndpoint
from .numerics import QuadratureSpec, SampledFunction, cauchy_integral

DEFAULT_SPEC = QuadratureSpec()


def nu_from_modulus(rmod):
    rmod = np.asarray(rmod, dtype=float)
    gap = 1.0 - rmod * rmod
    if np.any(gap <= TOL.unit_modulus):
        raise ReflectionAtUnitModulus("1 - |r|^2 is numerically zero")
    return -np.log1p(-rmod * rmod) / (2 * math.pi)


def nu(sd):
    """nu on the spectral grid of ``sd``."""
    return SampledFunction(sd.z, nu_from_modulus(sd.r_mod))


@dataclass(frozen=True)
class DeltaData:
    z0: float
    nu: SampledFunction          # samples on [-z0, z0], endpoints included
    nu_z0: float
    nu_minus_z0: float
    r_plus: complex              # r(+z0), cubic interpolation
    r_minus: complex             # r(-z0)
    delta0_plus: complex
    delta0_minus: complex
    tail_coefficient: float      # integral of nu over the band

    @property
    def pv_window(self):
        return DEFAULTS.pv_window_steps * float(np.min(np.diff(self.nu.grid)))


def build_delta_data(sd, z0, spec=DEFAULT_SPEC):
    """nu restricted to [-z0, z0] with interpolated endpoint values, and delta0(+-z0)."""
    z0 = float(z0)
    z = sd.z
    if not (z0 > 0 and z0 <= z.max() and -z0 >= z.min()):
        raise DomainError(f"z0 = {z0} is outside the spectral grid")
    if z0 < DEFAULTS.z_min:
        raise DomainError(f"z0 = {z0} lies in the spectral dead zone")
    r_plus = sd.r_at(z0)
    r_minus = sd.r_at(-z0)
    inside = (z > -z0) & (z < z0)
    # keep endpoint cells from degenerating
    gap = 1e-9 * max(1.0, z0)
    inside &= (z - (-z0) > gap) & (z0 - z > gap)
    s = np.concatenate(([-z0], z[inside], [z0]))
    vals = np.concatenate(([nu_from_modulus(abs(r_minus))], nu_from_modulus(sd.r_mod[inside]),
                           [nu_from_modulus(abs(r_plus))]))
    f = SampledFunction(s, vals)
    nu_p, nu_m = float(vals[-1]), float(vals[0])
    partial = DeltaData(z0, f, nu_p, nu_m, r_plus, r_minus, 1.0 + 0j, 1.0 + 0j, float(np.trapezoid(vals, s)))
    d0p = cmath.exp(1j * beta_phase(z0, +1, partial, spec))
    d0m = cmath.exp(1j * beta_phase(-z0, -1, partial, spec))
    return DeltaData(z0, f, nu_p, nu_m, r_plus, r_minus, d0p, d0m, partial.tail_coefficient)


def synthetic_delta_data(z0, nu_values, grid=None):
    """DeltaData from prescribed nu samples (test and model construction helper)."""
    grid = np.linspace(-z0, z0, len(nu_values)) if grid is None else np.asarray(grid, dtype=float)
    f = SampledFunction(grid, np.asarray(nu_values, dtype=float))
    rp = math.sqrt(1 - math.exp(-2 * math.pi * f.values[-1]))
    rm = math.sqrt(1 - math.exp(-2 * math.pi * f.values[0]))
    partial = DeltaData(z0, f, float(f.values[-1]), float(f.values[0]), rp, rm, 1.0 + 0j, 1.0 + 0j,
                        float(np.trapezoid(f.values, f.grid)))
    d0p = cmath.exp(1j * beta_phase(z0, +1, partial))
    d0m = cmath.exp(1j * beta_phase(-z0, -1, partial))
    return DeltaData(z0, f, partial.nu_z0, partial.nu_minus_z0, rp, rm, d0p, d0m, partial.tail_coefficient)


def _on_band(z, z0):
    return z.imag == 0 and -z0 <= z.real <= z0


def delta(z, dd, spec=DEFAULT_SPEC):
    """delta(z) = exp(i * integral nu(s) / (s - z) ds) off the band [-z0, z0]."""
    z = complex(z)
    if _on_band(z, dd.z0):
        raise OnBand(f"z = {z} lies on the band; use delta_boundary")
    return cmath.exp(1j * cauchy_integral(dd.nu, z, spec))


def delta_boundary(s, dd, spec=DEFAULT_SPEC):
    """Boundary values (delta_+, delta_-) from above and below the band."""
    s = float(s)
    window = spec.pv_window if spec.pv_window is not None else dd.pv_window
    if not (-dd.z0 + window <= s <= dd.z0 - window):
        raise TooCloseToEndpoint(f"s = {s} is within {window:.3g} of a band endpoint")
    pv = cauchy_integral(dd.nu, s, spec).real
    nus = float(dd.nu(s))
    return cmath.exp(1j * pv - math.pi * nus), cmath.exp(1j * pv + math.pi * nus)


def _endpoint_sign(endpoint):
    if endpoint in (+1, "+", "+z0", "plus"):
        return 1
    if endpoint in (-1, "-", "-z0", "minus"):
        return -1
    raise InputError(f"endpoint must be +z0 or -z0, got {endpoint!r}")


def beta_phase(z, endpoint, dd, spec=DEFAULT_SPEC):
    """Endpoint phase with delta(z) = (z - z0)^{i nu(z0)} exp(i beta(z, +z0)) near +z0
    and delta(z) = (-z0 - z)^{-i nu(-z0)} exp(i beta(z, -z0)) near -z0.

    Evaluated as the Cauchy integral of nu - nu(endpoint) plus one logarithm,
    which equals the unit-interval form with the log(z - z0 + 1) pairing at +z0.
    """
    sign = _endpoint_sign(endpoint)
    z = complex(z)
    z0 = dd.z0
    nu_e = dd.nu_z0 if sign > 0 else dd.nu_minus_z0
    g = SampledFunction(dd.nu.grid, dd.nu.values - nu_e)
    body = cauchy_integral(g, z, spec)
    if nu_e == 0:
        return body
    arg = z + z0 if sign > 0 else z0 - z
    if arg == 0:
        raise DomainError("beta is evaluated near its own endpoint only")
    return body - sign * nu_e * cmath.log(arg)


def beta_phase_unit_interval(z, endpoint, dd, pairing="shifted", spec=DEFAULT_SPEC):
    """Unit-interval form: -+nu(+-z0) log(w) + integral (nu - chi nu(+-z0)) / (s - z).

    chi is the indicator of [z0 - 1, z0] (at +z0) or [-z0, -z0 + 1] (at -z0),
    clipped to the band. ``pairing`` selects the log argument w:
    'shifted' uses z - z0 + 1 at +z0 and 1 - z - z0 at -z0; 'literal' pairs the
    signs directly, z + z0 - 1 at +z0 and z - z0 + 1 at -z0.
    """
    sign = _endpoint_sign(endpoint)
    z = complex(z)
    z0 = dd.z0
    nu_e = dd.nu_z0 if sign > 0 else dd.nu_minus_z0
    full = cauchy_integral(dd.nu, z, spec) if not _on_band(z, z0) else None
    lo, hi = (max(z0 - 1, -z0), z0) if sign > 0 else (-z0, min(-z0 + 1, z0))
    if pairing == "shifted":
        w = z - z0 + 1 if sign > 0 else 1 - z - z0
    elif pairing == "literal":
        w = z + z0 - 1 if sign > 0 else z - z0 + 1
    else:
        raise InputError("pairing must be 'shifted' or 'literal'")
    if full is None:
        # at the endpoint itself: integral of (nu - chi nu_e) with the chi part handled exactly
        g = SampledFunction(dd.nu.grid, dd.nu.values - nu_e)
        body = cauchy_integral(g, z, spec)
        # remaining nu_e * integral over the band outside chi
        rest = 0j
        if sign > 0 and lo > -z0:
            rest = nu_e * (cmath.log(lo - z) - cmath.log(-z0 - z))
        if sign < 0 and hi < z0:
            rest = nu_e * (cmath.log(z0 - z) - cmath.log(hi - z))
        return -sign * nu_e * cmath.log(w) + body + rest
    chi = cmath.log(hi - z) - cmath.log(lo - z)
    return -sign * nu_e * cmath.log(w) + full - nu_e * chi


def delta0(endpoint, dd, spec=DEFAULT_SPEC):
    """delta0(+-z0) = exp(i beta(+-z0, +-z0)); unimodular for real nu."""
    sign = _endpoint_sign(endpoint)
    return cmath.exp(1j * beta_phase(sign * dd.z0, sign, dd, spec))


def endpoint_remainder(d, endpoint, dd, angle=None, spec=DEFAULT_SPEC):
    """|delta(z) * (local power)^{-1} - delta0| at distance d from the endpoint along a ray.

    The default ray leaves +z0 at angle pi/4 and -z0 at angle 3 pi/4."""
    sign = _endpoint_sign(endpoint)
    if angle is None:
        angle = math.pi / 4 if sign > 0 else 3 * math.pi / 4
    out = []
    for dist in np.atleast_1d(d):
        z = sign * dd.z0 + dist * cmath.exp(1j * angle)
        if sign > 0:
            local = cmath.exp(1j * dd.nu_z0 * cmath.log(z - dd.z0))
            d0 = dd.delta0_plus
        else:
            local = cmath.exp(-1j * dd.nu_minus_z0 * cmath.log(-dd.z0 - z))
            d0 = dd.delta0_minus
        out.append(abs(delta(z, dd, spec) / local - d0))
    return np.array(out)


def delta_rows(dd, spec=DEFAULT_SPEC):
    """(s, nu, Re d+, Im d+, Re d-, Im d-) at band nodes away from the endpoints."""
    rows = []
    w = dd.pv_window
    for s, v in zip(dd.nu.grid, dd.nu.values):
        if -dd.z0 + w <= s <= dd.z0 - w:
            dp, dm = delta_boundary(s, dd, spec)
            rows.append((s, v, dp.real, dp.imag, dm.real, dm.imag))
    return np.array(rows)


DELTA_COLUMNS = ("s", "nu", "Re delta+", "Im delta+", "Re delta-", "Im delta-")
